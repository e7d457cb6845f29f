#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bosegrid/errors.hpp"
#include "bosegrid/hgfunc.hpp"
#include "bosegrid/sampling.hpp"

using namespace bosegrid;

namespace {

const double kPi = std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

// Half-integer DFT written straight from the definition, in long double.
std::vector<cplx> naive_dft(const std::vector<cplx>& x, int sign) {
    const int N = static_cast<int>(x.size());
    std::vector<cplx> out(x.size());
    for (int a = 0; a < N; ++a) {
        std::complex<long double> s = 0;
        const long double p = a - 0.5L * (N - 1);
        for (int b = 0; b < N; ++b) {
            const long double j = b - 0.5L * (N - 1);
            const long double ang = sign * 2.0L * std::numbers::pi_v<long double> * j * p / N;
            s += std::complex<long double>(x[b].real(), x[b].imag()) * std::complex<long double>(std::cos(ang), std::sin(ang));
        }
        s /= std::sqrt(static_cast<long double>(N));
        out[a] = cplx(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
    return out;
}

std::vector<cplx> random_vector(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(nd(rng), nd(rng));
    return v;
}

double norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (auto z : v) s += std::norm(z);
    return std::sqrt(s);
}

// sinc^2(a phi / pi): Fourier transform is a triangle on [-2a, 2a].
FunctionDescriptor triangle_descriptor(double a) {
    FunctionDescriptor d;
    d.f = [a](double p) { const double s = sinc(a * p / kPi); return cplx(s * s); };
    d.fhat = [a](double k) {
        const double t = 1.0 - std::abs(k) / (2.0 * a);
        return cplx(t > 0 ? kPi / a * t / std::sqrt(2 * kPi) : 0.0);
    };
    d.tails = [](double, double) { return TailWeights{}; };
    return d;
}

}  // namespace

TEST_CASE("grid geometry") {
    for (int N : {2, 16, 64, 1024})
        for (double m : {0.3, 1.0, 7.0}) {
            const SamplingGrid g = SamplingGrid::make(N, m);
            CHECK(g.delta_phi * g.delta_kappa == doctest::Approx(2 * kPi / N).epsilon(1e-14));
            CHECK(g.K() / g.F() == doctest::Approx(m).epsilon(1e-14));
            CHECK(g.mass() == doctest::Approx(m).epsilon(1e-14));
            CHECK(g.F() == doctest::Approx(N * g.delta_phi / 2).epsilon(1e-15));
            for (int k = 0; k < N; ++k) {
                CHECK(g.phi(k) != 0.0);
                CHECK(g.phi(k) == doctest::Approx(-g.phi(N - 1 - k)).epsilon(1e-15));
            }
            CHECK(g.phi(N - 1) == doctest::Approx(g.F() - g.delta_phi / 2));
        }
    CHECK_THROWS_AS(SamplingGrid::make(7, 1.0), InvalidArgument);
    CHECK_THROWS_AS(SamplingGrid::make(8, -1.0), InvalidArgument);
}

TEST_CASE("finite Fourier transform against the definition") {
    for (int N : {2, 6, 16, 64}) {
        const auto x = random_vector(N, 11 + N);
        const auto X = fft_forward(x);
        const auto ref = naive_dft(x, -1);
        for (int p = 0; p < N; ++p) CHECK(std::abs(X[p] - ref[p]) < 1e-12);
        const auto y = fft_inverse(x);
        const auto ref_inv = naive_dft(x, +1);
        for (int p = 0; p < N; ++p) CHECK(std::abs(y[p] - ref_inv[p]) < 1e-12);
    }
}

TEST_CASE("half-integer phases") {
    for (int N : {4, 64})
        for (long J = -(N - 1); J <= N - 1; J += 2)
            for (long P : {-(N - 1L), -1L, 1L, 3L, N - 1L}) {
                const long double ang = 2.0L * std::numbers::pi_v<long double> * (J / 2.0L) * (P / 2.0L) / N;
                const cplx ref(static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang)));
                CHECK(std::abs(half_integer_phase(J, P, N, +1) - ref) < 1e-14);
                CHECK(std::abs(half_integer_phase(J, P, N, -1) - std::conj(ref)) < 1e-14);
            }
}

TEST_CASE("unitarity, Parseval and round trip") {
    for (int N : {8, 64, 256}) {
        const auto x = random_vector(N, 3 * N);
        const auto X = fft_forward(x);
        CHECK(norm(X) == doctest::Approx(norm(x)).epsilon(1e-12));
        const auto back = fft_inverse(X);
        double err = 0.0;
        for (int i = 0; i < N; ++i) err = std::max(err, std::abs(back[i] - x[i]));
        CHECK(err < 1e-13);
    }
    // Grid Parseval with sqrt(Delta) weights on the samples of phi_3.
    const SamplingGrid g = SamplingGrid::make(64, 1.5);
    std::vector<cplx> a(64);
    for (int k = 0; k < 64; ++k) a[k] = std::sqrt(g.delta_phi) * eval_hg(3, 1.5, g.phi(k));
    const auto A = fft_forward(a);
    double sf = 0.0, sk = 0.0;
    for (int k = 0; k < 64; ++k) {
        sf += std::norm(a[k]);
        sk += std::norm(A[k]);
    }
    CHECK(sk == doctest::Approx(sf).epsilon(1e-12));
}

TEST_CASE("reconstruction") {
    const SamplingGrid g = SamplingGrid::make(64, 1.0);
    const SampledFunction s = sample([](double p) { return cplx(eval_hg(0, 1.0, p)); }, g);
    for (int k = 0; k < 64; ++k) CHECK(reconstruct(s, g.phi(k)) == s.values[k]);
    const double probe = 0.5 * g.delta_phi * 3.3;
    CHECK(std::abs(reconstruct(s, probe) - eval_hg(0, 1.0, probe)) < 1e-4);

    SampledFunction one{g, std::vector<cplx>(64, 0.0)};
    one.values[40] = 1.0;
    for (int i = 0; i < 100; ++i) {
        const double p = -g.F() + 2.0 * g.F() * i / 99.0 + 0.013;
        CHECK(std::abs(reconstruct(one, p) - sinc((p - g.phi(40)) / g.delta_phi)) < 1e-14);
    }
}

TEST_CASE("field-side bound covers the brute-force reconstruction error") {
    const SamplingGrid g = SamplingGrid::make(64, 1.0);
    for (int n : {0, 10}) {
        const SampledFunction s = sample([n](double p) { return cplx(eval_hg(n, 1.0, p)); }, g);
        // ||f - f~||^2 on a dense grid well past F.
        const double h = g.delta_phi / 16;
        double err2 = 0.0;
        for (double p = -3 * g.F(); p <= 3 * g.F(); p += h) err2 += std::norm(reconstruct(s, p) - eval_hg(n, 1.0, p)) * h;
        const TailWeights t = hg_tails(n, 1.0, g.F(), g.K());
        const auto b = sampling_error_bound(t, g.F(), g.K());
        // 1e-12: roundoff floor of the 64-term sinc sum on the dense probe grid.
        CHECK(std::sqrt(err2) <= b.first + 1e-12);
        CHECK(b.first > 0.0);
        const auto b2 = sampling_error_bound(hg_tails(n, 1.0, 2 * g.F(), 2 * g.K()), 2 * g.F(), 2 * g.K());
        CHECK(b2.first < b.first);
        CHECK(b2.second < b.second);
    }
    const auto z = sampling_error_bound(TailWeights{}, 1.0, 1.0);
    CHECK(z.first == 0.0);
    CHECK(z.second == 0.0);
}

TEST_CASE("hg_tails agrees with numeric tails") {
    const FunctionDescriptor d = hg_descriptor(4, 2.0);
    const TailWeights a = hg_tails(4, 2.0, 2.5, 3.0);
    const TailWeights b = numeric_tails(d, 2.5, 3.0, 10.0, 12.0);
    CHECK(a.w_F == doctest::Approx(b.w_F).epsilon(1e-8));
    CHECK(a.w_K == doctest::Approx(b.w_K).epsilon(1e-8));
    CHECK(a.r_F == doctest::Approx(b.r_F).epsilon(1e-8));
    CHECK(a.r_K == doctest::Approx(b.r_K).epsilon(1e-8));
    CHECK(a.boundary_f.second == doctest::Approx(std::pow(eval_hg(4, 2.0, 2.5), 2)).epsilon(1e-12));
}

TEST_CASE("aliasing identities") {
    const SamplingGrid g = SamplingGrid::make(64, 1.0);
    const FunctionDescriptor d = hg_descriptor(0, 1.0);
    const SampledFunction fa = alias(d, g);
    const SampledFunction ka = alias_ft(d, g);
    const auto X = fft_forward(fa.values);
    for (int p = 0; p < 64; ++p) CHECK(std::abs(X[p] - ka.values[p]) < 1e-12);

    // Alias minus raw samples: the n = +-1 images dominate.
    double diff = 0.0, image = 0.0;
    for (int k = 0; k < 64; ++k) {
        diff = std::max(diff, std::abs(fa.values[k] - std::sqrt(g.delta_phi) * eval_hg(0, 1.0, g.phi(k))));
        const double L = 64 * g.delta_phi;
        image = std::max(image, std::sqrt(g.delta_phi) * 2.0 * eval_hg(0, 1.0, L - std::abs(g.phi(k))));
    }
    CHECK(diff <= image);

    // Band-limited input: only the n = 0 image survives on the conjugate side.
    const FunctionDescriptor tri = triangle_descriptor(g.K() / 2);
    const SampledFunction ta = alias_ft(tri, g);
    for (int p = 0; p < 64; ++p) CHECK(std::abs(ta.values[p] - std::sqrt(g.delta_kappa) * tri.fhat(g.kappa(p))) < 1e-15);
}

TEST_CASE("FFT versus continuous transform") {
    const SamplingGrid g = SamplingGrid::make(64, 1.0);
    const FftErrorReport r0 = fft_vs_continuous_error(hg_descriptor(0, 1.0), g);
    const FftErrorReport r10 = fft_vs_continuous_error(hg_descriptor(10, 1.0), g);
    // The lhs is a squared norm; 1e-28 is its double-precision floor (|error| ~ 1e-14).
    const double floor = 1e-28;
    CHECK(r0.lhs_field_to_kappa <= r0.rhs + floor);
    CHECK(r0.lhs_kappa_to_field <= r0.rhs + floor);
    CHECK(r10.lhs_field_to_kappa <= r10.rhs + floor);
    CHECK(r10.lhs_kappa_to_field <= r10.rhs + floor);
    CHECK(r10.lhs_field_to_kappa > r0.lhs_field_to_kappa);
}

TEST_CASE("lattice bound") {
    TailWeights t;
    t.w_F = 1e-5;
    t.w_K = 2e-5;
    t.r_K = 3e-4;
    t.r_F = 4e-4;
    t.boundary_f = {1e-9, 1e-9};
    t.boundary_fhat = {2e-9, 2e-9};
    const double F = 8.0, K = 9.0;
    const auto single = sampling_error_bound(t, F, K);
    const auto one = lattice_error_bound({t}, LatticeRWeights{t.r_K, t.r_F}, F, K, 1);
    const double c = std::sqrt(kPi * kPi / 4 + 1);
    CHECK(one.first - single.first == doctest::Approx((c - kPi / 2) * t.r_K / K).epsilon(1e-12));
    CHECK(one.second - single.second == doctest::Approx((c - kPi / 2) * t.r_F / F).epsilon(1e-12));

    // Product of two identical sites: twice the local terms plus the lattice r term.
    const LatticeRWeights r{5e-4, 6e-4};
    const auto two = lattice_error_bound({t, t}, r, F, K, 2);
    const double local = single.first - kPi / 2 * t.r_K / K;
    CHECK(two.first == doctest::Approx(2 * local + (kPi * kPi / 4 + 1) * r.r_K / (K * K)).epsilon(1e-12));
    const auto wider = lattice_error_bound({t, t}, r, 2 * F, 2 * K, 2);
    CHECK(wider.first < two.first);
    CHECK_THROWS_AS(lattice_error_bound({t}, r, F, K, 2), InvalidArgument);
}
