#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bosegrid/errors.hpp"
#include "bosegrid/finiterep.hpp"
#include "bosegrid/measure.hpp"

using namespace bosegrid;
using namespace bosegrid::measure;

namespace {

const double kPi = std::numbers::pi;

// Geometric sum term by term.
cplx ank_brute(double mu_plus_k, int k, int n_r) {
    const int M = 1 << n_r;
    const double mu = mu_plus_k - k;
    std::complex<long double> s = 0.0L;
    for (int x = 0; x < M; ++x) s += std::polar(1.0L, -2.0L * static_cast<long double>(kPi) * mu * x / M);
    return cplx(static_cast<double>(s.real() / M), static_cast<double>(s.imag() / M));
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXcd pauli1(int code) {
    Eigen::MatrixXcd p(2, 2);
    switch (code) {
        case 0: p << 1, 0, 0, 1; break;
        case 1: p << 0, 1, 1, 0; break;
        case 2: p << 0, cplx(0, -1), cplx(0, 1), 0; break;
        default: p << 1, 0, 0, -1; break;
    }
    return p;
}

Eigen::MatrixXcd random_density(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("closed-form amplitudes against the geometric sum") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 40.0);
    for (int n_r : {3, 5, 7})
        for (int t = 0; t < 30; ++t) {
            const double e = u(rng);
            const int k = static_cast<int>(u(rng)) % (1 << n_r);
            CHECK(std::abs(ank_value(e, k, n_r) - ank_brute(e, k, n_r)) < 1e-12);
        }
    // Integer offsets: exact hit and exact miss, including wrap-around by M.
    CHECK(std::abs(ank_value(5.0, 5, 4)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(ank_value(21.0, 5, 4)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(ank_value(6.0, 5, 4)) < 1e-15);
    CHECK(std::abs(ank_value(21.0, 5, 4) - ank_brute(21.0, 5, 4)) < 1e-12);
    // Half-way between bins: |a|^2 = (1 / (M sin(pi/(2M))))^2 -> 4/pi^2.
    const double half = std::norm(ank_value(5.5, 5, 10));
    CHECK(half == doctest::Approx(std::pow(1.0 / (1024 * std::sin(kPi / 2048)), 2)).epsilon(1e-12));
    CHECK_THROWS_AS(ank_value(1.0, 16, 4), InvalidArgument);
}

TEST_CASE("register size check") {
    const FiniteRep r = build(64, 1.0);
    const Eigensystem e = diagonalize(r);
    CHECK_THROWS_AS(QPEConfig::make(r, e, 6), InvalidArgument);
    const QPEConfig c = QPEConfig::make(r, e, 7);
    CHECK(c.theta == doctest::Approx(1.0 / 128));
    CHECK(c.energies(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("eigenstates land on their bin") {
    const FiniteRep r = build(64, 1.0);
    const Eigensystem e = diagonalize(r);
    const QPEConfig cfg = QPEConfig::make(r, e, 7);
    const int nb = low_energy_cutoff(r, e, 1e-4);
    for (int n : {0, 5, 20}) {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(1, 64);
        c(0, n) = 1.0;
        const AncillaDistribution d = qpe_distribution(c, cfg, nb);
        double s = 0.0;
        for (double p : d.probs) s += p;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.probs[n] > 1.0 - 1e-6);
        CHECK(d.p_all < 1e-6);
        CHECK(high_energy_weight(c, nb) == 0.0);
    }
}

TEST_CASE("mixtures weigh the per-level patterns") {
    const FiniteRep r = build(32, 1.0);
    const Eigensystem e = diagonalize(r);
    const QPEConfig cfg = QPEConfig::make(r, e, 6);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd c(3, 32);
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < 32; ++n) c(i, n) = cplx(g(rng), g(rng));
    c /= c.norm();
    const int nb = 9;
    const AncillaDistribution d = qpe_distribution(c, cfg, nb);
    double p1max = 0.0, p_all = 0.0;
    for (int k = 0; k < 64; ++k) {
        double ref = 0.0;
        for (int n = 0; n < 32; ++n) ref += c.col(n).squaredNorm() * std::norm(ank_brute(cfg.energies(n), k, 6));
        CHECK(d.probs[k] == doctest::Approx(ref).epsilon(1e-10));
        if (k >= nb) {
            p1max = std::max(p1max, ref);
            p_all += ref;
        }
    }
    CHECK(d.p1max == doctest::Approx(p1max).epsilon(1e-10));
    CHECK(d.p_all == doctest::Approx(p_all).epsilon(1e-10));
    CHECK(high_energy_weight(c, nb) == doctest::Approx(c.rightCols(32 - nb).squaredNorm()).epsilon(1e-14));
    CHECK_THROWS_AS(qpe_distribution(2.0 * c, cfg, nb), InvalidArgument);
}

TEST_CASE("field histograms") {
    const FiniteRep r = build(16, 1.0);
    Eigen::VectorXcd pos = Eigen::VectorXcd::Zero(16);
    pos(3) = 1.0;
    const auto [hp, hk] = field_histograms(pos, r);
    for (int k = 0; k < 16; ++k) {
        CHECK(hp.probs[k] == doctest::Approx(k == 3 ? 1.0 : 0.0));
        CHECK(hk.probs[k] == doctest::Approx(1.0 / 16).epsilon(1e-12));
        CHECK(hp.support[k] == doctest::Approx(r.grid.phi(k)));
        CHECK(hk.support[k] == doctest::Approx(r.grid.kappa(k)));
    }
    // The ground state looks the same on both sides at m = 1.
    const Eigensystem e = diagonalize(r);
    const auto [gp, gk] = field_histograms(Eigen::VectorXcd(e.states.col(0).cast<cplx>()), r);
    for (int k = 0; k < 16; ++k) CHECK(gp.probs[k] == doctest::Approx(gk.probs[k]).epsilon(1e-10));
    CHECK_THROWS_AS(field_histograms(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(8, 8)), r), InvalidArgument);
}

TEST_CASE("Pauli strings against Kronecker products") {
    for (int n_q : {1, 2, 3}) {
        const std::uint32_t count = 1u << (2 * n_q);
        for (std::uint32_t v = 0; v < count; ++v) {
            Eigen::MatrixXcd ref = Eigen::MatrixXcd::Identity(1, 1);
            for (int q = 0; q < n_q; ++q) ref = kron(ref, pauli1((v >> (2 * (n_q - 1 - q))) & 3u));
            CHECK((pauli_string(v, n_q) - ref).cwiseAbs().maxCoeff() < 1e-15);
        }
    }
    // Orthogonality Tr(P_u P_v) = 2^n_q delta_uv.
    for (std::uint32_t u = 0; u < 16; ++u)
        for (std::uint32_t v = 0; v < 16; ++v) {
            const cplx t = (pauli_string(u, 2) * pauli_string(v, 2)).trace();
            CHECK(std::abs(t - cplx(u == v ? 4.0 : 0.0)) < 1e-14);
        }
    CHECK_THROWS_AS(pauli_string(0, 0), InvalidArgument);
    CHECK_THROWS_AS(pauli_string(0, 9), InvalidArgument);
}

TEST_CASE("tomography round trip") {
    std::mt19937_64 rng(17);
    for (int n_q : {2, 3, 4}) {
        const int dim = 1 << n_q;
        const FiniteRep r = build(dim, 1.0);
        const Eigensystem e = diagonalize(r);
        const Eigen::MatrixXcd rho = random_density(dim, rng);
        const QSTResult q = qst_roundtrip(rho, n_q, e);
        CHECK(q.roundtrip_error < 1e-12);
        for (std::uint32_t v = 0; v < q.decomposition.coeffs.size(); ++v)
            CHECK(q.decomposition.coeffs[v] == doctest::Approx((pauli_string(v, n_q) * rho).trace().real()).epsilon(1e-12));
        CHECK(q.decomposition.coeffs[0] == doctest::Approx(1.0).epsilon(1e-14));
        double s = 0.0;
        for (int n = 0; n < dim; ++n) {
            const double ref = (e.states.col(n).cast<cplx>().adjoint() * rho * e.states.col(n).cast<cplx>())(0, 0).real();
            CHECK(q.p_n[n] == doctest::Approx(ref).epsilon(1e-12));
            s += q.p_n[n];
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    const FiniteRep r8 = build(8, 1.0);
    CHECK_THROWS_AS(qst_roundtrip(Eigen::MatrixXcd::Identity(4, 4) / 4.0, 2, diagonalize(r8)), InvalidArgument);
}

TEST_CASE("shot sampling") {
    const std::vector<double> p = {0.1, 0.0, 0.5, 0.4};
    const long shots = 400000;
    const auto a = sample_shots(p, shots, 42);
    const auto b = sample_shots(p, shots, 42);
    CHECK(a == b);
    CHECK(a != sample_shots(p, shots, 43));
    long total = 0;
    for (long c : a) total += c;
    CHECK(total == shots);
    CHECK(a[1] == 0);
    for (size_t i = 0; i < p.size(); ++i) {
        const double sigma = std::sqrt(shots * p[i] * (1 - p[i]));
        CHECK(std::abs(a[i] - shots * p[i]) <= 5 * sigma + 1e-9);
    }
    CHECK(sample_shots(p, 0, 1) == std::vector<long>(4, 0));
    CHECK_THROWS_AS(sample_shots({0.5, -0.1}, 10, 1), InvalidArgument);
    CHECK_THROWS_AS(sample_shots(p, -1, 1), InvalidArgument);
}
