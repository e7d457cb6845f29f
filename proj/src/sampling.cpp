#include "bosegrid/sampling.hpp"

#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bosegrid/errors.hpp"
#include "bosegrid/hgfunc.hpp"
#include "bosegrid/quad.hpp"

namespace bosegrid {

namespace {

// int_{|x|>X} x^{2p} psi_n(x)^2 dx for the unit-mass HG function, returned as sqrt.
double hg_moment_tail(int n, double X, int p) {
    const double turn = std::sqrt(2.0 * n + 1.0);
    double ref = eval_hg_scaled(n, 1.0, std::max(X, turn)).log_abs();
    if (!std::isfinite(ref)) ref = -0.5 * X * X;
    auto integrand = [&](double x) {
        const ScaledValue s = eval_hg_scaled(n, 1.0, x);
        if (s.mant == 0.0) return 0.0;
        // x^{2p} folded into the exponent: far out x^2 overflows before the Gaussian underflows.
        return s.mant * s.mant * std::exp(2.0 * (s.log_scale - ref) + 2.0 * p * std::log(x));
    };
    double total = 0.0;
    if (X < turn) {
        const int pieces = std::max(1, n / 4);
        const double h = (turn - X) / pieces;
        for (int i = 0; i < pieces; ++i)
            total += quad::finite(integrand, X + i * h, X + (i + 1) * h, 1e-10).value;
    }
    total += quad::half_line(integrand, std::max(X, turn), 1e-10).value;
    return total <= 0.0 ? 0.0 : std::sqrt(2.0 * total) * std::exp(ref);
}

double side_integral(const std::function<double(double)>& g, double a, double b) {
    if (b <= a) return 0.0;
    const double h = 0.5;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    const double w = (b - a) / pieces;
    double total = 0.0;
    for (int i = 0; i < pieces; ++i)
        total += quad::finite(g, a + i * w, a + (i + 1) * w, 1e-12, 1e-300).value;
    return total;
}

void check_grid(const SamplingGrid& g) {
    if (g.n_points < 2 || g.n_points % 2 != 0)
        throw InvalidArgument("grid needs an even number of points >= 2");
}

}  // namespace

SamplingGrid SamplingGrid::make(int n_phi, double mass) {
    if (n_phi < 2 || n_phi % 2 != 0) throw InvalidArgument("N_phi must be even and >= 2");
    if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
    SamplingGrid g;
    g.n_points = n_phi;
    g.delta_phi = std::sqrt(2.0 * std::numbers::pi / (n_phi * mass));
    g.delta_kappa = std::sqrt(2.0 * std::numbers::pi * mass / n_phi);
    return g;
}

TailWeights hg_tails(int n, double m0, double F, double K) {
    TailWeights t;
    t.w_F = tail_weight(n, m0, F);
    t.w_K = tail_weight(n, 1.0 / m0, K);
    // x = phi sqrt(m0): phi^2 = x^2 / m0.
    t.r_F = hg_moment_tail(n, F * std::sqrt(m0), 1) / std::sqrt(m0);
    t.r_K = hg_moment_tail(n, K / std::sqrt(m0), 1) * std::sqrt(m0);
    const double fF = eval_hg(n, m0, F);
    const double fK = eval_hg(n, 1.0 / m0, K);
    t.boundary_f = {fF * fF, fF * fF};
    t.boundary_fhat = {fK * fK, fK * fK};
    return t;
}

FunctionDescriptor hg_descriptor(int n, double m0) {
    FunctionDescriptor d;
    d.f = [n, m0](double x) { return cplx(eval_hg(n, m0, x), 0.0); };
    d.fhat = [n, m0](double k) { return eval_hg_ft(n, m0, k); };
    d.tails = [n, m0](double F, double K) { return hg_tails(n, m0, F, K); };
    return d;
}

TailWeights numeric_tails(const FunctionDescriptor& d, double F, double K, double reach_phi,
                          double reach_kappa) {
    auto a2 = [&](const std::function<cplx(double)>& f, int p) {
        return [&f, p](double x) { return std::pow(x, 2 * p) * std::norm(f(x)); };
    };
    auto both = [&](const std::function<cplx(double)>& f, double W, double reach, int p) {
        auto g = a2(f, p);
        auto gm = [&g](double x) { return g(-x); };
        return side_integral(g, W, reach) + side_integral(gm, W, reach);
    };
    TailWeights t;
    t.w_F = std::sqrt(both(d.f, F, reach_phi, 0));
    t.w_K = std::sqrt(both(d.fhat, K, reach_kappa, 0));
    t.r_F = std::sqrt(both(d.f, F, reach_phi, 1));
    t.r_K = std::sqrt(both(d.fhat, K, reach_kappa, 1));
    t.boundary_f = {std::norm(d.f(-F)), std::norm(d.f(F))};
    t.boundary_fhat = {std::norm(d.fhat(-K)), std::norm(d.fhat(K))};
    return t;
}

SampledFunction sample(const std::function<cplx(double)>& f, const SamplingGrid& g) {
    check_grid(g);
    SampledFunction s{g, std::vector<cplx>(static_cast<size_t>(g.n_points))};
    for (int k = 0; k < g.n_points; ++k) s.values[static_cast<size_t>(k)] = f(g.phi(k));
    return s;
}

cplx reconstruct(const SampledFunction& s, double phi) {
    const SamplingGrid& g = s.grid;
    double u = phi / g.delta_phi;
    // Snap onto a node when within rounding of one, so nodes reproduce exactly.
    const double node = std::round(u - 0.5) + 0.5;
    if (std::abs(u - node) < 1e-12 * std::max(1.0, std::abs(u))) u = node;
    cplx acc = 0.0;
    for (int k = 0; k < g.n_points; ++k) {
        const double x = u - g.index(k);
        const double sc = x == 0.0 ? 1.0 : boost::math::sin_pi(x) / (std::numbers::pi * x);
        acc += s.values[static_cast<size_t>(k)] * sc;
    }
    return acc;
}

cplx half_integer_phase(long J, long P, int n, int sign) {
    // j p / N = J P / (4N); reduce J P modulo 4N exactly.
    const long mod = 4L * n;
    long r = (J * P) % mod;
    if (r < 0) r += mod;
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(mod);
    return {std::cos(ang), sign * std::sin(ang)};
}

namespace {

std::vector<cplx> fft_apply(const std::vector<cplx>& x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || n % 2 != 0) throw InvalidArgument("transform length must be even");
    const long mod = 4L * n;
    std::vector<cplx> table(static_cast<size_t>(mod));
    for (long r = 0; r < mod; ++r) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(mod);
        table[static_cast<size_t>(r)] = {std::cos(ang), sign * std::sin(ang)};
    }
    std::vector<cplx> out(static_cast<size_t>(n));
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int p = 0; p < n; ++p) {
        const long P = 2L * p - (n - 1);
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const long J = 2L * j - (n - 1);
            long r = (J * P) % mod;
            if (r < 0) r += mod;
            acc += x[static_cast<size_t>(j)] * table[static_cast<size_t>(r)];
        }
        out[static_cast<size_t>(p)] = acc * norm;
    }
    return out;
}

}  // namespace

std::vector<cplx> fft_forward(const std::vector<cplx>& x) { return fft_apply(x, -1); }
std::vector<cplx> fft_inverse(const std::vector<cplx>& X) { return fft_apply(X, +1); }

std::pair<double, double> sampling_error_bound(const TailWeights& t, double F, double K) {
    if (!(F > 0.0) || !(K > 0.0)) throw InvalidArgument("windows must be positive");
    const double pi = std::numbers::pi;
    const double field = t.w_K + t.w_F + pi * t.r_K / (2.0 * K) +
                         std::sqrt(pi / (2.0 * K) * (t.boundary_f.first + t.boundary_f.second));
    const double conj = t.w_K + t.w_F + pi * t.r_F / (2.0 * F) +
                        std::sqrt(pi / (2.0 * F) * (t.boundary_fhat.first + t.boundary_fhat.second));
    return {field, conj};
}

namespace {

SampledFunction alias_impl(const std::function<cplx(double)>& f, const SamplingGrid& g,
                           double delta, bool kappa_side) {
    check_grid(g);
    const int N = g.n_points;
    const double period = N * delta;
    SampledFunction s{g, std::vector<cplx>(static_cast<size_t>(N))};
    auto point = [&](int k) { return kappa_side ? g.kappa(k) : g.phi(k); };
    for (int k = 0; k < N; ++k) s.values[static_cast<size_t>(k)] = f(point(k));
    bool converged = false;
    for (int n = 1; n <= 64; ++n) {
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        double biggest = 0.0;
        for (int k = 0; k < N; ++k) {
            const cplx a = f(point(k) + n * period);
            const cplx b = f(point(k) - n * period);
            biggest = std::max({biggest, std::abs(a), std::abs(b)});
            s.values[static_cast<size_t>(k)] += sgn * (a + b);
        }
        if (biggest < 1e-16) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericalError("alias series did not converge within 64 periods", 0.0);
    const double root = std::sqrt(delta);
    for (auto& v : s.values) v *= root;
    return s;
}

}  // namespace

SampledFunction alias(const FunctionDescriptor& d, const SamplingGrid& g) {
    return alias_impl(d.f, g, g.delta_phi, false);
}

SampledFunction alias_ft(const FunctionDescriptor& d, const SamplingGrid& g) {
    return alias_impl(d.fhat, g, g.delta_kappa, true);
}

FftErrorReport fft_vs_continuous_error(const FunctionDescriptor& d, const SamplingGrid& g) {
    check_grid(g);
    const int N = g.n_points;
    std::vector<cplx> xs(static_cast<size_t>(N));
    std::vector<cplx> ks(static_cast<size_t>(N));
    for (int k = 0; k < N; ++k) {
        xs[static_cast<size_t>(k)] = d.f(g.phi(k));
        ks[static_cast<size_t>(k)] = d.fhat(g.kappa(k));
    }
    // Scale so the unitary transform acts on sqrt(Delta)-weighted vectors.
    std::vector<cplx> a = xs;
    for (auto& v : a) v *= std::sqrt(g.delta_phi);
    std::vector<cplx> b = ks;
    for (auto& v : b) v *= std::sqrt(g.delta_kappa);
    const auto fa = fft_forward(a);
    const auto fb = fft_inverse(b);
    FftErrorReport r;
    for (int k = 0; k < N; ++k) {
        const cplx approx_hat = fa[static_cast<size_t>(k)] / std::sqrt(g.delta_kappa);
        const cplx approx_f = fb[static_cast<size_t>(k)] / std::sqrt(g.delta_phi);
        r.lhs_field_to_kappa += g.delta_kappa * std::norm(approx_hat - ks[static_cast<size_t>(k)]);
        r.lhs_kappa_to_field += g.delta_phi * std::norm(approx_f - xs[static_cast<size_t>(k)]);
    }
    const double F = g.F();
    const double K = g.K();
    const TailWeights t = d.tails(F, K);
    const double pi = std::numbers::pi;
    r.rhs = 2.0 * (t.w_F * t.w_F + t.w_K * t.w_K) +
            pi / K * (t.boundary_f.first + t.boundary_f.second) +
            pi / F * (t.boundary_fhat.first + t.boundary_fhat.second);
    return r;
}

std::pair<double, double> lattice_error_bound(const std::vector<TailWeights>& local_tails,
                                              const LatticeRWeights& r, double F, double K,
                                              int n_sites) {
    if (n_sites < 1) throw InvalidArgument("need at least one site");
    if (static_cast<int>(local_tails.size()) != n_sites)
        throw InvalidArgument("one TailWeights entry per site expected");
    if (!(F > 0.0) || !(K > 0.0)) throw InvalidArgument("windows must be positive");
    const double pi = std::numbers::pi;
    double field = 0.0;
    double conj = 0.0;
    for (const auto& t : local_tails) {
        field += t.w_K + t.w_F +
                 std::sqrt(pi / (2.0 * K) * (t.boundary_f.first + t.boundary_f.second));
        conj += t.w_F + t.w_K +
                std::sqrt(pi / (2.0 * F) * (t.boundary_fhat.first + t.boundary_fhat.second));
    }
    const double c = std::pow(pi * pi / 4.0 + 1.0, 0.5 * n_sites);
    field += c * r.r_K / std::pow(K, n_sites);
    conj += c * r.r_F / std::pow(F, n_sites);
    return {field, conj};
}

}  // namespace bosegrid
