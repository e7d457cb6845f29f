#include "bosegrid/hgfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bosegrid/errors.hpp"
#include "bosegrid/quad.hpp"

namespace bosegrid {

namespace {

constexpr double kBig = 1e150;
constexpr double kSmall = 1e-150;
const double kLogBig = std::log(kBig);

void check_order(int n) {
    if (n < 0) throw InvalidArgument("HG order must be non-negative");
}

void check_mass(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("mass must be positive");
}

// Walks psi_0..psi_nmax at x (unit mass), calling sink(n, mant, log_scale)
// for every order. mant*exp(log_scale) is psi_n(x).
template <class Sink>
void walk(int nmax, double x, Sink&& sink) {
    double ls = -0.5 * x * x;
    double p0 = std::pow(std::numbers::pi, -0.25);
    sink(0, p0, ls);
    if (nmax == 0) return;
    double p1 = std::numbers::sqrt2 * x * p0;
    sink(1, p1, ls);
    for (int k = 1; k < nmax; ++k) {
        const double kk = static_cast<double>(k);
        double p2 = std::sqrt(2.0 / (kk + 1.0)) * x * p1 - std::sqrt(kk / (kk + 1.0)) * p0;
        p0 = p1;
        p1 = p2;
        const double a = std::max(std::abs(p0), std::abs(p1));
        if (a > kBig) {
            p0 /= kBig;
            p1 /= kBig;
            ls += kLogBig;
        } else if (a < kSmall && a > 0.0) {
            p0 *= kBig;
            p1 *= kBig;
            ls -= kLogBig;
        }
        sink(k + 1, p1, ls);
    }
}

}  // namespace

double ScaledValue::value() const {
    if (mant == 0.0) return 0.0;
    return mant * std::exp(log_scale);
}

double ScaledValue::log_abs() const {
    if (mant == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mant)) + log_scale;
}

ScaledValue eval_hg_scaled(int n, double m0, double phi) {
    check_order(n);
    check_mass(m0);
    ScaledValue out;
    walk(n, phi * std::sqrt(m0), [&](int k, double mant, double ls) {
        if (k == n) out = {mant, ls};
    });
    out.log_scale += 0.25 * std::log(m0);
    return out;
}

double eval_hg(int n, double m0, double phi) { return eval_hg_scaled(n, m0, phi).value(); }

std::vector<double> eval_hg_all(int nmax, double m0, double phi) {
    check_order(nmax);
    check_mass(m0);
    std::vector<double> out(static_cast<size_t>(nmax) + 1);
    const double lm = 0.25 * std::log(m0);
    walk(nmax, phi * std::sqrt(m0), [&](int k, double mant, double ls) {
        out[static_cast<size_t>(k)] = mant == 0.0 ? 0.0 : mant * std::exp(ls + lm);
    });
    return out;
}

std::complex<double> eval_hg_ft(int n, double m0, double kappa) {
    check_mass(m0);
    const double v = eval_hg(n, 1.0 / m0, kappa);
    switch (n % 4) {
        case 0: return {v, 0.0};
        case 1: return {0.0, -v};
        case 2: return {-v, 0.0};
        default: return {0.0, v};
    }
}

double tail_weight(int n, double m0, double F) {
    check_order(n);
    check_mass(m0);
    if (!(F > 0.0)) throw InvalidArgument("tail window must be positive");
    // Work in x = phi sqrt(m0); the Jacobian cancels the m0^{1/2} of |phi_n|^2.
    const double X = F * std::sqrt(m0);
    const double turn = std::sqrt(2.0 * n + 1.0);

    // Reference scale so that the integrand is O(1) at its largest.
    double ref = eval_hg_scaled(n, 1.0, std::max(X, turn)).log_abs();
    if (!std::isfinite(ref)) ref = -0.5 * X * X;
    auto integrand = [&](double x) {
        const ScaledValue s = eval_hg_scaled(n, 1.0, x);
        if (s.mant == 0.0) return 0.0;
        return s.mant * s.mant * std::exp(2.0 * (s.log_scale - ref));
    };

    double total = 0.0;
    double err = 0.0;
    if (X < turn) {
        // Oscillatory stretch: split so each piece holds a handful of nodes.
        const int pieces = std::max(1, n / 4);
        const double h = (turn - X) / pieces;
        for (int i = 0; i < pieces; ++i) {
            auto r = quad::finite(integrand, X + i * h, X + (i + 1) * h, 1e-10, 0.0);
            total += r.value;
            err += r.error;
        }
    }
    auto r = quad::half_line(integrand, std::max(X, turn), 1e-10);
    total += r.value;
    err += r.error;
    if (total <= 0.0) return 0.0;
    return std::sqrt(2.0 * total) * std::exp(ref);
}

double tail_bound(int n, double L) {
    check_order(n);
    if (!(L > 0.0)) throw InvalidArgument("L must be positive");
    const double lg = -std::log(L * std::sqrt(std::numbers::pi)) + n * std::log(2.0) +
                      2.0 * n * std::log(L) - std::lgamma(n + 1.0) - L * L;
    return std::exp(lg);
}

double tail_bound_grid(int n, int n_phi) {
    check_order(n);
    if (n_phi < 2) throw InvalidArgument("N_phi must be at least 2");
    const double N = n_phi;
    if (n == 0) return std::sqrt(tail_bound(0, std::sqrt(std::numbers::pi * N / 2.0)));
    const double nn = n;
    const double lg = -1.5 * std::log(std::numbers::pi) - std::numbers::pi * N / 4.0 +
                      (2.0 * nn - 1.0) / 4.0 * std::log(N) - nn / 2.0 * std::log(nn) +
                      nn / 2.0 * (std::log(std::numbers::pi) + 1.0) - 0.25 * std::log(nn);
    return std::exp(lg);
}

}  // namespace bosegrid
