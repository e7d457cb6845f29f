#include <doctest.h>

#include <boost/math/special_functions/hermite.hpp>

#include <cmath>
#include <numbers>

#include "bosegrid/hgfunc.hpp"

using namespace bosegrid;

namespace {

const double kPi = std::numbers::pi;

// Textbook form with the Hermite polynomial, fine for small n.
double hg_direct(int n, double m, double x) {
    const double y = std::sqrt(m) * x;
    const double norm = std::pow(m / kPi, 0.25) / std::sqrt(std::ldexp(std::tgamma(n + 1.0), n));
    return norm * boost::math::hermite(static_cast<unsigned>(n), y) * std::exp(-0.5 * y * y);
}

// Trapezoid rule on a wide symmetric grid; spectrally accurate for Gaussian decay.
template <class F>
double trapezoid(F f, double half_width, double h) {
    double s = 0.0;
    const int n = static_cast<int>(std::round(half_width / h));
    for (int i = -n; i <= n; ++i) s += f(i * h);
    return s * h;
}

}  // namespace

TEST_CASE("values at the origin") {
    CHECK(eval_hg(0, 1.0, 0.0) == doctest::Approx(0.7511255444649425).epsilon(1e-14));
    CHECK(eval_hg(1, 1.0, 0.0) == 0.0);
    CHECK(eval_hg(2, 1.0, 0.0) == doctest::Approx(-0.7511255444649425 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("agrees with the Hermite-polynomial form for small n") {
    for (double m : {0.3, 1.0, 4.0})
        for (int n = 0; n <= 30; ++n)
            for (double x : {-3.1, -0.7, 0.2, 1.3, 2.9, 4.4}) {
                const double ref = hg_direct(n, m, x / std::sqrt(m));
                const double got = eval_hg(n, m, x / std::sqrt(m));
                CHECK(std::abs(got - ref) <= 1e-10 * std::max(1e-3, std::abs(ref)));
            }
}

TEST_CASE("three-term recurrence") {
    for (double m : {0.5, 1.0, 3.0})
        for (int n = 1; n <= 60; ++n)
            for (double y : {-9.5, -4.0, -0.3, 0.8, 5.5, 10.0}) {
                const double phi = y / std::sqrt(m);
                const double lhs = phi * eval_hg(n, m, phi);
                const double rhs = (std::sqrt(n) * eval_hg(n - 1, m, phi) + std::sqrt(n + 1.0) * eval_hg(n + 1, m, phi)) /
                                   std::sqrt(2.0 * m);
                const double scale = std::abs(phi * eval_hg(n, m, phi)) + std::abs(rhs) + 1e-300;
                CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
            }
}

TEST_CASE("eval_hg_all matches single evaluations") {
    const auto v = eval_hg_all(80, 2.0, 1.7);
    REQUIRE(v.size() == 81);
    for (int n = 0; n <= 80; ++n) CHECK(v[n] == doctest::Approx(eval_hg(n, 2.0, 1.7)).epsilon(1e-13));
}

TEST_CASE("orthonormality by quadrature") {
    const double h = 0.01;
    const int nmax = 40;
    const int npts = static_cast<int>(std::round(15.0 / h));
    std::vector<std::vector<double>> rows;
    for (int i = -npts; i <= npts; ++i) rows.push_back(eval_hg_all(nmax, 1.0, i * h));
    double worst = 0.0;
    for (int a = 0; a <= nmax; ++a)
        for (int b = a; b <= nmax; ++b) {
            double s = 0.0;
            for (const auto& r : rows) s += r[a] * r[b];
            s *= h;
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("mass scaling") {
    for (int n : {0, 3, 17, 44})
        for (double m : {0.25, 2.0, 9.0})
            for (double phi : {-2.2, 0.4, 1.9}) {
                const double a = eval_hg(n, m, phi);
                const double b = std::pow(m, 0.25) * eval_hg(n, 1.0, phi * std::sqrt(m));
                CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(b)));
            }
}

TEST_CASE("large orders stay finite far out") {
    for (int n : {300, 1000, 2500})
        for (double y : {0.0, 10.0, 40.0, 80.0}) {
            const ScaledValue s = eval_hg_scaled(n, 1.0, y);
            CHECK(std::isfinite(s.mant));
            CHECK(std::isfinite(s.log_scale));
            CHECK(std::isfinite(eval_hg(n, 1.0, y)));
        }
    // Deep in the forbidden region phi_n is far below the double range, but the log is right:
    // H_n(y) ~ (2y)^n for y >> n, so ln|phi_n| follows from the normalization alone.
    const ScaledValue s = eval_hg_scaled(300, 1.0, 2000.0);
    const double direct = -0.5 * 2000.0 * 2000.0 + 300 * std::log(2.0 * 2000.0) - 0.5 * (300 * std::log(2.0) + std::lgamma(301.0)) -
                          0.25 * std::log(kPi);
    CHECK(s.log_abs() == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("Fourier transform against numerical quadrature") {
    for (double m : {1.0, 4.0})
        for (int n : {0, 1, 2, 5, 8})
            for (double k : {0.0, 0.6, -1.4}) {
                const double re = trapezoid([&](double x) { return eval_hg(n, m, x) * std::cos(k * x); }, 14.0, 0.005);
                const double im = trapezoid([&](double x) { return -eval_hg(n, m, x) * std::sin(k * x); }, 14.0, 0.005);
                const std::complex<double> ref(re / std::sqrt(2 * kPi), im / std::sqrt(2 * kPi));
                CHECK(std::abs(eval_hg_ft(n, m, k) - ref) < 1e-12);
            }
    CHECK(eval_hg_ft(0, 1.0, 0.0).real() == doctest::Approx(std::pow(kPi, -0.25)));
    CHECK(std::abs(eval_hg_ft(1, 1.0, 0.0)) == 0.0);
    CHECK(eval_hg_ft(2, 4.0, 0.0).real() == doctest::Approx(-eval_hg(2, 0.25, 0.0)).epsilon(1e-14));
    for (double k : {0.3, 2.0}) CHECK(std::abs(eval_hg_ft(7, 3.0, k)) == doctest::Approx(std::abs(eval_hg(7, 1.0 / 3.0, k))));
}

TEST_CASE("tail weights against closed forms") {
    CHECK(tail_weight(0, 1.0, 2.0) == doctest::Approx(std::sqrt(std::erfc(2.0))).epsilon(1e-12));
    CHECK(tail_weight(0, 1.0, 12.0) < 1e-30);
    for (double m : {0.5, 1.0, 3.0})
        for (double F : {0.5, 1.5, 3.0}) {
            const double y = std::sqrt(m) * F;
            const double w0 = std::erfc(y);
            const double w1 = std::erfc(y) + 2.0 * y * std::exp(-y * y) / std::sqrt(kPi);
            CHECK(tail_weight(0, m, F) == doctest::Approx(std::sqrt(w0)).epsilon(1e-11));
            CHECK(tail_weight(1, m, F) == doctest::Approx(std::sqrt(w1)).epsilon(1e-11));
        }
    const double t34 = tail_weight(34, 1.0, std::sqrt(32.0 * kPi));
    CHECK(t34 > 1e-5);
    CHECK(t34 < 1e-3);
}

TEST_CASE("tail weight is monotone beyond the turning point") {
    for (int n : {0, 5, 20}) {
        double prev = 2.0;
        for (double F = std::sqrt(2.0 * n + 1.0); F < std::sqrt(2.0 * n + 1.0) + 6.0; F += 0.25) {
            const double t = tail_weight(n, 1.0, F);
            CHECK(t <= prev);
            prev = t;
        }
    }
}

TEST_CASE("tail bound formulas") {
    // Squared-weight estimate (1/(L sqrt(pi))) 2^n L^{2n} / n! e^{-L^2}, via logs.
    for (int n : {0, 3, 10})
        for (double L : {3.0, 6.0}) {
            const double log_ref = -std::log(L * std::sqrt(kPi)) + n * std::log(2.0) + 2.0 * n * std::log(L) -
                                   std::lgamma(n + 1.0) - L * L;
            CHECK(std::log(tail_bound(n, L)) == doctest::Approx(log_ref).epsilon(1e-12));
            CHECK(tail_bound(n, 2.0 * L) < tail_bound(n, L));
        }
    // Grid form for n >= 1, term by term as printed.
    for (int N : {64, 128})
        for (int n : {1, 5, 12}) {
            const double lg = -1.5 * std::log(kPi) - kPi * N / 4.0 + (2.0 * n - 1.0) / 4.0 * std::log(N) -
                              0.5 * n * std::log(n) + 0.5 * n * (std::log(kPi) + 1.0) - 0.25 * std::log(n);
            CHECK(std::log(tail_bound_grid(n, N)) == doctest::Approx(lg).epsilon(1e-12));
        }
    CHECK(tail_bound_grid(0, 64) == doctest::Approx(std::sqrt(tail_bound(0, std::sqrt(32.0 * kPi)))).epsilon(1e-14));
}
