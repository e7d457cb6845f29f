#include "bosegrid/counterexample.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "bosegrid/errors.hpp"
#include "bosegrid/hgfunc.hpp"

namespace bosegrid::counterexample {

namespace {

using boost::math::quadrature::gauss;
constexpr double kPi = std::numbers::pi;

double sinc(double t) { return t == 0.0 ? 1.0 : boost::math::sin_pi(t) / (kPi * t); }

double qmax(const SincCombo& f) { return *std::max_element(f.q_list.begin(), f.q_list.end()); }

// Composite Gauss-Legendre over [a, b] with panels no wider than h.
template <class Fn>
double integrate(Fn&& fn, double a, double b, double h) {
    if (b <= a) return 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    const double w = (b - a) / pieces;
    double s = 0.0;
    for (int i = 0; i < pieces; ++i) s += gauss<double, 20>::integrate(fn, a + i * w, a + (i + 1) * w);
    return s;
}

}  // namespace

double SincCombo::f(double phi) const {
    const double d = grid.delta_phi;
    const double x = phi / d;
    const double pref = 1.0 / std::sqrt(2.0 * d);
    if (std::abs(x) > 2.0 * qmax(*this)) {
        // After the cancellations, q/(x^2-q^2) can be replaced by q^7/(x^6 (x^2-q^2)).
        double acc = 0.0;
        const double x2 = x * x;
        for (size_t i = 0; i < q_list.size(); ++i) {
            const double q = q_list[i];
            const double q2 = q * q;
            acc += c_list[i] * q * q2 * q2 * q2 / (x2 * x2 * x2 * (x2 - q2));
        }
        return -2.0 * pref * boost::math::cos_pi(x) * acc / kPi;
    }
    double acc = 0.0;
    for (size_t i = 0; i < q_list.size(); ++i)
        acc += c_list[i] * signs[i] * (sinc(x - q_list[i]) + sinc(x + q_list[i]));
    return pref * acc;
}

double SincCombo::fhat(double kappa) const {
    if (std::abs(kappa) > grid.K()) return 0.0;
    const double d = grid.delta_phi;
    double acc = 0.0;
    for (size_t i = 0; i < q_list.size(); ++i)
        acc += c_list[i] * signs[i] * std::cos(kappa * q_list[i] * d);
    return std::sqrt(d / kPi) * acc;
}

FunctionDescriptor SincCombo::descriptor() const {
    auto self = std::make_shared<SincCombo>(*this);
    FunctionDescriptor d;
    d.f = [self](double p) { return cplx(self->f(p)); };
    d.fhat = [self](double k) { return cplx(self->fhat(k)); };
    d.tails = [self](double F, double K) {
        // |f| falls like phi^-8, so the tail beyond 40 F is below 1e-30 of the total.
        TailWeights t = numeric_tails(
            FunctionDescriptor{[self](double p) { return cplx(self->f(p)); },
                               [self](double k) { return cplx(self->fhat(k)); }, nullptr},
            F, K, 40.0 * std::max(F, 1.0), std::max(K, self->grid.K()));
        return t;
    };
    return d;
}

SincCombo build_f(int n_phi, std::vector<double> q_list) {
    if (q_list.empty()) q_list = {13.5, 14.5, 15.5, 16.5, 17.5, 18.5, 19.5, 20.5};
    if (q_list.size() < 4) throw InvalidArgument("need more than three sinc pairs");
    SincCombo f;
    f.grid = SamplingGrid::make(n_phi, 1.0);
    for (double q : q_list) {
        if (!(q > 0.0) || std::abs(q - std::floor(q) - 0.5) > 1e-12)
            throw InvalidArgument("q values must be positive half-integers");
        if (q >= n_phi / 3.0) throw InvalidArgument("q values must lie below N_phi / 3");
        f.signs.push_back(boost::math::sin_pi(q) > 0.0 ? 1.0 : -1.0);
    }
    std::vector<double> sorted = q_list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("q values must be distinct");
    f.q_list = q_list;

    const Eigen::Index n = static_cast<Eigen::Index>(q_list.size());
    Eigen::MatrixXd A(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double q = q_list[static_cast<size_t>(i)];
        A(0, i) = q;
        A(1, i) = q * q * q;
        A(2, i) = q * q * q * q * q;
    }
    // Least-norm correction of the all-ones vector onto the null space of A.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    if (svd.singularValues()(2) < 1e-12 * svd.singularValues()(0))
        throw NumericalError("cancellation constraints are singular", svd.singularValues()(2));
    const Eigen::MatrixXd null = svd.matrixV().rightCols(n - 3);
    Eigen::VectorXd c = null * (null.transpose() * Eigen::VectorXd::Ones(n));
    c.normalize();
    f.c_list.assign(c.data(), c.data() + n);
    double c7 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) c7 += c(i) * std::pow(q_list[static_cast<size_t>(i)], 7);
    f.norm = std::sqrt(2.0 / f.grid.delta_phi) * c7;
    return f;
}

double cancellation_residual(const SincCombo& f) {
    double worst = 0.0;
    for (int k : {1, 3, 5}) {
        double s = 0.0, a = 0.0;
        for (size_t i = 0; i < f.q_list.size(); ++i) {
            const double t = f.c_list[i] * std::pow(f.q_list[i], k);
            s += t;
            a += std::abs(t);
        }
        worst = std::max(worst, std::abs(s) / a);
    }
    return worst;
}

double envelope_slope(const SincCombo& f, double lo, double hi) {
    const double d = f.grid.delta_phi;
    const long k0 = static_cast<long>(std::ceil(lo / d));
    const long k1 = static_cast<long>(std::floor(hi / d));
    if (k1 - k0 < 2) throw InvalidArgument("window too narrow for a slope fit");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long cnt = 0;
    for (long k = k0; k <= k1; ++k) {
        const double phi = k * d;
        const double v = std::abs(f.f(phi));
        if (v == 0.0) continue;
        const double x = std::log(phi), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

double smoothing(double phi, double L, double sigma) {
    const double a = std::exp(-(phi + L) / sigma) + 1.0;
    const double b = std::exp((phi - L) / sigma) + 1.0;
    return 1.0 / (a * a * b * b);
}

Smoothed build_g(const SincCombo& f, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    Smoothed g;
    g.sigma = sigma;
    g.L = f.grid.F();
    const double L = g.L;
    const double F = f.grid.F();
    const double K = f.grid.K();
    const auto fc = std::make_shared<SincCombo>(f);
    // s(phi) < e^{-50} beyond L + 25 sigma: that is where g is cut.
    const double reach = L + 25.0 * sigma;
    auto raw = [fc, L, sigma](double p) { return fc->f(p) * smoothing(p, L, sigma); };
    const double h = 0.05;
    const double n2 = 2.0 * integrate([&](double p) { return raw(p) * raw(p); }, 0.0, reach, h);
    g.c_g = 1.0 / std::sqrt(n2);
    const double cg = g.c_g;

    // Precompute g at the quadrature nodes of [0, reach] for the cosine transform.
    struct Node {
        double x, w;
    };
    auto nodes = std::make_shared<std::vector<Node>>();
    {
        const auto& xs = gauss<double, 20>::abscissa();
        const auto& ws = gauss<double, 20>::weights();
        const int pieces = static_cast<int>(std::ceil(reach / h));
        const double w = reach / pieces;
        for (int i = 0; i < pieces; ++i) {
            const double mid = (i + 0.5) * w, half = 0.5 * w;
            for (size_t j = 0; j < xs.size(); ++j) {
                for (int sgn : {-1, 1}) {
                    if (xs[j] == 0.0 && sgn < 0) continue;
                    const double x = mid + sgn * half * xs[j];
                    nodes->push_back({x, half * ws[j] * cg * raw(x)});
                }
            }
        }
    }
    auto ghat = [nodes](double k) {
        // g is even: ghat(k) = sqrt(2/pi) int_0^inf g cos(k phi).
        double s = 0.0;
        for (const Node& n : *nodes) s += n.w * std::cos(k * n.x);
        return std::sqrt(2.0 / kPi) * s;
    };
    g.desc.f = [raw, cg](double p) { return cplx(cg * raw(p)); };
    g.desc.fhat = [ghat](double k) { return cplx(ghat(k)); };
    // ghat decays like exp(-pi sigma |k| / 2); 60 past K it is ~1e-17 of its peak.
    const double kreach = K + 60.0;
    g.desc.tails = [gf = g.desc.f, ghat, reach, kreach, h](double Fw, double Kw) {
        // Both g and ghat are even, so each tail is twice the one-sided integral.
        TailWeights t;
        auto g2 = [&](double p) { return std::norm(gf(p)); };
        auto k2 = [&](double k) { const double v = ghat(k); return v * v; };
        t.w_F = std::sqrt(2.0 * integrate(g2, Fw, reach, h));
        t.r_F = std::sqrt(2.0 * integrate([&](double p) { return p * p * g2(p); }, Fw, reach, h));
        t.w_K = std::sqrt(2.0 * integrate(k2, Kw, kreach, 0.1));
        t.r_K = std::sqrt(2.0 * integrate([&](double k) { return k * k * k2(k); }, Kw, kreach, 0.1));
        t.boundary_f = {g2(-Fw), g2(Fw)};
        t.boundary_fhat = {k2(-Kw), k2(Kw)};
        return t;
    };
    const TailWeights t = g.desc.tails(F, K);
    g.w_F = t.w_F;
    g.w_K = t.w_K;
    return g;
}

Distribution boson_spectrum(const FunctionDescriptor& fn, double mass, int n_max) {
    if (n_max < 0 || n_max > 400) throw InvalidArgument("n_max must lie in [0, 400]");
    if (!(mass > 0.0)) throw InvalidArgument("mass must be positive");
    // phi_{n_max} is below 1e-30 of its peak 12 / sqrt(m) past its turning point.
    const double reach = (std::sqrt(2.0 * n_max + 1.0) + 12.0) / std::sqrt(mass);
    const double h = 0.5 * kPi / std::sqrt((2.0 * n_max + 1.0) * mass);
    const int pieces = static_cast<int>(std::ceil(2.0 * reach / h));
    const double w = 2.0 * reach / pieces;
    const auto& xs = gauss<double, 20>::abscissa();
    const auto& ws = gauss<double, 20>::weights();
    std::vector<cplx> acc(static_cast<size_t>(n_max) + 1, 0.0);
    auto add = [&](double x, double wt) {
        const cplx fx = fn.f(x);
        const std::vector<double> hg = eval_hg_all(n_max, mass, x);
        for (int n = 0; n <= n_max; ++n) acc[static_cast<size_t>(n)] += wt * hg[static_cast<size_t>(n)] * fx;
    };
    for (int i = 0; i < pieces; ++i) {
        const double mid = -reach + (i + 0.5) * w, half = 0.5 * w;
        for (size_t j = 0; j < xs.size(); ++j) {
            add(mid + half * xs[j], half * ws[j]);
            if (xs[j] != 0.0) add(mid - half * xs[j], half * ws[j]);
        }
    }
    Distribution d;
    for (int n = 0; n <= n_max; ++n) {
        d.support.push_back(n);
        d.probs.push_back(std::norm(acc[static_cast<size_t>(n)]));
    }
    return d;
}

double high_energy_weight(const Distribution& p, int n_b) {
    double w = 0.0;
    for (size_t n = 0; n < p.probs.size() && static_cast<int>(n) < n_b; ++n) w += p.probs[n];
    return 1.0 - w;
}

SpectrumPair discrete_spectrum_mismatch(const FunctionDescriptor& fn, const FiniteRep& rep,
                                        const Eigensystem& eig) {
    const int N = rep.grid.n_points;
    SpectrumPair out;
    out.exact = boson_spectrum(fn, rep.mass, N - 1);
    Eigen::VectorXd v(N);
    for (int k = 0; k < N; ++k) v(k) = std::sqrt(rep.grid.delta_phi) * fn.f(rep.grid.phi(k)).real();
    out.sample_norm = v.norm();
    v /= out.sample_norm;
    const Eigen::VectorXd proj = eig.states.transpose() * v;
    for (int n = 0; n < N; ++n) {
        out.discrete.support.push_back(n);
        out.discrete.probs.push_back(proj(n) * proj(n));
    }
    return out;
}

}  // namespace bosegrid::counterexample
