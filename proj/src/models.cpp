#include "bosegrid/models.hpp"

#include <Eigen/Sparse>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "bosegrid/errors.hpp"
#include "bosegrid/hgfunc.hpp"

namespace bosegrid::models {

namespace {

using Sparse = Eigen::SparseMatrix<double>;

Sparse lowering(int n) {
    Sparse a(n, n);
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 1; k < n; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

void check_params(const ModelParams& p) {
    if (p.n_cut < 8) throw InvalidArgument("n_cut must be at least 8");
    if (!(p.boson_mass > 0.0)) throw InvalidArgument("boson mass must be positive");
    if (p.g < 0.0) throw InvalidArgument("quartic coupling must be non-negative");
    if (p.kind == ModelKind::TwoSitePhi4 && p.n_cut > 512)
        throw ResourceError("two-site n_cut above 512 exceeds the memory budget");
}

struct LanczosResult {
    double value = 0.0;
    Eigen::VectorXd vec;
    double residual = 0.0;
};

// Lowest eigenpair of a symmetric operator by Lanczos with full
// reorthogonalization, restarted from the current Ritz vector.
template <class MatVec>
LanczosResult lanczos_ground(MatVec&& apply, Eigen::VectorXd start, double tol, int krylov = 120,
                             int restarts = 40) {
    const Eigen::Index dim = start.size();
    const int kmax = static_cast<int>(std::min<Eigen::Index>(krylov, dim));
    LanczosResult out;
    Eigen::VectorXd x = start.normalized();
    for (int r = 0; r < restarts; ++r) {
        Eigen::MatrixXd V(dim, kmax);
        std::vector<double> alpha, beta;
        V.col(0) = x;
        int k = 0;
        double theta = 0.0;
        Eigen::VectorXd s;
        bool done = false;
        for (k = 0; k < kmax; ++k) {
            Eigen::VectorXd w = apply(V.col(k));
            alpha.push_back(V.col(k).dot(w));
            for (int pass = 0; pass < 2; ++pass)
                w -= V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * w);
            const double b = w.norm();
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
            for (int i = 0; i <= k; ++i) {
                T(i, i) = alpha[static_cast<size_t>(i)];
                if (i < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            theta = es.eigenvalues()(0);
            s = es.eigenvectors().col(0);
            if (b * std::abs(s(k)) < tol * std::max(1.0, std::abs(theta)) || b < 1e-14 ||
                k + 1 == kmax) {
                done = b * std::abs(s(k)) < tol * std::max(1.0, std::abs(theta)) || b < 1e-14;
                break;
            }
            beta.push_back(b);
            V.col(k + 1) = w / b;
        }
        x = (V.leftCols(k + 1) * s).normalized();
        if (done || r + 1 == restarts) {
            const Eigen::VectorXd ax = apply(x);
            out.value = x.dot(ax);
            out.vec = x;
            out.residual = (ax - out.value * x).norm();
            if (out.residual < 10.0 * tol * std::max(1.0, std::abs(out.value))) return out;
        }
    }
    throw NumericalError("Lanczos did not converge", out.residual);
}

void fix_sign(Eigen::Ref<Eigen::MatrixXd> m) {
    Eigen::Index i = 0, j = 0;
    m.cwiseAbs().maxCoeff(&i, &j);
    if (m(i, j) < 0.0) m = -m;
}

}  // namespace

SqueezedVacuum squeezed_vacuum(double ratio, double floor) {
    if (!(ratio > 0.0)) throw InvalidArgument("mass ratio must be positive");
    SqueezedVacuum sv;
    sv.ratio = ratio;
    sv.r = 0.5 * std::log(ratio);
    const double t = std::tanh(sv.r);
    const double t2 = t * t;
    double c = 1.0 / std::sqrt(std::cosh(sv.r));
    sv.coeffs.push_back(c);
    if (t2 == 0.0) return sv;
    for (int n = 0;; ++n) {
        // The ratio of successive weights is below t^2, so the remainder is
        // bounded by a geometric series.
        if (c * c * t2 / (1.0 - t2) < floor) break;
        c *= t * std::sqrt((2.0 * n + 1.0) / (2.0 * n + 2.0));
        sv.coeffs.push_back(0.0);
        sv.coeffs.push_back(c);
    }
    return sv;
}

int squeezed_cutoff(double ratio, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
    const SqueezedVacuum sv = squeezed_vacuum(ratio, eps * 1e-6);
    std::vector<double> p(sv.coeffs.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = sv.coeffs[i] * sv.coeffs[i];
    return cutoff_from_probs(p, eps);
}

SqueezedFit fit_squeezed(const std::vector<double>& ratios, const std::vector<double>& eps_list) {
    const Eigen::Index rows = static_cast<Eigen::Index>(ratios.size() * eps_list.size());
    if (rows < 3) throw InvalidArgument("need at least three points to fit");
    Eigen::MatrixXd A(rows, 2);
    Eigen::VectorXd y(rows);
    Eigen::Index i = 0;
    for (double r : ratios)
        for (double e : eps_list) {
            A(i, 0) = r;
            A(i, 1) = r * std::log(e);
            y(i) = squeezed_cutoff(r, e);
            ++i;
        }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd res = y - A * c;
    const double mean = y.mean();
    SqueezedFit f;
    f.a = c(0);
    f.b = c(1);
    f.r2 = 1.0 - res.squaredNorm() / (y.array() - mean).square().sum();
    return f;
}

Eigen::MatrixXd field_matrix(double boson_mass, int n_cut) {
    const Sparse a = lowering(n_cut);
    const Sparse at = a.transpose();
    return Eigen::MatrixXd(Sparse(a + at)) / std::sqrt(2.0 * boson_mass);
}

Eigen::MatrixXd local_hamiltonian(double m0_sq, double g, double boson_mass, int n_cut) {
    // Four padding levels keep every X^4 element inside the block exact.
    const int n = n_cut + 4;
    const Sparse a = lowering(n);
    const Sparse at = a.transpose();
    const Sparse X = Sparse(a + at) / std::sqrt(2.0 * boson_mass);
    const Sparse D = Sparse(a - at);
    const Sparse X2 = X * X;
    const Sparse H = Sparse(-0.25 * boson_mass * (D * D)) + Sparse(0.5 * m0_sq * X2) +
                     Sparse((g / 24.0) * (X2 * X2));
    return Eigen::MatrixXd(H).topLeftCorner(n_cut, n_cut);
}

namespace {

// `warm` (two-site only) is a ground-state guess of any size; it is embedded
// in the top-left corner of the new n_cut x n_cut coefficient matrix.
ModelSystem solve_impl(const ModelParams& p, const Eigen::MatrixXd* warm) {
    check_params(p);
    ModelSystem sys;
    sys.params = p;
    const int n = p.n_cut;
    const Eigen::MatrixXd Hl = local_hamiltonian(p.m0_sq, p.g, p.boson_mass, n);
    if (p.kind == ModelKind::LocalPhi4) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hl);
        if (es.info() != Eigen::Success) throw NumericalError("local eigensolve failed", 0.0);
        sys.energy = es.eigenvalues()(0);
        sys.ground = es.eigenvectors().col(0);
        fix_sign(sys.ground);
        return sys;
    }
    const Eigen::MatrixXd X = field_matrix(p.boson_mass, n);
    const double h = p.h;
    auto apply = [&](const Eigen::VectorXd& v) {
        Eigen::Map<const Eigen::MatrixXd> C(v.data(), n, n);
        Eigen::MatrixXd out = Hl * C + C * Hl - h * (X * C * X);
        return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(out.data(), out.size()));
    };
    // |0,0> lies in the sector (even total parity, swap symmetric) that holds
    // the nodeless ground state, and the Krylov space never leaves it.
    Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * n);
    start(0) = 1.0;
    if (warm && warm->rows() <= n && warm->cols() <= n) {
        Eigen::Map<Eigen::MatrixXd> S(start.data(), n, n);
        S.setZero();
        S.topLeftCorner(warm->rows(), warm->cols()) = *warm;
    }
    const LanczosResult lr = lanczos_ground(apply, start, 1e-11);
    sys.energy = lr.value;
    sys.ground = Eigen::Map<const Eigen::MatrixXd>(lr.vec.data(), n, n);
    fix_sign(sys.ground);
    return sys;
}

}  // namespace

ModelSystem solve_fixed(const ModelParams& p) { return solve_impl(p, nullptr); }

ModelSystem build_model(const ModelParams& p) {
    check_params(p);
    ModelParams q = p;
    ModelParams half = p;
    half.n_cut = p.n_cut / 2;
    if (half.n_cut < 8) {
        // No smaller basis to compare against: start the ladder at n_cut itself.
        half.n_cut = p.n_cut;
        q.n_cut = 2 * p.n_cut;
        if (q.n_cut > q.n_cut_max) throw NumericalError("n_cut_max leaves no room for a convergence check", 0.0);
    }
    ModelSystem prev = solve_impl(half, nullptr);
    double e_prev = prev.energy;
    double delta = 0.0;
    while (true) {
        ModelSystem sys = solve_impl(q, &prev.ground);
        delta = std::abs(sys.energy - e_prev);
        if (delta < 1e-8 * std::max(1.0, std::abs(sys.energy))) {
            sys.energy_delta = delta;
            return sys;
        }
        if (q.n_cut * 2 > q.n_cut_max) break;
        e_prev = sys.energy;
        prev = std::move(sys);
        q.n_cut *= 2;
    }
    throw NumericalError("ground-state energy not converged at the n_cut ceiling", delta);
}

namespace {

// Real and imaginary parts of sum_n u_n (-i)^n phi_n^{(1/m)}(kappa) style
// vectors: returns the HG values with the (-i)^n phase split out.
void conj_basis(int n, double m, double kappa, Eigen::VectorXd& re, Eigen::VectorXd& im) {
    const std::vector<double> v = eval_hg_all(n - 1, 1.0 / m, kappa);
    re.setZero(n);
    im.setZero(n);
    for (int k = 0; k < n; ++k) {
        const double x = v[static_cast<size_t>(k)];
        switch (k % 4) {
            case 0: re(k) = x; break;
            case 1: im(k) = -x; break;
            case 2: re(k) = -x; break;
            default: im(k) = x; break;
        }
    }
}

}  // namespace

LocalDistributions local_distributions(const ModelSystem& sys, int site) {
    if (sys.params.kind == ModelKind::TwoSitePhi4 && site != 1 && site != 2)
        throw InvalidArgument("site must be 1 or 2");
    LocalDistributions d;
    if (sys.params.kind == ModelKind::LocalPhi4) {
        d.rho = sys.ground.col(0) * sys.ground.col(0).transpose();
    } else if (site == 1) {
        d.rho = sys.ground * sys.ground.transpose();
    } else {
        d.rho = sys.ground.transpose() * sys.ground;
    }
    const int n = static_cast<int>(d.rho.rows());
    const double m = sys.params.boson_mass;
    d.p_n.support.resize(static_cast<size_t>(n));
    d.p_n.probs.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        d.p_n.support[static_cast<size_t>(k)] = k;
        d.p_n.probs[static_cast<size_t>(k)] = d.rho(k, k);
    }
    const Eigen::MatrixXd rho = d.rho;
    d.p_phi = [rho, n, m](double phi) {
        const std::vector<double> v = eval_hg_all(n - 1, m, phi);
        const Eigen::Map<const Eigen::VectorXd> u(v.data(), n);
        return u.dot(rho * u);
    };
    d.p_kappa = [rho, n, m](double kappa) {
        Eigen::VectorXd re, im;
        conj_basis(n, m, kappa, re, im);
        // rho is real symmetric, so the cross terms cancel.
        return re.dot(rho * re) + im.dot(rho * im);
    };
    return d;
}

TailProfile::TailProfile(const std::function<double(double)>& p, double scale, double panel)
    : p_(p) {
    if (!(panel > 0.0) || !(scale > 0.0)) throw InvalidArgument("panel and scale must be positive");
    std::vector<double> pieces;
    edges_.push_back(0.0);
    double total = 0.0;
    int quiet = 0;
    for (int i = 0;; ++i) {
        const double a = i * panel;
        const double b = a + panel;
        const double w = partial(a, b);
        pieces.push_back(w);
        edges_.push_back(b);
        total += w;
        quiet = (total > 0.0 && w < 1e-40 * total) ? quiet + 1 : 0;
        if (b > scale && quiet >= 3) break;
        if (i > 2000000) throw NumericalError("density tail did not decay", w);
    }
    cum_.assign(edges_.size(), 0.0);
    for (size_t i = pieces.size(); i-- > 0;) cum_[i] = cum_[i + 1] + pieces[i];
}

double TailProfile::partial(double a, double b) const {
    using boost::math::quadrature::gauss;
    auto both = [this](double x) { return p_(x) + p_(-x); };
    return gauss<double, 10>::integrate(both, a, b);
}

double TailProfile::operator()(double x) const {
    x = std::abs(x);
    if (x >= edges_.back()) return 0.0;
    const size_t i = static_cast<size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin()) - 1;
    const double v = cum_[i + 1] + partial(x, edges_[i + 1]);
    return std::sqrt(std::max(0.0, v));
}

double TailProfile::root(double eps, bool* flagged) const {
    const double target = eps * eps;
    if (flagged) *flagged = false;
    if (cum_[0] < target) {
        if (flagged) *flagged = true;
        return 0.0;
    }
    size_t i = 0;
    while (i + 1 < cum_.size() && cum_[i + 1] >= target) ++i;
    if (i + 1 >= cum_.size()) {
        if (flagged) *flagged = true;
        return edges_.back();
    }
    double lo = edges_[i], hi = edges_[i + 1];
    for (int it = 0; it < 80 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cum_[i + 1] + partial(mid, edges_[i + 1]) >= target)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

SamplingIntervals optimal_sampling_intervals(const TailProfile& field, const TailProfile& conj,
                                             double eps) {
    if (!(eps > 1e-14 && eps < 0.1)) throw InvalidArgument("eps must lie in (1e-14, 0.1)");
    SamplingIntervals s;
    bool f1 = false, f2 = false;
    s.F = field.root(eps, &f1);
    s.K = conj.root(eps, &f2);
    s.flagged = f1 || f2;
    s.ratio = s.F > 0.0 ? s.K / s.F : 0.0;
    s.n_phi = static_cast<int>(std::ceil(2.0 * s.F * s.K / std::numbers::pi));
    return s;
}

SamplingIntervals optimal_sampling_intervals(const ModelSystem& sys, int site, double eps) {
    const LocalDistributions d = local_distributions(sys, site);
    const double m = sys.params.boson_mass;
    const double nn = 2.0 * sys.params.n_cut + 1.0;
    const double panel = 0.5 * std::numbers::pi / std::sqrt(nn);
    const TailProfile tf(d.p_phi, std::sqrt(nn / m), panel / std::sqrt(m));
    const TailProfile tk(d.p_kappa, std::sqrt(nn * m), panel * std::sqrt(m));
    return optimal_sampling_intervals(tf, tk, eps);
}

namespace {

std::vector<double> occupation(const ModelSystem& sys) {
    const Eigen::MatrixXd& C = sys.ground;
    std::vector<double> p(static_cast<size_t>(C.rows()));
    for (Eigen::Index k = 0; k < C.rows(); ++k) p[static_cast<size_t>(k)] = C.row(k).squaredNorm();
    return p;
}

}  // namespace

MassScan cutoff_vs_mass(const ModelParams& base, const std::vector<double>& masses,
                        const std::vector<double>& eps_list) {
    MassScan scan;
    scan.masses = masses;
    scan.eps_list = eps_list;
    for (double m : masses) {
        ModelParams p = base;
        p.boson_mass = m;
        const ModelSystem sys = build_model(p);
        const std::vector<double> occ = occupation(sys);
        std::vector<int> nb;
        std::vector<double> res;
        for (double e : eps_list) {
            nb.push_back(cutoff_from_probs(occ, e));
            res.push_back(tail_sum(occ, nb.back()));
        }
        scan.n_b.push_back(nb);
        scan.residual.push_back(res);
    }
    return scan;
}

int MassScan::min_cutoff(std::size_t e) const {
    int best = -1;
    for (const auto& row : n_b)
        if (best < 0 || row.at(e) < best) best = row.at(e);
    return best;
}

double MassScan::argmin(std::size_t e) const {
    const int nb = min_cutoff(e);
    double best_m = 0.0, best_r = 0.0;
    bool found = false;
    for (size_t i = 0; i < masses.size(); ++i) {
        if (n_b[i].at(e) != nb) continue;
        if (!found || residual[i][e] < best_r) {
            best_m = masses[i];
            best_r = residual[i][e];
            found = true;
        }
    }
    return best_m;
}

}  // namespace bosegrid::models
