#include "bosegrid/finiterep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bosegrid/errors.hpp"
#include "bosegrid/hgfunc.hpp"

namespace bosegrid {

FiniteRep build(int n_phi, double m0) {
    if (n_phi < 2 || n_phi % 2 != 0) throw InvalidArgument("N_phi must be even and >= 2");
    if (!(m0 > 0.0)) throw InvalidArgument("mass must be positive");
    FiniteRep r;
    r.grid = SamplingGrid::make(n_phi, m0);
    r.mass = m0;
    const int N = n_phi;
    r.phi_op.resize(N);
    for (int k = 0; k < N; ++k) r.phi_op(k) = r.grid.phi(k);

    r.fft_op.resize(N, N);
    const double inv = 1.0 / std::sqrt(static_cast<double>(N));
    for (int j = 0; j < N; ++j)
        for (int p = 0; p < N; ++p)
            r.fft_op(j, p) = half_integer_phase(2L * j - (N - 1), 2L * p - (N - 1), N, +1) * inv;

    // Both Pi and Pi^2 depend only on d = j - k:
    //   Pi_d   = (1/N) sum_p kappa_p   e^{i 2 pi d p / N}
    //   Pi2_d  = (1/N) sum_p kappa_p^2 cos(2 pi d p / N)
    // with kappa_p = m0 phi_p = p Delta_kappa.
    std::vector<cplx> pi_d(static_cast<size_t>(2 * N - 1));
    std::vector<double> pi2_d(static_cast<size_t>(2 * N - 1));
    for (int d = -(N - 1); d <= N - 1; ++d) {
        cplx a = 0.0;
        double b = 0.0;
        for (int p = 0; p < N; ++p) {
            const double kap = r.grid.kappa(p);
            const cplx ph = half_integer_phase(2L * d, 2L * p - (N - 1), N, +1);
            a += kap * ph;
            b += kap * kap * ph.real();
        }
        pi_d[static_cast<size_t>(d + N - 1)] = a / static_cast<double>(N);
        pi2_d[static_cast<size_t>(d + N - 1)] = b / static_cast<double>(N);
    }
    r.pi_op.resize(N, N);
    r.h_osc.resize(N, N);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
            const size_t d = static_cast<size_t>(j - k + N - 1);
            r.pi_op(j, k) = pi_d[d];
            r.h_osc(j, k) = 0.5 * pi2_d[d];
        }
    for (int j = 0; j < N; ++j) r.h_osc(j, j) += 0.5 * m0 * m0 * r.phi_op(j) * r.phi_op(j);
    return r;
}

Eigensystem diagonalize(const FiniteRep& rep) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.h_osc);
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver did not converge", 0.0);
    Eigensystem e;
    e.energies = es.eigenvalues();
    e.states = es.eigenvectors();
    const int N = rep.grid.n_points;
    for (int c = 0; c < N; ++c) {
        auto col = e.states.col(c);
        const double big = col.cwiseAbs().maxCoeff();
        int k = N / 2;
        while (k < N - 1 && std::abs(col(k)) < 1e-12 * big) ++k;
        if (col(k) < 0.0) col = -col;
    }
    e.parity_fixed = true;
    return e;
}

Eigen::VectorXd hg_aligned_state(const Eigensystem& eig, int n) {
    if (n < 0 || n >= eig.states.cols()) throw InvalidArgument("state index out of range");
    const double s = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
    return s * eig.states.col(n);
}

DiscretizedHG discretize_hg(const FiniteRep& rep, int n) {
    const int N = rep.grid.n_points;
    if (n < 0 || n >= N) throw InvalidArgument("order must satisfy 0 <= n < N_phi");
    DiscretizedHG out;
    out.vec.resize(N);
    const double root = std::sqrt(rep.grid.delta_phi);
    for (int k = 0; k < N; ++k) out.vec(k) = root * eval_hg(n, rep.mass, rep.grid.phi(k));
    const double nrm = out.vec.norm();
    out.norm_deviation = std::abs(nrm - 1.0);
    out.vec /= nrm;
    return out;
}

namespace {

Eigen::VectorXcd apply_pi(const FiniteRep& rep, const Eigen::VectorXcd& v) { return rep.pi_op * v; }

Eigen::VectorXcd apply_phi(const FiniteRep& rep, const Eigen::VectorXcd& v) {
    return rep.phi_op.cast<cplx>().cwiseProduct(v);
}

}  // namespace

double commutator_residual(const FiniteRep& rep, const Eigensystem& eig, int n) {
    const int N = rep.grid.n_points;
    if (n < 0 || n > N - 1) throw InvalidArgument("state index out of range");
    const Eigen::VectorXcd v = eig.states.col(n).cast<cplx>();
    const Eigen::VectorXcd r =
        apply_phi(rep, apply_pi(rep, v)) - apply_pi(rep, apply_phi(rep, v)) - cplx(0.0, 1.0) * v;
    return r.norm();
}

ErrorReport error_report(const FiniteRep& rep, const Eigensystem& eig, int n_max) {
    const int N = rep.grid.n_points;
    if (n_max < 0 || n_max > N - 3) throw InvalidArgument("n_max must be <= N_phi - 3");
    const double m = rep.mass;
    const cplx I(0.0, 1.0);
    std::vector<Eigen::VectorXcd> st;
    st.reserve(static_cast<size_t>(n_max) + 3);
    for (int n = 0; n <= n_max + 2; ++n) st.push_back(hg_aligned_state(eig, n).cast<cplx>());

    ErrorReport r;
    const double F = rep.grid.F();
    for (int n = 0; n <= n_max; ++n) {
        const double nn = n;
        const Eigen::VectorXcd& v = st[static_cast<size_t>(n)];
        r.eps_w.push_back(tail_weight(n, m, F));
        r.eps_d.push_back((discretize_hg(rep, n).vec.cast<cplx>() - v).norm());

        const Eigen::VectorXcd piv = apply_pi(rep, v);
        Eigen::VectorXcd target = std::sqrt(nn + 1.0) * st[static_cast<size_t>(n + 1)] * -1.0;
        if (n > 0) target += std::sqrt(nn) * st[static_cast<size_t>(n - 1)];
        target *= -I * std::sqrt(m / 2.0);
        r.eps_pi.push_back((piv - target).norm());

        Eigen::VectorXcd t2 = v + std::sqrt((nn + 1.0) * (nn + 2.0)) * st[static_cast<size_t>(n + 2)];
        if (n > 1) t2 -= std::sqrt(nn * (nn - 1.0)) * st[static_cast<size_t>(n - 2)];
        t2 *= 0.5 * I;
        r.eps_phipi.push_back((apply_phi(rep, piv) - t2).norm());

        r.eps_c.push_back(commutator_residual(rep, eig, n));
    }
    return r;
}

int low_energy_cutoff(const FiniteRep& rep, const Eigensystem& eig, double threshold) {
    const int N = rep.grid.n_points;
    int nb = 0;
    while (nb < N && commutator_residual(rep, eig, nb) < threshold) ++nb;
    return nb;
}

double energy_range(const FiniteRep& rep, const Eigensystem& eig) {
    return (eig.energies.maxCoeff() - eig.energies.minCoeff()) / rep.mass;
}

TwoSiteRep::TwoSiteRep(const FiniteRep& rep) : rep_(rep), n_(rep.grid.n_points) {
    if (n_ > 128) throw ResourceError("two-site representation limited to N_phi <= 128");
}

Eigen::VectorXcd TwoSiteRep::apply(Op op, int site, const Eigen::VectorXcd& v) const {
    if (site != 1 && site != 2) throw InvalidArgument("site must be 1 or 2");
    if (v.size() != static_cast<Eigen::Index>(n_) * n_) throw InvalidArgument("dimension mismatch");
    // Column-major view: M(k2, k1) = v[k1 * N + k2].
    Eigen::Map<const Eigen::MatrixXcd> M(v.data(), n_, n_);
    Eigen::MatrixXcd out(n_, n_);
    const Eigen::MatrixXcd local =
        op == Op::Phi ? Eigen::MatrixXcd(rep_.phi_op.cast<cplx>().asDiagonal()) : rep_.pi_op;
    if (site == 1)
        out = M * local.transpose();
    else
        out = local * M;
    return Eigen::Map<Eigen::VectorXcd>(out.data(), out.size());
}

Eigen::MatrixXcd TwoSiteRep::dense(Op op, int site) const {
    if (n_ > 32) throw ResourceError("dense two-site operators limited to N_phi <= 32");
    const int D = n_ * n_;
    Eigen::MatrixXcd out(D, D);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(D);
    for (int c = 0; c < D; ++c) {
        e.setZero();
        e(c) = 1.0;
        out.col(c) = apply(op, site, e);
    }
    return out;
}

Eigen::MatrixXd TwoSiteRep::dense_oscillator() const {
    if (n_ > 32) throw ResourceError("dense two-site operators limited to N_phi <= 32");
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n_, n_);
    const int D = n_ * n_;
    Eigen::MatrixXd H(D, D);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            H.block(a * n_, b * n_, n_, n_) = rep_.h_osc(a, b) * I;
            if (a == b) H.block(a * n_, b * n_, n_, n_) += rep_.h_osc;
        }
    return H;
}

}  // namespace bosegrid
