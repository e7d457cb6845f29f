#pragma once

#include <Eigen/Dense>

#include <vector>

#include "bosegrid/sampling.hpp"

namespace bosegrid {

// The finite Hilbert space on N_phi half-integer field points.
struct FiniteRep {
    SamplingGrid grid;
    double mass = 1.0;
    Eigen::VectorXd phi_op;   // diagonal of the field operator
    Eigen::MatrixXcd fft_op;  // [F]_{jp} = e^{+i 2 pi j p / N} / sqrt(N)
    Eigen::MatrixXcd pi_op;   // m F Phi F^{-1}
    Eigen::MatrixXd h_osc;    // Pi^2/2 + m^2 Phi^2/2 (real symmetric)
};

FiniteRep build(int n_phi, double m0);

struct Eigensystem {
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXd states;    // columns, orthonormal
    bool parity_fixed = false;
};

// Dense symmetric solve. Column signs: the component at the first positive
// grid index is >= 0 (if that component is below 1e-12 of the column's
// largest entry, the next positive index that is not is used).
Eigensystem diagonalize(const FiniteRep& rep);

// Column n multiplied by (-1)^{floor(n/2)}: the sign phi_n itself has just
// right of the origin, so this gauge is directly comparable with sampled HG.
Eigen::VectorXd hg_aligned_state(const Eigensystem& eig, int n);

struct DiscretizedHG {
    Eigen::VectorXd vec;          // unit norm
    double norm_deviation = 0.0;  // | ||sqrt(Dphi) phi_n(phi_i)|| - 1 |
};
DiscretizedHG discretize_hg(const FiniteRep& rep, int n);

struct ErrorReport {
    std::vector<double> eps_w;
    std::vector<double> eps_d;
    std::vector<double> eps_pi;
    std::vector<double> eps_phipi;
    std::vector<double> eps_c;
};

// All per-n errors for n = 0..n_max (n_max <= N_phi - 3).
ErrorReport error_report(const FiniteRep& rep, const Eigensystem& eig, int n_max);

// ||([Phi, Pi] - i) |phi_n>||.
double commutator_residual(const FiniteRep& rep, const Eigensystem& eig, int n);

// Largest N_b such that eps_c(n) < threshold for every n < N_b.
int low_energy_cutoff(const FiniteRep& rep, const Eigensystem& eig, double threshold);

// (E_max - E_min) / m0.
double energy_range(const FiniteRep& rep, const Eigensystem& eig);

// Two sites, each a copy of `rep`. Operators act on N^2 vectors laid out as
// index = k1 * N + k2. Applied matrix-free; dense() only for N <= 32.
class TwoSiteRep {
public:
    enum class Op { Phi, Pi };

    explicit TwoSiteRep(const FiniteRep& rep);

    int local_dim() const { return n_; }
    Eigen::VectorXcd apply(Op op, int site, const Eigen::VectorXcd& v) const;
    Eigen::MatrixXcd dense(Op op, int site) const;
    Eigen::MatrixXd dense_oscillator() const;  // H1 + H2, no coupling
    const FiniteRep& local() const { return rep_; }

private:
    FiniteRep rep_;
    int n_;
};

}  // namespace bosegrid
