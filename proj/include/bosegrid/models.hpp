#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "bosegrid/distribution.hpp"

namespace bosegrid::models {

// Vacuum of mass m0 expanded in the number basis of mass m1 = ratio * m0.
struct SqueezedVacuum {
    double ratio = 1.0;
    double r = 0.0;               // 0.5 ln(ratio)
    std::vector<double> coeffs;   // C_n, odd entries zero
};

// Coefficients are generated until the remaining weight is below `floor`.
SqueezedVacuum squeezed_vacuum(double ratio, double floor = 1e-16);

// Smallest N_b with 1 - sum_{n<N_b} |C_n|^2 <= eps.
int squeezed_cutoff(double ratio, double eps);

// Least-squares fit N_b = a * ratio + b * ratio * ln(eps).
struct SqueezedFit {
    double a = 0.0;
    double b = 0.0;
    double r2 = 0.0;
};
SqueezedFit fit_squeezed(const std::vector<double>& ratios, const std::vector<double>& eps_list);

enum class ModelKind { LocalPhi4, TwoSitePhi4 };

// H = sum_sites [Pi^2/2 + m0_sq Phi^2/2 + g Phi^4/24] - h Phi_1 Phi_2 (two-site only),
// written in the number basis of mass boson_mass > 0.
struct ModelParams {
    ModelKind kind = ModelKind::LocalPhi4;
    double m0_sq = 1.0;
    double g = 0.0;
    double h = 0.0;
    double boson_mass = 1.0;
    int n_cut = 64;
    int n_cut_max = 1024;
};

struct ModelSystem {
    ModelParams params;        // n_cut is the converged value
    double energy = 0.0;
    double energy_delta = 0.0; // |E0(n_cut) - E0(n_cut/2)|
    // Local: n_cut x 1. Two-site: C(n1, n2), n_cut x n_cut.
    Eigen::MatrixXd ground;
};

// Single-site operator pieces truncated to n_cut (exact matrix elements).
Eigen::MatrixXd local_hamiltonian(double m0_sq, double g, double boson_mass, int n_cut);
Eigen::MatrixXd field_matrix(double boson_mass, int n_cut);

// Builds the model and doubles n_cut until the energy changes by less than
// 1e-8 max(1, |E0|) between n_cut/2 and n_cut. Throws NumericalError if
// n_cut_max is reached first.
ModelSystem build_model(const ModelParams& p);

// Ground state at a fixed n_cut, without the convergence loop.
ModelSystem solve_fixed(const ModelParams& p);

struct LocalDistributions {
    Eigen::MatrixXd rho;                    // reduced density matrix, number basis
    std::function<double(double)> p_phi;
    std::function<double(double)> p_kappa;
    Distribution p_n;                       // support 0..n_cut-1
};

// site is 1 or 2 (ignored for the local model).
LocalDistributions local_distributions(const ModelSystem& sys, int site = 1);

// Outer tail sqrt(integral_{|x|>X} p(x) dx) of a symmetric-ish density,
// tabulated on panel boundaries so root finding is cheap.
class TailProfile {
public:
    // scale: typical width of the density; reach is found automatically.
    TailProfile(const std::function<double(double)>& p, double scale, double panel);

    double operator()(double x) const;
    // Largest X with tail(X) >= eps; flagged when the tabulated tail is not
    // monotone around the root.
    double root(double eps, bool* flagged = nullptr) const;
    double reach() const { return edges_.back(); }

private:
    std::function<double(double)> p_;
    std::vector<double> edges_;
    std::vector<double> cum_;  // integral over |x| > edges_[i]
    double partial(double a, double b) const;
};

struct SamplingIntervals {
    double F = 0.0;
    double K = 0.0;
    double ratio = 0.0;
    int n_phi = 0;  // ceil(2 F K / pi)
    bool flagged = false;
};

SamplingIntervals optimal_sampling_intervals(const ModelSystem& sys, int site, double eps);

// Same, with precomputed distributions (avoids recomputation over eps sweeps).
SamplingIntervals optimal_sampling_intervals(const TailProfile& field, const TailProfile& conj,
                                             double eps);

struct MassScan {
    std::vector<double> masses;
    std::vector<double> eps_list;
    std::vector<std::vector<int>> n_b;          // [mass][eps]
    std::vector<std::vector<double>> residual;  // sum_{n>=N_b} p(n)

    // Mass with the smallest N_b; ties go to the smallest residual.
    double argmin(std::size_t eps_index) const;
    int min_cutoff(std::size_t eps_index) const;
};

// Rebuilds `base` at every mass (boson_mass overwritten) and records N_b(m, eps).
MassScan cutoff_vs_mass(const ModelParams& base, const std::vector<double>& masses,
                        const std::vector<double>& eps_list);

}  // namespace bosegrid::models
