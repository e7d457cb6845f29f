#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "bosegrid/distribution.hpp"
#include "bosegrid/finiterep.hpp"

namespace bosegrid::measure {

using cplx = std::complex<double>;

// Phase estimation of H_h1 = H_h - m0/2 with evolution scale theta = 1/(m0 2^n_r).
struct QPEConfig {
    int n_r = 0;
    double m0 = 1.0;
    double theta = 0.0;
    Eigen::VectorXd energies;  // of H_h1, ascending

    // Throws InvalidArgument when 2^n_r < (E_max - E_min)/m0.
    static QPEConfig make(const FiniteRep& rep, const Eigensystem& eig, int n_r);
};

// a_nk = 2^{-n_r} sum_x exp(-i 2 pi mu x / 2^{n_r}), mu = E/m0 - k, in closed form.
cplx ank_value(double e_over_m0, int k, int n_r);

struct AncillaDistribution {
    std::vector<double> probs;  // k = 0 .. 2^n_r - 1
    double p1max = 0.0;         // max_{k >= N_b} p(k)
    double p_all = 0.0;         // sum_{k >= N_b} p(k)
};

// c(e, n): amplitude of environment state e times eigenstate n of H_h1.
AncillaDistribution qpe_distribution(const Eigen::MatrixXcd& c, const QPEConfig& cfg, int n_b);

// sum_{e, n >= N_b} |c(e, n)|^2.
double high_energy_weight(const Eigen::MatrixXcd& c, int n_b);

// Diagonals of rho in the field basis and in the conjugate basis F^dagger rho F.
std::pair<Distribution, Distribution> field_histograms(const Eigen::MatrixXcd& rho,
                                                       const FiniteRep& rep);
std::pair<Distribution, Distribution> field_histograms(const Eigen::VectorXcd& state,
                                                       const FiniteRep& rep);

// Pauli-string expansion rho = 2^{-n_q} sum_v s_v P_v. Qubit 0 is the most
// significant bit of the grid index, and the string index is
// v = sum_q v_q 4^{n_q - 1 - q} with v_q in {0: I, 1: X, 2: Y, 3: Z}.
struct PauliDecomposition {
    int n_q = 0;
    std::vector<double> coeffs;
};

PauliDecomposition pauli_decompose(const Eigen::MatrixXcd& rho, int n_q);
Eigen::MatrixXcd pauli_reconstruct(const PauliDecomposition& d);
// Dense matrix of one string (for tests and small n_q).
Eigen::MatrixXcd pauli_string(std::uint32_t v, int n_q);

struct QSTResult {
    PauliDecomposition decomposition;
    Eigen::MatrixXcd rho_rec;
    std::vector<double> p_n;  // <phi~_n | rho_rec | phi~_n>
    double roundtrip_error = 0.0;  // max |rho - rho_rec|
};

QSTResult qst_roundtrip(const Eigen::MatrixXcd& rho, int n_q, const Eigensystem& eig);

// Multinomial counts of `shots` draws from probs.
std::vector<long> sample_shots(const std::vector<double>& probs, long shots, std::uint64_t seed);

}  // namespace bosegrid::measure
