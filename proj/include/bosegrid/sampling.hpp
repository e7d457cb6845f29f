#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace bosegrid {

using cplx = std::complex<double>;

// Symmetric half-integer lattice: index k = 0..N-1 maps to j = k - (N-1)/2.
struct SamplingGrid {
    int n_points = 0;
    double delta_phi = 0.0;
    double delta_kappa = 0.0;

    // Delta_phi = sqrt(2 pi / (N m)), Delta_kappa = sqrt(2 pi m / N).
    static SamplingGrid make(int n_phi, double mass);

    double index(int k) const { return k - 0.5 * (n_points - 1); }
    double phi(int k) const { return index(k) * delta_phi; }
    double kappa(int k) const { return index(k) * delta_kappa; }
    double F() const { return 0.5 * n_points * delta_phi; }
    double K() const { return 0.5 * n_points * delta_kappa; }
    double mass() const { return delta_kappa / delta_phi; }
};

// Raw samples f(phi_i), no sqrt(Delta) factor.
struct SampledFunction {
    SamplingGrid grid;
    std::vector<cplx> values;
};

// Norm-type tail data of a function for windows [-F,F] and [-K,K].
struct TailWeights {
    double w_F = 0.0;
    double w_K = 0.0;
    double r_F = 0.0;  // weight of phi f(phi) outside [-F,F]
    double r_K = 0.0;  // weight of kappa fhat(kappa) outside [-K,K]
    std::pair<double, double> boundary_f{0.0, 0.0};     // |f(-F)|^2, |f(F)|^2
    std::pair<double, double> boundary_fhat{0.0, 0.0};  // |fhat(-K)|^2, |fhat(K)|^2
};

// Closed description of a square-integrable function: pointwise callables on
// both sides plus a way to get its tails for any window pair.
struct FunctionDescriptor {
    std::function<cplx(double)> f;
    std::function<cplx(double)> fhat;
    std::function<TailWeights(double F, double K)> tails;
};

// Tails of phi_n (boson mass m0) for windows F, K.
TailWeights hg_tails(int n, double m0, double F, double K);
FunctionDescriptor hg_descriptor(int n, double m0);

// Tails by direct quadrature of |f|^2 and |fhat|^2. `reach` bounds the
// integration: the integrands are treated as zero beyond |x| > reach.
TailWeights numeric_tails(const FunctionDescriptor& d, double F, double K, double reach_phi,
                          double reach_kappa);

SampledFunction sample(const std::function<cplx(double)>& f, const SamplingGrid& g);

// Truncated sinc series through the stored samples.
cplx reconstruct(const SampledFunction& s, double phi);

// Unitary finite Fourier transform on half-integer indices.
// forward: X_p = N^{-1/2} sum_j x_j e^{-i 2 pi j p / N}  (field -> conjugate)
// inverse: x_j = N^{-1/2} sum_p X_p e^{+i 2 pi j p / N}
std::vector<cplx> fft_forward(const std::vector<cplx>& x);
std::vector<cplx> fft_inverse(const std::vector<cplx>& X);

// Exact phase e^{s i 2 pi j p / N} for half-integer j = J/2, p = P/2.
cplx half_integer_phase(long J, long P, int n, int sign);

// Right-hand sides of the field-side and conjugate-side reconstruction bounds.
std::pair<double, double> sampling_error_bound(const TailWeights& t, double F, double K);

// Aliased (anti-periodized) samples with sqrt(Delta) prefactors:
// alias:    sqrt(Dphi) sum_n (-1)^n f(phi_i + n N Dphi)
// alias_ft: sqrt(Dkap) sum_n (-1)^n fhat(kappa_p + n N Dkap)
SampledFunction alias(const FunctionDescriptor& d, const SamplingGrid& g);
SampledFunction alias_ft(const FunctionDescriptor& d, const SamplingGrid& g);

struct FftErrorReport {
    double lhs_field_to_kappa = 0.0;   // Dkap sum_p |(F f)(kappa_p) - fhat(kappa_p)|^2
    double lhs_kappa_to_field = 0.0;   // Dphi sum_i |(F^-1 fhat)(phi_i) - f(phi_i)|^2
    double rhs = 0.0;                  // shared right-hand side
};
FftErrorReport fft_vs_continuous_error(const FunctionDescriptor& d, const SamplingGrid& g);

// Multi-site bound: local tails per site plus the lattice-wide r_K (resp. r_F)
// of kappa_1..kappa_N fhat. Returns (field-sampled bound, conjugate-sampled bound).
struct LatticeRWeights {
    double r_K = 0.0;
    double r_F = 0.0;
};
std::pair<double, double> lattice_error_bound(const std::vector<TailWeights>& local_tails,
                                              const LatticeRWeights& r, double F, double K,
                                              int n_sites);

}  // namespace bosegrid
