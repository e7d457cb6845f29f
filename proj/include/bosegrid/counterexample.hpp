#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "bosegrid/distribution.hpp"
#include "bosegrid/finiterep.hpp"
#include "bosegrid/sampling.hpp"

namespace bosegrid::counterexample {

// f(phi) = sum_i c_i s_i f_{q_i}(phi), with s_i = sin(pi q_i) = +-1 and
//   f_q(phi) = (sinc(x - q) + sinc(x + q)) / sqrt(2 Dphi),  x = phi / Dphi.
// The s_i factor makes every s_i f_{q_i} share the far-field form
//   -2 cos(pi x) q / (pi sqrt(2 Dphi) (x^2 - q^2)),
// so the 1/phi^2, 1/phi^4, 1/phi^6 terms cancel when sum c q^k = 0, k = 1,3,5.
struct SincCombo {
    std::vector<double> q_list;
    std::vector<double> c_list;  // unit norm, orthogonal to q, q^3, q^5
    std::vector<double> signs;   // s_i
    SamplingGrid grid;
    double norm = 1.0;           // c_f: far field f ~ -c_f cos(pi x) / (pi x^8)

    double f(double phi) const;
    double fhat(double kappa) const;  // zero outside [-K, K]
    FunctionDescriptor descriptor() const;
};

// Default: q = 13.5 .. 20.5 on the N_phi = 64, m0 = 1 grid.
SincCombo build_f(int n_phi = 64, std::vector<double> q_list = {});

// Max |sum c_i q_i^k| for k = 1, 3, 5, relative to sum |c_i| q_i^k.
double cancellation_residual(const SincCombo& f);

// Log-log slope of |f| sampled at the crests x in Z within [lo, hi] (phi units).
double envelope_slope(const SincCombo& f, double lo, double hi);

struct Smoothed {
    double sigma = 0.4;
    double L = 0.0;
    double c_g = 1.0;
    FunctionDescriptor desc;
    double w_F = 0.0;
    double w_K = 0.0;
};

// g = c_g f s, s(phi) = 1 / ((e^{-(phi+L)/sigma} + 1)^2 (e^{(phi-L)/sigma} + 1)^2), L = F.
Smoothed build_g(const SincCombo& f, double sigma = 0.4);

double smoothing(double phi, double L, double sigma);

// p(n) = |<phi_n|fn>|^2 for n = 0..n_max, HG functions of mass m, by field-side
// quadrature. The integrand is cut where phi_{n_max} is negligible.
Distribution boson_spectrum(const FunctionDescriptor& fn, double mass, int n_max);

// 1 - W_{N_b} = sum_{n >= N_b} p(n), taken as 1 - sum_{n<N_b} p(n).
double high_energy_weight(const Distribution& p, int n_b);

struct SpectrumPair {
    Distribution exact;     // p(n)
    Distribution discrete;  // p~(n) = |<phi~_n | f~>|^2
    double sample_norm = 0.0;  // ||sqrt(Dphi) f(phi_i)|| before normalization
};
SpectrumPair discrete_spectrum_mismatch(const FunctionDescriptor& fn, const FiniteRep& rep,
                                        const Eigensystem& eig);

}  // namespace bosegrid::counterexample
