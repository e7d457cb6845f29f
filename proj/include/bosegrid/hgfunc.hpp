#pragma once

#include <complex>
#include <vector>

namespace bosegrid {

// Boson mass and the highest order a caller intends to evaluate. Used where
// a family of HG functions is carried around together (number-basis models).
struct HGBasis {
    double mass = 1.0;
    int max_order = 0;
};

// A value stored as mant * exp(log_scale) so that orders in the thousands
// can be evaluated far into the classically forbidden region.
struct ScaledValue {
    double mant = 0.0;
    double log_scale = 0.0;
    double value() const;
    double log_abs() const;  // -inf for an exact zero
};

// phi_n(phi) for boson mass m0, via the normalized three-term recurrence.
double eval_hg(int n, double m0, double phi);

// Same, returned in scaled form (never overflows or underflows).
ScaledValue eval_hg_scaled(int n, double m0, double phi);

// phi_0 .. phi_nmax at one point.
std::vector<double> eval_hg_all(int nmax, double m0, double phi);

// Fourier transform (unitary, e^{-i kappa phi} kernel): (-i)^n phi_n(1/m0, kappa).
std::complex<double> eval_hg_ft(int n, double m0, double kappa);

// ||w_F|| of phi_n: the L2 norm of phi_n outside [-F, F].
// Conjugate side: tail_weight(n, 1/m0, K).
double tail_weight(int n, double m0, double F);

// Right-hand side of the Stirling-based estimate for the *squared* tail weight:
// (1/(L sqrt(pi))) 2^n L^{2n} / n! e^{-L^2}.
double tail_bound(int n, double L);

// Grid form of the tail-weight estimate with L^2 = pi N_phi / 2, as printed:
// pi^{-3/2} e^{-pi N/4} e^{(2n-1)/4 ln N} e^{-n/2 ln n} e^{n/2 (ln pi + 1)} e^{-1/4 ln n}.
// The printed form diverges at n = 0 (Stirling is not valid there); for n = 0
// the pre-Stirling expression sqrt(tail_bound(0, L)) is returned instead.
double tail_bound_grid(int n, int n_phi);

}  // namespace bosegrid
