#include "bosegrid/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "bosegrid/errors.hpp"

namespace bosegrid::measure {

namespace {

constexpr double kPi = std::numbers::pi;

void check_nq(int n_q) {
    if (n_q < 1 || n_q > 8) throw InvalidArgument("n_q must lie in [1, 8]");
}

// P_v |c> = phase(c) |c xor mask>.
struct StringAction {
    std::uint32_t mask = 0;
    std::uint32_t zmask = 0;   // qubits carrying Y or Z: sign (-1)^bit
    int y_count = 0;           // each Y also contributes a factor i
};

StringAction action(std::uint32_t v, int n_q) {
    StringAction a;
    for (int q = 0; q < n_q; ++q) {
        const std::uint32_t code = (v >> (2 * (n_q - 1 - q))) & 3u;
        const std::uint32_t bit = 1u << (n_q - 1 - q);
        if (code == 1 || code == 2) a.mask |= bit;
        if (code == 2 || code == 3) a.zmask |= bit;
        if (code == 2) ++a.y_count;
    }
    return a;
}

cplx phase(const StringAction& a, std::uint32_t c) {
    // Y = i X Z: Y|0> = i|1>, Y|1> = -i|0>.
    const int sign = (std::popcount(c & a.zmask) % 2 == 0) ? 1 : -1;
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return ipow[a.y_count % 4] * static_cast<double>(sign);
}

}  // namespace

QPEConfig QPEConfig::make(const FiniteRep& rep, const Eigensystem& eig, int n_r) {
    if (n_r < 1 || n_r > 30) throw InvalidArgument("n_r must lie in [1, 30]");
    QPEConfig c;
    c.n_r = n_r;
    c.m0 = rep.mass;
    c.theta = 1.0 / (rep.mass * std::ldexp(1.0, n_r));
    c.energies = eig.energies.array() - 0.5 * rep.mass;
    const double range = (eig.energies.maxCoeff() - eig.energies.minCoeff()) / rep.mass;
    if (std::ldexp(1.0, n_r) < range)
        throw InvalidArgument("ancilla register too small for the energy range");
    return c;
}

cplx ank_value(double e_over_m0, int k, int n_r) {
    const double M = std::ldexp(1.0, n_r);
    if (k < 0 || k >= M) throw InvalidArgument("k out of range");
    const double mu = e_over_m0 - k;
    const double s_small = std::sin(kPi * mu / M);
    const cplx ph = std::polar(1.0, -kPi * mu * (M - 1.0) / M);
    // mu in M Z: every term of the geometric sum is 1 (up to a global sign).
    if (std::abs(s_small) < 1e-300 || std::abs(std::remainder(mu, M)) < 1e-13)
        return ph * (std::cos(kPi * mu) / std::cos(kPi * mu / M));
    return ph * (std::sin(kPi * mu) / (M * s_small));
}

AncillaDistribution qpe_distribution(const Eigen::MatrixXcd& c, const QPEConfig& cfg, int n_b) {
    if (c.cols() != cfg.energies.size()) throw InvalidArgument("state dimension mismatch");
    const double norm2 = c.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-8) throw InvalidArgument("state must be normalized");
    const long M = 1L << cfg.n_r;
    AncillaDistribution d;
    d.probs.assign(static_cast<size_t>(M), 0.0);
    // Weight per eigenstate: the environment index only adds up |c(e, n)|^2.
    const Eigen::VectorXd w = c.cwiseAbs2().colwise().sum().transpose();
    for (Eigen::Index n = 0; n < w.size(); ++n) {
        if (w(n) == 0.0) continue;
        const double e = cfg.energies(n) / cfg.m0;
        for (long k = 0; k < M; ++k)
            d.probs[static_cast<size_t>(k)] += w(n) * std::norm(ank_value(e, static_cast<int>(k), cfg.n_r));
    }
    for (long k = std::max(0, n_b); k < M; ++k) {
        d.p1max = std::max(d.p1max, d.probs[static_cast<size_t>(k)]);
        d.p_all += d.probs[static_cast<size_t>(k)];
    }
    return d;
}

double high_energy_weight(const Eigen::MatrixXcd& c, int n_b) {
    if (n_b >= c.cols()) return 0.0;
    const int start = std::max(0, n_b);
    return c.rightCols(c.cols() - start).squaredNorm();
}

std::pair<Distribution, Distribution> field_histograms(const Eigen::MatrixXcd& rho,
                                                       const FiniteRep& rep) {
    const int N = rep.grid.n_points;
    if (rho.rows() != N || rho.cols() != N) throw InvalidArgument("density dimension mismatch");
    const Eigen::MatrixXcd rk = rep.fft_op.adjoint() * rho * rep.fft_op;
    std::pair<Distribution, Distribution> out;
    for (int k = 0; k < N; ++k) {
        out.first.support.push_back(rep.grid.phi(k));
        // Roundoff can leave diagonals of a PSD matrix a hair below zero.
        out.first.probs.push_back(std::max(0.0, rho(k, k).real()));
        out.second.support.push_back(rep.grid.kappa(k));
        out.second.probs.push_back(std::max(0.0, rk(k, k).real()));
    }
    return out;
}

std::pair<Distribution, Distribution> field_histograms(const Eigen::VectorXcd& state,
                                                       const FiniteRep& rep) {
    return field_histograms(Eigen::MatrixXcd(state * state.adjoint()), rep);
}

Eigen::MatrixXcd pauli_string(std::uint32_t v, int n_q) {
    check_nq(n_q);
    const std::uint32_t dim = 1u << n_q;
    const StringAction a = action(v, n_q);
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint32_t c = 0; c < dim; ++c) P(c ^ a.mask, c) = phase(a, c);
    return P;
}

PauliDecomposition pauli_decompose(const Eigen::MatrixXcd& rho, int n_q) {
    check_nq(n_q);
    const std::uint32_t dim = 1u << n_q;
    if (rho.rows() != dim || rho.cols() != dim) throw InvalidArgument("density dimension mismatch");
    PauliDecomposition d;
    d.n_q = n_q;
    const std::uint32_t count = 1u << (2 * n_q);
    d.coeffs.resize(count);
    for (std::uint32_t v = 0; v < count; ++v) {
        const StringAction a = action(v, n_q);
        // Tr(P rho) = sum_c phase(c) rho(c, c xor mask).
        cplx s = 0.0;
        for (std::uint32_t c = 0; c < dim; ++c) s += phase(a, c) * rho(c, c ^ a.mask);
        d.coeffs[v] = s.real();
    }
    return d;
}

Eigen::MatrixXcd pauli_reconstruct(const PauliDecomposition& d) {
    check_nq(d.n_q);
    const std::uint32_t dim = 1u << d.n_q;
    if (d.coeffs.size() != (std::size_t{1} << (2 * d.n_q)))
        throw InvalidArgument("coefficient count mismatch");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint32_t v = 0; v < d.coeffs.size(); ++v) {
        const double s = d.coeffs[v];
        if (s == 0.0) continue;
        const StringAction a = action(v, d.n_q);
        for (std::uint32_t c = 0; c < dim; ++c) rho(c ^ a.mask, c) += s * phase(a, c);
    }
    return rho / static_cast<double>(dim);
}

QSTResult qst_roundtrip(const Eigen::MatrixXcd& rho, int n_q, const Eigensystem& eig) {
    check_nq(n_q);
    if (eig.states.rows() != (1L << n_q)) throw InvalidArgument("eigensystem dimension mismatch");
    QSTResult r;
    r.decomposition = pauli_decompose(rho, n_q);
    r.rho_rec = pauli_reconstruct(r.decomposition);
    r.roundtrip_error = (rho - r.rho_rec).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd S = eig.states.cast<cplx>();
    const Eigen::MatrixXcd proj = S.adjoint() * r.rho_rec * S;
    for (Eigen::Index n = 0; n < proj.rows(); ++n) r.p_n.push_back(proj(n, n).real());
    return r;
}

std::vector<long> sample_shots(const std::vector<double>& probs, long shots, std::uint64_t seed) {
    if (shots < 0) throw InvalidArgument("shot count must be non-negative");
    for (double p : probs)
        if (!(p >= 0.0)) throw InvalidArgument("probabilities must be non-negative");
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
    std::vector<long> counts(probs.size(), 0);
    for (long s = 0; s < shots; ++s) ++counts[dist(rng)];
    return counts;
}

}  // namespace bosegrid::measure
