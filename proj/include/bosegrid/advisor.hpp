#pragma once

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bosegrid/distribution.hpp"

namespace bosegrid::advisor {

struct MeasurementSnapshot {
    Distribution p_phi;    // support: phi_i
    Distribution p_kappa;  // support: kappa_p
    std::optional<Distribution> p_boson;  // ancilla integers k
};

struct GuidelineState {
    int n_phi = 64;
    double mass = 1.0;
    double eps = 1e-4;
    double f_c = 0.7;
    bool pow2_growth = true;  // false: grow to the next even N_phi
    int n_b = -1;             // low-energy cutoff; < 0 means derive from (n_phi, eps)
};

// N_b of the discrete oscillator on n_phi points: every n < N_b has eps_c(n) < eps.
int boson_cutoff(int n_phi, double eps);

struct Betas {
    double beta_phi = 1.0;
    double beta_kappa = 1.0;
    bool overflow_phi = false;
    bool overflow_kappa = false;
};

// beta = the smallest grid-point radius (2j - 1)/N_phi (or 1) with
// sum_{|x_i| > beta X} p_i < eps. Overflow: the outermost points alone carry >= eps.
Betas compute_betas(const MeasurementSnapshot& snap, const GuidelineState& st);

enum class ActionKind { Accept, RescaleMass, GrowGrid, NeedBosonCheck, GrowForBosons };
std::string to_string(ActionKind k);
ActionKind action_from_string(const std::string& s);

struct Action {
    ActionKind kind = ActionKind::Accept;
    double mu = 1.0;      // RescaleMass: m -> mu m
    double factor = 1.0;  // GrowGrid: beta_phi beta_kappa / f_c^2
    int new_n_phi = 0;    // GrowGrid / GrowForBosons
    double boson_tail = -1.0;  // sum_{k >= N_b} p(k) when a boson snapshot was given
};

// Grid-size rounding used by the growth actions.
int grow_to(int n_phi, double factor, bool pow2);

// Rules, in order:
//   b_phi b_kappa > f_c^2                          -> GrowGrid
//   b_phi b_kappa <= f_c^2, betas differ by > max(10%, 2/N_phi)
//                                                  -> RescaleMass(b_kappa / b_phi)
//   otherwise, no boson snapshot                   -> NeedBosonCheck
//   otherwise, sum_{k >= N_b} p(k) >= eps          -> GrowForBosons (N_phi doubled)
//   otherwise                                      -> Accept
Action decide(const MeasurementSnapshot& snap, const GuidelineState& st);

// Several sites under one parameter set: the most conservative action wins
// (GrowGrid > GrowForBosons > RescaleMass > NeedBosonCheck > Accept; among
// rescales the largest |ln mu|; among growths the largest N_phi).
Action decide_multi(const std::vector<MeasurementSnapshot>& snaps, const GuidelineState& st);

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    virtual MeasurementSnapshot measure(const GuidelineState& st, bool with_bosons) = 0;
};

// Harmonic vacuum of mass m0, sampled on the current grid.
std::unique_ptr<Backend> harmonic_backend(double m0);
// Ground state of the local Phi^4 model (m0^2, g), computed once in its own number basis.
std::unique_ptr<Backend> local_phi4_backend(double m0_sq, double g, double basis_mass, int n_cut);
// The band-limited counterexample f, sampled on the current grid.
std::unique_ptr<Backend> counterexample_backend();
// Replays stored snapshots in order (each must match the state's grid size).
std::unique_ptr<Backend> replay_backend(std::vector<MeasurementSnapshot> snaps);
// Replaces every histogram of `inner` by the frequencies of `shots` draws.
std::unique_ptr<Backend> shot_noise_backend(std::unique_ptr<Backend> inner, long shots, std::uint64_t seed);

// Boson snapshot for a sampled state: exact QPE ancilla probabilities with
// n_r = log2(N_phi) + 1 ancillas on the discrete oscillator of the current mass.
Distribution qpe_boson_snapshot(const std::vector<double>& samples, const GuidelineState& st);

// Snapshot from sqrt(Dphi)-weighted field samples on the current grid.
MeasurementSnapshot snapshot_from_samples(const std::vector<double>& samples,
                                          const GuidelineState& st, bool with_bosons);

struct Round {
    GuidelineState state;
    MeasurementSnapshot snapshot;
    Betas betas;
    Action action;
};

struct Session {
    std::string backend;
    std::vector<Round> history;
    bool converged = false;
    GuidelineState final_state;
};

Session run_session(Backend& backend, GuidelineState initial, int max_rounds);

// JSON: snapshots in the CLI histogram format
// {"grid": {"n_phi", "mass"}, "p_phi": [...], "p_kappa": [...], "p_boson": [...] | null}.
nlohmann::json snapshot_to_json(const MeasurementSnapshot& s, const GuidelineState& st);
MeasurementSnapshot snapshot_from_json(const nlohmann::json& j, GuidelineState* st = nullptr);

nlohmann::json session_to_json(const Session& s);
// Re-runs decide on every recorded round; true when all actions match.
bool replay_transcript(const nlohmann::json& transcript);

}  // namespace bosegrid::advisor
