#include "bosegrid/advisor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "bosegrid/counterexample.hpp"
#include "bosegrid/errors.hpp"
#include "bosegrid/finiterep.hpp"
#include "bosegrid/hgfunc.hpp"
#include "bosegrid/measure.hpp"
#include "bosegrid/models.hpp"

namespace bosegrid::advisor {

namespace {

void check_state(const GuidelineState& st) {
    if (st.n_phi < 2 || st.n_phi % 2 != 0) throw InvalidArgument("N_phi must be even and >= 2");
    if (!(st.mass > 0.0)) throw InvalidArgument("mass must be positive");
    if (!(st.f_c > 0.0 && st.f_c < 1.0)) throw InvalidArgument("f_c must lie in (0, 1)");
    if (!(st.eps > 0.0 && st.eps < 0.1)) throw InvalidArgument("eps must lie in (0, 0.1)");
}

// Scan levels are the grid-point radii (2j - 1)/N, j = 1..N/2, then 1. beta is
// the smallest level with sum_{|x_i| > beta X} p_i < eps.
double scan_beta(const Distribution& d, double window, int n_phi, double eps, bool* overflow) {
    const int half = n_phi / 2;
    // ring[j]: weight on the two points at radius (2j - 1)/N X.
    std::vector<double> ring(static_cast<size_t>(half) + 1, 0.0);
    const double step = window / half;
    for (size_t i = 0; i < d.probs.size(); ++i) {
        const double r = std::abs(d.support[i]) / step;
        const int j = std::clamp(static_cast<int>(std::lround(r + 0.5)), 1, half);
        ring[static_cast<size_t>(j)] += d.probs[i];
    }
    *overflow = ring[static_cast<size_t>(half)] >= eps;
    if (*overflow) return 1.0;
    // Weight strictly outside radius (2j - 1)/N: rings j + 1 .. N/2.
    double outside = ring[static_cast<size_t>(half)];
    int best = half;
    for (int j = half - 1; j >= 1; --j) {
        if (j < half - 1) outside += ring[static_cast<size_t>(j + 1)];
        if (outside >= eps) break;
        best = j;
    }
    return (2.0 * best - 1.0) / n_phi;
}

}  // namespace

int boson_cutoff(int n_phi, double eps) {
    const FiniteRep rep = build(n_phi, 1.0);
    return low_energy_cutoff(rep, diagonalize(rep), eps);
}

Betas compute_betas(const MeasurementSnapshot& snap, const GuidelineState& st) {
    check_state(st);
    const auto n = static_cast<size_t>(st.n_phi);
    if (snap.p_phi.probs.size() != n || snap.p_kappa.probs.size() != n ||
        snap.p_phi.support.size() != n || snap.p_kappa.support.size() != n)
        throw InvalidArgument("snapshot size does not match N_phi");
    const SamplingGrid g = SamplingGrid::make(st.n_phi, st.mass);
    Betas b;
    b.beta_phi = scan_beta(snap.p_phi, g.F(), st.n_phi, st.eps, &b.overflow_phi);
    b.beta_kappa = scan_beta(snap.p_kappa, g.K(), st.n_phi, st.eps, &b.overflow_kappa);
    return b;
}

std::string to_string(ActionKind k) {
    switch (k) {
        case ActionKind::Accept: return "Accept";
        case ActionKind::RescaleMass: return "RescaleMass";
        case ActionKind::GrowGrid: return "GrowGrid";
        case ActionKind::NeedBosonCheck: return "NeedBosonCheck";
        case ActionKind::GrowForBosons: return "GrowForBosons";
    }
    return "Accept";
}

ActionKind action_from_string(const std::string& s) {
    for (ActionKind k : {ActionKind::Accept, ActionKind::RescaleMass, ActionKind::GrowGrid,
                         ActionKind::NeedBosonCheck, ActionKind::GrowForBosons})
        if (to_string(k) == s) return k;
    throw InvalidArgument("unknown action: " + s);
}

int grow_to(int n_phi, double factor, bool pow2) {
    const double target = std::max(n_phi * factor, n_phi + 2.0);
    if (pow2) {
        int n = 2;
        while (n < target - 1e-9) n *= 2;
        return n;
    }
    int n = static_cast<int>(std::ceil(target - 1e-9));
    if (n % 2 != 0) ++n;
    return std::max(n, n_phi + 2);
}

Action decide(const MeasurementSnapshot& snap, const GuidelineState& st) {
    const Betas b = compute_betas(snap, st);
    Action a;
    const double prod = b.beta_phi * b.beta_kappa;
    const double fc2 = st.f_c * st.f_c;
    if (prod > fc2) {
        a.kind = ActionKind::GrowGrid;
        a.factor = prod / fc2;
        a.new_n_phi = grow_to(st.n_phi, a.factor, st.pow2_growth);
        return a;
    }
    // "beta_phi ~ beta_kappa": within 10%, or within one scan step 2/N_phi.
    const double tol = std::max(0.1 * std::max(b.beta_phi, b.beta_kappa), 2.0 / st.n_phi + 1e-12);
    if (std::abs(b.beta_phi - b.beta_kappa) > tol) {
        a.kind = ActionKind::RescaleMass;
        a.mu = b.beta_kappa / b.beta_phi;
        return a;
    }
    if (!snap.p_boson) {
        a.kind = ActionKind::NeedBosonCheck;
        return a;
    }
    const int nb = st.n_b >= 0 ? st.n_b : boson_cutoff(st.n_phi, st.eps);
    a.boson_tail = tail_sum(snap.p_boson->probs, nb);
    if (a.boson_tail >= st.eps) {
        a.kind = ActionKind::GrowForBosons;
        a.new_n_phi = grow_to(st.n_phi, 2.0, st.pow2_growth);
        return a;
    }
    a.kind = ActionKind::Accept;
    return a;
}

Action decide_multi(const std::vector<MeasurementSnapshot>& snaps, const GuidelineState& st) {
    if (snaps.empty()) throw InvalidArgument("need at least one snapshot");
    auto rank = [](ActionKind k) {
        switch (k) {
            case ActionKind::GrowGrid: return 4;
            case ActionKind::GrowForBosons: return 3;
            case ActionKind::RescaleMass: return 2;
            case ActionKind::NeedBosonCheck: return 1;
            default: return 0;
        }
    };
    Action best = decide(snaps.front(), st);
    for (size_t i = 1; i < snaps.size(); ++i) {
        const Action a = decide(snaps[i], st);
        if (rank(a.kind) > rank(best.kind)) {
            best = a;
        } else if (a.kind == best.kind) {
            if (a.kind == ActionKind::RescaleMass && std::abs(std::log(a.mu)) > std::abs(std::log(best.mu)))
                best = a;
            if (a.new_n_phi > best.new_n_phi) best = a;
        }
    }
    return best;
}

Distribution qpe_boson_snapshot(const std::vector<double>& samples, const GuidelineState& st) {
    const FiniteRep rep = build(st.n_phi, st.mass);
    const Eigensystem eig = diagonalize(rep);
    const Eigen::Map<const Eigen::VectorXd> v(samples.data(), static_cast<Eigen::Index>(samples.size()));
    Eigen::MatrixXcd c(1, st.n_phi);
    c.row(0) = (eig.states.transpose() * v).cast<cplx>().transpose();
    c /= c.norm();
    int n_r = 1;
    while ((1 << n_r) < 2 * st.n_phi) ++n_r;
    const measure::QPEConfig cfg = measure::QPEConfig::make(rep, eig, n_r);
    const measure::AncillaDistribution a = measure::qpe_distribution(c, cfg, st.n_phi);
    Distribution d;
    for (size_t k = 0; k < a.probs.size(); ++k) {
        d.support.push_back(static_cast<double>(k));
        d.probs.push_back(a.probs[k]);
    }
    return d;
}

MeasurementSnapshot snapshot_from_samples(const std::vector<double>& samples,
                                          const GuidelineState& st, bool with_bosons) {
    if (samples.size() != static_cast<size_t>(st.n_phi)) throw InvalidArgument("sample count mismatch");
    const FiniteRep rep = build(st.n_phi, st.mass);
    Eigen::VectorXcd psi(st.n_phi);
    for (int k = 0; k < st.n_phi; ++k) psi(k) = samples[static_cast<size_t>(k)];
    psi /= psi.norm();
    auto h = measure::field_histograms(psi, rep);
    MeasurementSnapshot s;
    s.p_phi = std::move(h.first);
    s.p_kappa = std::move(h.second);
    if (with_bosons) s.p_boson = qpe_boson_snapshot(samples, st);
    return s;
}

namespace {

class FunctionBackend : public Backend {
public:
    FunctionBackend(std::string name, std::function<double(double)> f)
        : name_(std::move(name)), f_(std::move(f)) {}
    std::string name() const override { return name_; }
    MeasurementSnapshot measure(const GuidelineState& st, bool with_bosons) override {
        const SamplingGrid g = SamplingGrid::make(st.n_phi, st.mass);
        std::vector<double> s(static_cast<size_t>(st.n_phi));
        for (int k = 0; k < st.n_phi; ++k) s[static_cast<size_t>(k)] = std::sqrt(g.delta_phi) * f_(g.phi(k));
        return snapshot_from_samples(s, st, with_bosons);
    }

private:
    std::string name_;
    std::function<double(double)> f_;
};

class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(std::vector<MeasurementSnapshot> s) : snaps_(std::move(s)) {}
    std::string name() const override { return "replay"; }
    MeasurementSnapshot measure(const GuidelineState&, bool) override {
        if (next_ >= snaps_.size()) throw InvalidArgument("replay backend ran out of snapshots");
        return snaps_[next_++];
    }

private:
    std::vector<MeasurementSnapshot> snaps_;
    size_t next_ = 0;
};

class ShotBackend : public Backend {
public:
    ShotBackend(std::unique_ptr<Backend> inner, long shots, std::uint64_t seed)
        : inner_(std::move(inner)), shots_(shots), seed_(seed) {}
    std::string name() const override { return inner_->name() + "+shots"; }
    MeasurementSnapshot measure(const GuidelineState& st, bool with_bosons) override {
        MeasurementSnapshot s = inner_->measure(st, with_bosons);
        resample(s.p_phi);
        resample(s.p_kappa);
        if (s.p_boson) resample(*s.p_boson);
        return s;
    }

private:
    void resample(Distribution& d) {
        // One seed per histogram so each round is reproducible on its own.
        const std::vector<long> c = measure::sample_shots(d.probs, shots_, seed_ + draws_++);
        for (size_t i = 0; i < c.size(); ++i) d.probs[i] = static_cast<double>(c[i]) / shots_;
    }
    std::unique_ptr<Backend> inner_;
    long shots_;
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
};

}  // namespace

std::unique_ptr<Backend> harmonic_backend(double m0) {
    if (!(m0 > 0.0)) throw InvalidArgument("mass must be positive");
    return std::make_unique<FunctionBackend>("harmonic", [m0](double p) { return eval_hg(0, m0, p); });
}

std::unique_ptr<Backend> local_phi4_backend(double m0_sq, double g, double basis_mass, int n_cut) {
    models::ModelParams p;
    p.kind = models::ModelKind::LocalPhi4;
    p.m0_sq = m0_sq;
    p.g = g;
    p.boson_mass = basis_mass;
    p.n_cut = n_cut;
    const models::ModelSystem sys = models::build_model(p);
    const Eigen::VectorXd c = sys.ground.col(0);
    const int n = static_cast<int>(c.size());
    return std::make_unique<FunctionBackend>("local_phi4", [c, n, basis_mass](double phi) {
        const std::vector<double> v = eval_hg_all(n - 1, basis_mass, phi);
        return Eigen::Map<const Eigen::VectorXd>(v.data(), n).dot(c);
    });
}

std::unique_ptr<Backend> counterexample_backend() {
    auto f = std::make_shared<counterexample::SincCombo>(counterexample::build_f());
    return std::make_unique<FunctionBackend>("counterexample", [f](double p) { return f->f(p); });
}

std::unique_ptr<Backend> replay_backend(std::vector<MeasurementSnapshot> snaps) {
    return std::make_unique<ReplayBackend>(std::move(snaps));
}

std::unique_ptr<Backend> shot_noise_backend(std::unique_ptr<Backend> inner, long shots, std::uint64_t seed) {
    if (!inner) throw InvalidArgument("inner backend is null");
    if (shots < 1) throw InvalidArgument("shot count must be positive");
    return std::make_unique<ShotBackend>(std::move(inner), shots, seed);
}

Session run_session(Backend& backend, GuidelineState st, int max_rounds) {
    check_state(st);
    if (max_rounds < 1) throw InvalidArgument("max_rounds must be positive");
    Session s;
    s.backend = backend.name();
    bool with_bosons = false;
    for (int r = 0; r < max_rounds; ++r) {
        if (st.n_b < 0) st.n_b = boson_cutoff(st.n_phi, st.eps);
        Round round;
        round.state = st;
        round.snapshot = backend.measure(st, with_bosons);
        round.betas = compute_betas(round.snapshot, st);
        round.action = decide(round.snapshot, st);
        s.history.push_back(round);
        const Action& a = round.action;
        with_bosons = false;
        switch (a.kind) {
            case ActionKind::Accept:
                s.converged = true;
                s.final_state = st;
                return s;
            case ActionKind::RescaleMass: st.mass *= a.mu; break;
            case ActionKind::NeedBosonCheck: with_bosons = true; break;
            case ActionKind::GrowGrid:
            case ActionKind::GrowForBosons:
                st.n_phi = a.new_n_phi;
                st.n_b = -1;
                break;
        }
    }
    s.final_state = st;
    return s;
}

nlohmann::json snapshot_to_json(const MeasurementSnapshot& s, const GuidelineState& st) {
    nlohmann::json j;
    j["grid"] = {{"n_phi", st.n_phi}, {"mass", st.mass}};
    j["p_phi"] = s.p_phi.probs;
    j["p_kappa"] = s.p_kappa.probs;
    j["p_boson"] = s.p_boson ? nlohmann::json(s.p_boson->probs) : nlohmann::json(nullptr);
    return j;
}

MeasurementSnapshot snapshot_from_json(const nlohmann::json& j, GuidelineState* st_out) {
    try {
        const int n_phi = j.at("grid").at("n_phi").get<int>();
        const double mass = j.at("grid").at("mass").get<double>();
        if (n_phi < 2 || n_phi % 2 != 0 || !(mass > 0.0)) throw InvalidArgument("invalid grid block");
        const SamplingGrid g = SamplingGrid::make(n_phi, mass);
        MeasurementSnapshot s;
        s.p_phi.probs = j.at("p_phi").get<std::vector<double>>();
        s.p_kappa.probs = j.at("p_kappa").get<std::vector<double>>();
        if (s.p_phi.probs.size() != static_cast<size_t>(n_phi) ||
            s.p_kappa.probs.size() != static_cast<size_t>(n_phi))
            throw InvalidArgument("histogram length must equal n_phi");
        for (int k = 0; k < n_phi; ++k) {
            s.p_phi.support.push_back(g.phi(k));
            s.p_kappa.support.push_back(g.kappa(k));
        }
        if (j.contains("p_boson") && !j.at("p_boson").is_null()) {
            Distribution b;
            b.probs = j.at("p_boson").get<std::vector<double>>();
            for (size_t k = 0; k < b.probs.size(); ++k) b.support.push_back(static_cast<double>(k));
            s.p_boson = b;
        }
        for (const Distribution* d : {&s.p_phi, &s.p_kappa})
            if (std::abs(d->total() - 1.0) > 1e-6) throw InvalidArgument("histogram does not sum to 1");
        if (s.p_boson && std::abs(s.p_boson->total() - 1.0) > 1e-6)
            throw InvalidArgument("boson histogram does not sum to 1");
        if (st_out) {
            st_out->n_phi = n_phi;
            st_out->mass = mass;
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed snapshot JSON: ") + e.what());
    }
}

nlohmann::json session_to_json(const Session& s) {
    nlohmann::json j;
    j["backend"] = s.backend;
    j["converged"] = s.converged;
    j["final"] = {{"n_phi", s.final_state.n_phi}, {"mass", s.final_state.mass}};
    nlohmann::json rounds = nlohmann::json::array();
    for (const Round& r : s.history) {
        nlohmann::json e;
        e["state"] = {{"n_phi", r.state.n_phi}, {"mass", r.state.mass}, {"eps", r.state.eps},
                      {"f_c", r.state.f_c}, {"pow2_growth", r.state.pow2_growth}, {"n_b", r.state.n_b}};
        e["snapshot"] = snapshot_to_json(r.snapshot, r.state);
        e["betas"] = {{"beta_phi", r.betas.beta_phi}, {"beta_kappa", r.betas.beta_kappa},
                      {"overflow_phi", r.betas.overflow_phi}, {"overflow_kappa", r.betas.overflow_kappa}};
        e["action"] = {{"kind", to_string(r.action.kind)}, {"mu", r.action.mu},
                       {"factor", r.action.factor}, {"new_n_phi", r.action.new_n_phi},
                       {"boson_tail", r.action.boson_tail}};
        rounds.push_back(e);
    }
    j["rounds"] = rounds;
    return j;
}

bool replay_transcript(const nlohmann::json& transcript) {
    for (const auto& e : transcript.at("rounds")) {
        GuidelineState st;
        const auto& js = e.at("state");
        st.n_phi = js.at("n_phi").get<int>();
        st.mass = js.at("mass").get<double>();
        st.eps = js.at("eps").get<double>();
        st.f_c = js.at("f_c").get<double>();
        st.pow2_growth = js.at("pow2_growth").get<bool>();
        st.n_b = js.at("n_b").get<int>();
        const MeasurementSnapshot snap = snapshot_from_json(e.at("snapshot"));
        const Action a = decide(snap, st);
        const auto& ja = e.at("action");
        if (to_string(a.kind) != ja.at("kind").get<std::string>()) return false;
        if (a.mu != ja.at("mu").get<double>() || a.factor != ja.at("factor").get<double>() ||
            a.new_n_phi != ja.at("new_n_phi").get<int>())
            return false;
    }
    return true;
}

}  // namespace bosegrid::advisor
