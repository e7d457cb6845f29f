// bosegrid: dataset generation and the parameter advisor from the command line.
// Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bosegrid/advisor.hpp"
#include "bosegrid/datasets.hpp"
#include "bosegrid/errors.hpp"

namespace {

using bosegrid::InvalidArgument;
using bosegrid::datasets::Dataset;
namespace adv = bosegrid::advisor;

struct Common {
    std::string format = "csv";
    std::string out;
    std::optional<std::uint64_t> seed;
    bool large_ok = false;
};

std::vector<double> range(double lo, double hi, double step) {
    std::vector<double> v;
    for (int i = 0; lo + i * step <= hi + 1e-9 * step; ++i) v.push_back(lo + i * step);
    return v;
}

void check_size(int n_phi, const Common& c) {
    if (n_phi > 256 && !c.large_ok) throw InvalidArgument("N_phi > 256 needs --large-ok");
}

void emit(const std::string& text, const Common& c) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open output file: " + c.out);
    f << text;
}

void emit(const Dataset& d, const Common& c, const nlohmann::json* extra = nullptr) {
    if (c.format == "json") {
        nlohmann::json j = bosegrid::datasets::to_json(d);
        if (extra) j["transcript"] = *extra;
        emit(j.dump(2) + "\n", c);
    } else {
        emit(bosegrid::datasets::to_csv(d), c);
    }
}

std::unique_ptr<adv::Backend> make_backend(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    auto num = [&](size_t i, double def) {
        if (i >= parts.size()) return def;
        try {
            return std::stod(parts[i]);
        } catch (const std::exception&) {
            throw InvalidArgument("bad number in backend spec: " + spec);
        }
    };
    if (parts.empty()) throw InvalidArgument("empty backend spec");
    if (parts[0] == "harmonic") return adv::harmonic_backend(num(1, 1.0));
    if (parts[0] == "phi4") return adv::local_phi4_backend(num(1, 1.0), num(2, 100.0), num(3, 5.0), 64);
    if (parts[0] == "counterexample") return adv::counterexample_backend();
    throw InvalidArgument("backend must be harmonic[:m0], phi4[:m0_sq[:g[:basis_mass]]] or counterexample");
}

Dataset session_table(const adv::Session& s, const nlohmann::json& params) {
    Dataset d;
    d.command = "advise";
    d.params = params;
    d.columns = {"round", "n_phi", "mass", "beta_phi", "beta_kappa", "action", "mu", "factor", "new_n_phi", "boson_tail"};
    for (size_t r = 0; r < s.history.size(); ++r) {
        const adv::Round& x = s.history[r];
        d.rows.push_back({static_cast<double>(r), static_cast<double>(x.state.n_phi), x.state.mass,
                          x.betas.beta_phi, x.betas.beta_kappa, static_cast<double>(x.action.kind),
                          x.action.mu, x.action.factor, static_cast<double>(x.action.new_n_phi),
                          x.action.boson_tail});
    }
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& x : s.history) actions.push_back(adv::to_string(x.action.kind));
    d.summary = {{"backend", s.backend}, {"converged", s.converged}, {"actions", actions},
                 {"action_codes", "0 Accept, 1 RescaleMass, 2 GrowGrid, 3 NeedBosonCheck, 4 GrowForBosons"},
                 {"final_n_phi", s.final_state.n_phi}, {"final_mass", s.final_state.mass}};
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bosegrid: finite field-amplitude representations of bosonic fields"};
    app.require_subcommand(1);
    // Subcommands inherit this: global flags may follow the subcommand name.
    app.fallthrough();
    Common c;
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", c.out, "Output file (default: stdout)");
    app.add_option("--seed", c.seed, "RNG seed for the shot sampler");
    app.add_flag("--large-ok", c.large_ok, "Allow N_phi > 256");

    std::vector<int> t1_n{32, 64, 128, 256};
    double t1_eps = 1e-4;
    auto* t1 = app.add_subcommand("table1", "Energy range and boson cutoff of the discrete oscillator");
    t1->add_option("--n-phi", t1_n)->delimiter(',');
    t1->add_option("--eps", t1_eps, "eps_c threshold for N_b");

    std::vector<int> er_n{64, 128};
    auto* er = app.add_subcommand("errors", "Per-n error taxonomy and tail estimates");
    er->add_option("--n-phi", er_n)->delimiter(',');

    std::vector<double> sq_r{4, 8, 12, 16, 20, 24, 28, 32};
    std::vector<double> sq_e{1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
    auto* sq = app.add_subcommand("squeeze", "Squeezed-vacuum cutoff N_b(ratio, eps) and fit");
    sq->add_option("--ratio", sq_r)->delimiter(',');
    sq->add_option("--eps", sq_e)->delimiter(',');

    bosegrid::datasets::ModelScanConfig aho_cfg;
    aho_cfg.m0_sq = 1.0;
    aho_cfg.g = 100.0;
    aho_cfg.masses = range(1.0, 12.0, 0.25);
    aho_cfg.eps_list = {1e-5, 1e-12};
    aho_cfg.sample_eps = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
    aho_cfg.sample_mass = 5.0;
    auto* aho = app.add_subcommand("aho", "Local Phi^4: N_b versus boson mass, optimal F and K");
    aho->add_option("--m0-sq", aho_cfg.m0_sq);
    aho->add_option("--g", aho_cfg.g);
    aho->add_option("--mass", aho_cfg.masses, "Boson masses to scan")->delimiter(',');
    aho->add_option("--eps", aho_cfg.eps_list)->delimiter(',');
    aho->add_option("--sample-eps", aho_cfg.sample_eps)->delimiter(',');
    aho->add_option("--sample-mass", aho_cfg.sample_mass);
    aho->add_option("--n-cut", aho_cfg.n_cut);

    bosegrid::datasets::ModelScanConfig ts_cfg;
    ts_cfg.two_site = true;
    ts_cfg.m0_sq = -1.0;
    ts_cfg.g = 2.0;
    ts_cfg.h = 1.0;
    ts_cfg.masses = range(0.6, 3.0, 0.1);
    ts_cfg.eps_list = {1e-5, 1e-12};
    ts_cfg.sample_eps = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
    ts_cfg.sample_mass = 1.4;
    ts_cfg.n_cut = 40;
    ts_cfg.n_cut_max = 256;
    auto* ts = app.add_subcommand("twosite", "Two-site Phi^4: N_b versus boson mass, optimal F and K");
    ts->add_option("--m0-sq", ts_cfg.m0_sq);
    ts->add_option("--g", ts_cfg.g);
    ts->add_option("--coupling", ts_cfg.h, "Inter-site coupling h");
    ts->add_option("--mass", ts_cfg.masses, "Boson masses to scan")->delimiter(',');
    ts->add_option("--eps", ts_cfg.eps_list)->delimiter(',');
    ts->add_option("--sample-eps", ts_cfg.sample_eps)->delimiter(',');
    ts->add_option("--sample-mass", ts_cfg.sample_mass);
    ts->add_option("--n-cut", ts_cfg.n_cut);

    int ce_nmax = 200;
    auto* ce = app.add_subcommand("counterexample", "Boson spectra of the band-limited f and smoothed g");
    ce->add_option("--n-max", ce_nmax);

    bosegrid::datasets::QPEDemoConfig q_cfg;
    q_cfg.state = "eigen:5";
    auto* qd = app.add_subcommand("qpe-demo", "Exact QPE ancilla histogram and bound report");
    qd->add_option("--n-phi", q_cfg.n_phi);
    qd->add_option("--mass", q_cfg.mass);
    qd->add_option("--n-r", q_cfg.n_r);
    qd->add_option("--state", q_cfg.state, "eigen:<n> or random");
    qd->add_option("--n-b", q_cfg.n_b);
    qd->add_option("--eps", q_cfg.eps);
    qd->add_option("--shots", q_cfg.shots);

    std::string backend = "harmonic:1";
    std::string input;
    adv::GuidelineState st;
    int max_rounds = 8;
    long shots = 0;
    bool linear = false;
    auto* ad = app.add_subcommand("advise", "Run the validation guideline against a backend or a histogram file");
    ad->add_option("--backend", backend, "harmonic[:m0] | phi4[:m0_sq[:g[:basis_mass]]] | counterexample");
    ad->add_option("--input", input, "Histogram JSON: one decision on measured data");
    ad->add_option("--n-phi", st.n_phi);
    ad->add_option("--mass", st.mass);
    ad->add_option("--eps", st.eps);
    ad->add_option("--f-c", st.f_c);
    ad->add_option("--max-rounds", max_rounds);
    ad->add_option("--shots", shots, "Replace exact probabilities by shot frequencies");
    ad->add_flag("--linear-growth", linear, "Grow N_phi to the next even size instead of a power of two");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*t1) {
            for (int n : t1_n) check_size(n, c);
            emit(bosegrid::datasets::table1(t1_n, t1_eps), c);
        } else if (*er) {
            for (int n : er_n) check_size(n, c);
            emit(bosegrid::datasets::errors(er_n), c);
        } else if (*sq) {
            emit(bosegrid::datasets::squeeze(sq_r, sq_e), c);
        } else if (*aho) {
            emit(bosegrid::datasets::model_scan(aho_cfg), c);
        } else if (*ts) {
            emit(bosegrid::datasets::model_scan(ts_cfg), c);
        } else if (*ce) {
            emit(bosegrid::datasets::counterexample(ce_nmax), c);
        } else if (*qd) {
            check_size(q_cfg.n_phi, c);
            if (q_cfg.shots > 0 || q_cfg.state == "random") {
                if (!c.seed) throw InvalidArgument("--seed is required with --shots or a random state");
                q_cfg.seed = *c.seed;
            }
            emit(bosegrid::datasets::qpe_demo(q_cfg), c);
        } else if (*ad) {
            st.pow2_growth = !linear;
            if (!input.empty()) {
                std::ifstream f(input);
                if (!f) throw InvalidArgument("cannot open input file: " + input);
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(f);
                } catch (const nlohmann::json::exception& e) {
                    throw InvalidArgument(std::string("malformed histogram JSON: ") + e.what());
                }
                const adv::MeasurementSnapshot snap = adv::snapshot_from_json(j, &st);
                check_size(st.n_phi, c);
                adv::Session s;
                s.backend = "input";
                adv::Round r;
                r.state = st;
                r.snapshot = snap;
                r.betas = adv::compute_betas(snap, st);
                r.action = adv::decide(snap, st);
                s.history.push_back(r);
                s.converged = r.action.kind == adv::ActionKind::Accept;
                s.final_state = st;
                const nlohmann::json params = {{"input", input}, {"n_phi", st.n_phi}, {"mass", st.mass},
                                               {"eps", st.eps}, {"f_c", st.f_c}};
                const nlohmann::json tr = adv::session_to_json(s);
                emit(session_table(s, params), c, &tr);
            } else {
                check_size(st.n_phi, c);
                auto b = make_backend(backend);
                if (shots > 0) {
                    if (!c.seed) throw InvalidArgument("--seed is required with --shots");
                    b = adv::shot_noise_backend(std::move(b), shots, *c.seed);
                }
                const adv::Session s = adv::run_session(*b, st, max_rounds);
                nlohmann::json params = {{"backend", backend}, {"n_phi", st.n_phi}, {"mass", st.mass},
                                         {"eps", st.eps}, {"f_c", st.f_c}, {"max_rounds", max_rounds},
                                         {"shots", shots}, {"pow2_growth", st.pow2_growth}};
                if (c.seed) params["seed"] = *c.seed;
                const nlohmann::json tr = adv::session_to_json(s);
                emit(session_table(s, params), c, &tr);
            }
        }
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const bosegrid::ResourceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const bosegrid::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s (achieved %.3g)\n", e.what(), e.achieved);
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
