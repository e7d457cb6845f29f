#include "bosegrid/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "bosegrid/counterexample.hpp"
#include "bosegrid/errors.hpp"
#include "bosegrid/finiterep.hpp"
#include "bosegrid/hgfunc.hpp"
#include "bosegrid/measure.hpp"
#include "bosegrid/models.hpp"
#include "bosegrid/sampling.hpp"

namespace bosegrid::datasets {

namespace {

constexpr const char* kMagic = "# bosegrid v1 ";
constexpr const char* kSummary = "# summary ";

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_number(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw InvalidArgument("bad number in dataset: " + s);
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

// JSON has no NaN: store non-finite entries as strings.
nlohmann::json num_to_json(double x) {
    if (std::isfinite(x)) return x;
    return fmt(x);
}

double num_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_number(j.get<std::string>());
    return j.get<double>();
}

}  // namespace

std::string to_csv(const Dataset& d) {
    std::string out = kMagic + d.command + " " + d.params.dump() + "\n";
    if (!d.summary.empty()) out += kSummary + d.summary.dump() + "\n";
    for (size_t c = 0; c < d.columns.size(); ++c) out += (c ? "," : "") + d.columns[c];
    out += "\n";
    for (const auto& row : d.rows) {
        for (size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + fmt(row[c]);
        out += "\n";
    }
    return out;
}

nlohmann::json to_json(const Dataset& d) {
    nlohmann::json j;
    j["schema"] = "bosegrid v1";
    j["command"] = d.command;
    j["params"] = d.params;
    j["columns"] = d.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : d.rows) {
        nlohmann::json jr = nlohmann::json::array();
        for (double x : r) jr.push_back(num_to_json(x));
        rows.push_back(jr);
    }
    j["rows"] = rows;
    j["summary"] = d.summary;
    return j;
}

Dataset from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Dataset d;
    const std::string magic = kMagic;
    if (!std::getline(in, line) || line.rfind(magic, 0) != 0) throw InvalidArgument("missing dataset header");
    const std::string rest = line.substr(magic.size());
    const size_t sp = rest.find(' ');
    if (sp == std::string::npos) throw InvalidArgument("malformed dataset header");
    d.command = rest.substr(0, sp);
    try {
        d.params = nlohmann::json::parse(rest.substr(sp + 1));
        if (!std::getline(in, line)) throw InvalidArgument("missing column row");
        const std::string summary = kSummary;
        if (line.rfind(summary, 0) == 0) {
            d.summary = nlohmann::json::parse(line.substr(summary.size()));
            if (!std::getline(in, line)) throw InvalidArgument("missing column row");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed dataset JSON: ") + e.what());
    }
    d.columns = split(line, ',');
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& s : split(line, ',')) row.push_back(parse_number(s));
        if (row.size() != d.columns.size()) throw InvalidArgument("row width does not match the columns");
        d.rows.push_back(std::move(row));
    }
    return d;
}

Dataset from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema").get<std::string>() != "bosegrid v1") throw InvalidArgument("unknown schema");
        Dataset d;
        d.command = j.at("command").get<std::string>();
        d.params = j.at("params");
        d.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& jr : j.at("rows")) {
            std::vector<double> row;
            for (const auto& x : jr) row.push_back(num_from_json(x));
            if (row.size() != d.columns.size()) throw InvalidArgument("row width does not match the columns");
            d.rows.push_back(std::move(row));
        }
        d.summary = j.value("summary", nlohmann::json::object());
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed dataset JSON: ") + e.what());
    }
}

Dataset table1(const std::vector<int>& n_phis, double threshold) {
    Dataset d;
    d.command = "table1";
    d.params = {{"n_phi", n_phis}, {"threshold", threshold}};
    d.columns = {"n_phi", "delta_e_over_m0", "n_b", "n_top_10x"};
    // Linear grid-size relation n_phi ~ c1 + c2 N_b at eps_c < 1e-3, by least squares.
    constexpr double kFitEps = 1e-3;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n : n_phis) {
        const FiniteRep rep = build(n, 1.0);
        const Eigensystem eig = diagonalize(rep);
        d.rows.push_back({static_cast<double>(n), energy_range(rep, eig),
                          static_cast<double>(low_energy_cutoff(rep, eig, threshold)),
                          static_cast<double>(low_energy_cutoff(rep, eig, 10.0 * threshold) - 1)});
        const double x = low_energy_cutoff(rep, eig, kFitEps);
        sx += x;
        sy += n;
        sxx += x * x;
        sxy += x * n;
    }
    const double k = static_cast<double>(n_phis.size());
    if (n_phis.size() >= 2 && k * sxx - sx * sx > 0) {
        const double c2 = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        d.summary["grid_fit"] = {{"eps", kFitEps}, {"c1", (sy - c2 * sx) / k}, {"c2", c2}};
    }
    return d;
}

Dataset errors(const std::vector<int>& n_phis, double tail_frac) {
    Dataset d;
    d.command = "errors";
    d.params = {{"n_phi", n_phis}, {"mass", 1.0}, {"tail_frac", tail_frac}};
    d.columns = {"n_phi", "n", "eps_w", "eps_d", "eps_pi", "eps_phipi", "eps_c", "tail_quad", "tail_est"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int N : n_phis) {
        const FiniteRep rep = build(N, 1.0);
        const Eigensystem eig = diagonalize(rep);
        const int n_max = N - 3;
        const ErrorReport r = error_report(rep, eig, n_max);
        const double F = rep.grid.F();
        for (int n = 0; n <= n_max; ++n) {
            const auto i = static_cast<size_t>(n);
            const bool tails = n <= tail_frac * N;
            d.rows.push_back({static_cast<double>(N), static_cast<double>(n), r.eps_w[i], r.eps_d[i],
                              r.eps_pi[i], r.eps_phipi[i], r.eps_c[i],
                              tails ? tail_weight(n, 1.0, F) : nan,
                              tails ? tail_bound_grid(n, N) : nan});
        }
    }
    return d;
}

Dataset squeeze(const std::vector<double>& ratios, const std::vector<double>& eps_list) {
    Dataset d;
    d.command = "squeeze";
    d.params = {{"ratios", ratios}, {"eps", eps_list}};
    d.columns = {"ratio", "eps", "n_b"};
    for (double r : ratios)
        for (double e : eps_list) d.rows.push_back({r, e, static_cast<double>(models::squeezed_cutoff(r, e))});
    const models::SqueezedFit fit = models::fit_squeezed(ratios, eps_list);
    d.summary = {{"fit_a", fit.a}, {"fit_b", fit.b}, {"r2", fit.r2}};
    return d;
}

Dataset model_scan(const ModelScanConfig& cfg) {
    if (cfg.masses.empty() || cfg.eps_list.empty()) throw InvalidArgument("mass and eps grids must be non-empty");
    Dataset d;
    d.command = cfg.two_site ? "twosite" : "aho";
    d.params = {{"m0_sq", cfg.m0_sq}, {"g", cfg.g}, {"h", cfg.h}, {"masses", cfg.masses},
                {"eps", cfg.eps_list}, {"sample_eps", cfg.sample_eps}, {"sample_mass", cfg.sample_mass},
                {"n_cut", cfg.n_cut}, {"n_cut_max", cfg.n_cut_max}};
    models::ModelParams base;
    base.kind = cfg.two_site ? models::ModelKind::TwoSitePhi4 : models::ModelKind::LocalPhi4;
    base.m0_sq = cfg.m0_sq;
    base.g = cfg.g;
    base.h = cfg.h;
    base.n_cut = cfg.n_cut;
    base.n_cut_max = cfg.n_cut_max;
    const models::MassScan scan = models::cutoff_vs_mass(base, cfg.masses, cfg.eps_list);
    d.columns = {"mass", "eps", "n_b", "residual"};
    for (size_t i = 0; i < cfg.masses.size(); ++i)
        for (size_t e = 0; e < cfg.eps_list.size(); ++e)
            d.rows.push_back({cfg.masses[i], cfg.eps_list[e], static_cast<double>(scan.n_b[i][e]),
                              scan.residual[i][e]});
    nlohmann::json opt = nlohmann::json::array();
    for (size_t e = 0; e < cfg.eps_list.size(); ++e)
        opt.push_back({{"eps", cfg.eps_list[e]}, {"argmin_mass", scan.argmin(e)}, {"n_b", scan.min_cutoff(e)}});
    d.summary["optimum"] = opt;
    if (!cfg.sample_eps.empty()) {
        models::ModelParams p = base;
        p.boson_mass = cfg.sample_mass;
        const models::ModelSystem sys = models::build_model(p);
        const models::LocalDistributions ld = models::local_distributions(sys, 1);
        // Same widths as optimal_sampling_intervals(sys, ...), built once for the sweep.
        const double m = cfg.sample_mass;
        const double nn = 2.0 * sys.params.n_cut + 1.0;
        const double panel = 0.5 * std::numbers::pi / std::sqrt(nn);
        const models::TailProfile field(ld.p_phi, std::sqrt(nn / m), panel / std::sqrt(m));
        const models::TailProfile conj(ld.p_kappa, std::sqrt(nn * m), panel * std::sqrt(m));
        nlohmann::json s = nlohmann::json::array();
        for (double e : cfg.sample_eps) {
            const models::SamplingIntervals si = models::optimal_sampling_intervals(field, conj, e);
            s.push_back({{"eps", e}, {"F", si.F}, {"K", si.K}, {"K_over_F", si.ratio},
                         {"n_phi", si.n_phi}, {"flagged", si.flagged}});
        }
        d.summary["sampling"] = s;
        d.summary["energy"] = sys.energy;
        d.summary["energy_delta"] = sys.energy_delta;
        d.summary["n_cut"] = sys.params.n_cut;
    }
    return d;
}

Dataset counterexample(int n_max) {
    using namespace counterexample;
    Dataset d;
    d.command = "counterexample";
    d.params = {{"n_phi", 64}, {"mass", 1.0}, {"n_max", n_max}, {"sigma", 0.4}};
    const SincCombo f = build_f();
    const FunctionDescriptor fd = f.descriptor();
    const Smoothed g = build_g(f);
    const Distribution pf = boson_spectrum(fd, 1.0, n_max);
    const Distribution pg = boson_spectrum(g.desc, 1.0, n_max);
    const FiniteRep rep = build(64, 1.0);
    const Eigensystem eig = diagonalize(rep);
    const SpectrumPair sp = discrete_spectrum_mismatch(fd, rep, eig);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.columns = {"n", "p_f", "p_g", "p_f_discrete"};
    for (int n = 0; n <= n_max; ++n) {
        const auto i = static_cast<size_t>(n);
        d.rows.push_back({static_cast<double>(n), pf.probs[i], pg.probs[i],
                          i < sp.discrete.probs.size() ? sp.discrete.probs[i] : nan});
    }
    const TailWeights tf = fd.tails(f.grid.F(), f.grid.K());
    const FftErrorReport fft = fft_vs_continuous_error(fd, f.grid);
    const double F = f.grid.F();
    d.summary = {{"q", f.q_list},
                 {"c", f.c_list},
                 {"c_f", f.norm},
                 {"cancellation_residual", cancellation_residual(f)},
                 {"envelope_slope", envelope_slope(f, 3 * F, 30 * F)},
                 {"f_w_F", tf.w_F},
                 {"f_w_K", tf.w_K},
                 {"g_w_F", g.w_F},
                 {"g_w_K", g.w_K},
                 {"c_g", g.c_g},
                 {"f_high_weight_30", high_energy_weight(pf, 30)},
                 {"f_high_weight_40", high_energy_weight(pf, 40)},
                 {"g_high_weight_30", high_energy_weight(pg, 30)},
                 {"g_high_weight_40", high_energy_weight(pg, 40)},
                 {"fft_lhs", fft.lhs_field_to_kappa},
                 {"fft_rhs", fft.rhs}};
    return d;
}

Dataset qpe_demo(const QPEDemoConfig& cfg) {
    const FiniteRep rep = build(cfg.n_phi, cfg.mass);
    const Eigensystem eig = diagonalize(rep);
    const measure::QPEConfig q = measure::QPEConfig::make(rep, eig, cfg.n_r);
    const int n_b = cfg.n_b >= 0 ? cfg.n_b : low_energy_cutoff(rep, eig, cfg.eps);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(1, cfg.n_phi);
    if (cfg.state.rfind("eigen:", 0) == 0) {
        int n = -1;
        try {
            n = std::stoi(cfg.state.substr(6));
        } catch (const std::exception&) {
            throw InvalidArgument("bad state spec: " + cfg.state);
        }
        if (n < 0 || n >= cfg.n_phi) throw InvalidArgument("eigenstate index out of range");
        c(0, n) = 1.0;
    } else if (cfg.state == "random") {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> nd;
        for (int n = 0; n < cfg.n_phi; ++n) c(0, n) = measure::cplx(nd(rng), nd(rng));
        c /= c.norm();
    } else {
        throw InvalidArgument("state must be eigen:<n> or random");
    }
    const measure::AncillaDistribution a = measure::qpe_distribution(c, q, n_b);
    const double eps_h = measure::high_energy_weight(c, n_b);
    Dataset d;
    d.command = "qpe-demo";
    d.params = {{"n_phi", cfg.n_phi}, {"mass", cfg.mass}, {"n_r", cfg.n_r}, {"state", cfg.state},
                {"n_b", n_b}, {"eps", cfg.eps}, {"shots", cfg.shots}, {"seed", cfg.seed}};
    d.columns = {"k", "p"};
    std::vector<long> counts;
    if (cfg.shots > 0) {
        d.columns.push_back("count");
        counts = measure::sample_shots(a.probs, cfg.shots, cfg.seed);
    }
    for (size_t k = 0; k < a.probs.size(); ++k) {
        d.rows.push_back({static_cast<double>(k), a.probs[k]});
        if (cfg.shots > 0) d.rows.back().push_back(static_cast<double>(counts[k]));
    }
    const double upper = std::numbers::pi * std::numbers::pi / 4.0 * a.p_all;
    d.summary = {{"eps_H", eps_h}, {"p1max", a.p1max}, {"p_all", a.p_all}, {"upper", upper},
                 {"bounds_hold", a.p1max <= eps_h * (1 + 1e-12) + 1e-15 && eps_h <= upper * (1 + 1e-12) + 1e-15}};
    return d;
}

}  // namespace bosegrid::datasets
