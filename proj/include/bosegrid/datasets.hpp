#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace bosegrid::datasets {

// One table plus scalar results. CSV layout:
//   # bosegrid v1 <command> <param-json>
//   # summary <summary-json>            (only when the summary is non-empty)
//   col1,col2,...
//   rows with %.17g numbers
struct Dataset {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json summary = nlohmann::json::object();
};

std::string to_csv(const Dataset& d);
nlohmann::json to_json(const Dataset& d);
Dataset from_csv(const std::string& text);
Dataset from_json(const nlohmann::json& j);

// N_phi, Delta E / m0, N_b at eps_c < threshold, and the largest n with
// eps_c(n') < 10 threshold for every n' <= n.
Dataset table1(const std::vector<int>& n_phis, double threshold);

// Per-n error taxonomy at m0 = 1, with the quadrature tail ||w_F|| and the grid
// estimate next to it. Tails are evaluated for n <= tail_frac N_phi only (NaN above).
Dataset errors(const std::vector<int>& n_phis, double tail_frac = 0.3);

// N_b of the squeezed vacuum over a ratio x eps grid; summary holds the fit.
Dataset squeeze(const std::vector<double>& ratios, const std::vector<double>& eps_list);

struct ModelScanConfig {
    bool two_site = false;
    double m0_sq = 1.0;
    double g = 100.0;
    double h = 0.0;
    std::vector<double> masses;
    std::vector<double> eps_list;     // for the N_b(m) scan
    std::vector<double> sample_eps;   // for the optimal F, K sweep
    double sample_mass = 1.0;         // basis mass used for the F, K sweep
    int n_cut = 64;
    int n_cut_max = 1024;
};

// N_b(m, eps) scan plus the optimal-sampling sweep in the summary.
Dataset model_scan(const ModelScanConfig& cfg);

// p(n) of f, g and the discrete p~(n) of f, with the scalar checks in the summary.
Dataset counterexample(int n_max);

struct QPEDemoConfig {
    int n_phi = 64;
    double mass = 1.0;
    int n_r = 7;
    std::string state = "eigen:0";  // eigen:<n> | random
    int n_b = -1;                   // < 0: low_energy_cutoff(eps)
    double eps = 1e-4;
    long shots = 0;
    std::uint64_t seed = 1;
};

// Ancilla histogram, plus eps_H, p1max, p_all and the bound check.
Dataset qpe_demo(const QPEDemoConfig& cfg);

}  // namespace bosegrid::datasets
