#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pwschatten/io.hpp"

namespace pws {

struct ExperimentConfig {
    std::string experiment;
    double a = pi;
    std::vector<double> p_list;
    std::uint64_t seed = 1;
    int symbols_per_cell = 20;
    int atoms_per_symbol = 3;
    /// Relative stopping tolerance handed to the Besov engine.
    double besov_tolerance = 1e-2;
    /// Half-width (in lattice spacings) of the region atoms are drawn from.
    double atom_window = 8.0;
    /// Number of log-spaced Im λ values for the growth sweep.
    int sweep_points = 7;
    /// Rows/columns −N..N of the Hankel identity check.
    index_t hankel_window = 100;
    /// Repeat every cell once at a = 1.
    bool also_a1 = true;
    std::string out_dir = ".";
};

/// Fills an ExperimentConfig from JSON; missing keys keep their defaults,
/// except p_list which defaults per experiment. Tolerances must be positive.
ExperimentConfig config_from_json(const json& j, const std::string& experiment);

struct Band {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    int excluded = 0;

    void add(double v);
    double spread() const { return count > 0 && min > 0.0 ? max / min : 0.0; }
};

struct ExperimentReport {
    std::string experiment;
    /// Named bands, e.g. "p=0.5".
    std::vector<std::pair<std::string, Band>> bands;
    /// Human-readable descriptions of failed assertions.
    std::vector<std::string> failures;
    /// Extra scalar results (slopes, growth factors).
    json details = json::object();
    double runtime_seconds = 0.0;

    json summary() const;
};

/// Independent generator for (seed, experiment, cell): results do not depend
/// on evaluation order.
std::mt19937_64 cell_rng(std::uint64_t seed, const std::string& experiment, std::uint64_t cell);

/// ‖T_φ‖_{S^p} against ‖(−1)^k φ_st(πk/(2a))‖_{B_p(4a,osc)} for random atomic symbols.
ExperimentReport run_thm1_comparability(const ExperimentConfig& cfg);
/// Growth of ‖M_λ‖, boundedness of K and of the Besov norm, divergence of truncated C_{ψ_λ}.
ExperimentReport run_prop_p3_growth(const ExperimentConfig& cfg);
/// C̃_ψ and C_ψ against Besov norms, and the Hankel identity.
ExperimentReport run_thm2_suite(const ExperimentConfig& cfg);
/// ‖T_φ‖_{S^p} against ‖φ‖_{L^p} for φ with spectrum in [−a, a].
ExperimentReport run_lemma_l2_check(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment, writes <out>/<experiment>.csv and
/// <out>/<experiment>_summary.json.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::vector<std::string> experiment_names();

}  // namespace pws
