#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadq/coherence.hpp"
#include "quadq/constants.hpp"
#include "quadq/gates.hpp"
#include "quadq/geometry.hpp"

namespace quadq {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GateConfig {
    int n = 62;
    int m = 61;
    double delta_radps = 3.84e12;
    long n_traj_per_state = 50;
    // Sweep points: target 2QD effective couplings (rad/s); the shared trap
    // ensemble is rescaled so that k_eff^(2) hits each target.
    std::vector<double> keff2_targets = {5e8, 1.5e9, 4.5e9, 1.35e10, 2.7e10};
};

struct RunConfig {
    std::string experiment;

    double side_length = 20e-9;
    double depth = 20e-9;

    std::vector<double> densities = {1e12, 1e13, 1e14, 1e15, 1e16};  // m^-2
    int trap_count = 100;       // fixed-count sampling mode
    double rate = 2e8;          // Hz
    int n_distributions = 50;
    long n_trajectories = 200;

    std::vector<double> sigmas = {0.0, 0.05, 0.1, 0.2, 0.3};
    int n_perturbations = 100;

    GateConfig gate;

    double relative_permittivity = 11.7;
    double coupling_scale = 1.0;
    double p_threshold = 0.99;
    double horizon = 0.0;  // seconds; 0 selects 2/k_eff^(4) per run
    int n_time_points = 400;

    std::uint64_t seed = 1;
    std::string out_dir;
    int threads = 0;  // 0 = library default
    std::string format = "csv";

    void validate() const;  // throws ConfigError
    PhysicalConstants constants() const;
};

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig preset_config(const std::string& name);  // fig2..fig6 presets

// ---- experiment results ----

struct DecayComparison {
    QubitGeometry geom2, geom4;
    TrapEnsemble traps;
    double keff2 = 0.0, keff4 = 0.0, ratio = 0.0;
    double horizon = 0.0;
    CoherenceTrace mc2, mc4, analytic2, analytic4;
    std::map<std::string, double> tau_p2, tau_p4;  // threshold -> seconds
};

struct DecayTimeRow {
    int distribution = 0;
    double keff2 = 0.0, keff4 = 0.0;
    double tau2 = 0.0, tau4 = 0.0;
    bool reached2 = false, reached4 = false;
};

struct DecayTimeStudy {
    std::vector<DecayTimeRow> rows;
    double loglog_slope = 0.0;        // tau vs k_eff over both encodings
    double ratio_mad = 0.0;           // median |tau ratio / keff ratio - 1|
};

struct SweepRow {
    double density = 0.0;
    double ratio_mean = 0.0, ratio_median = 0.0, ratio_p10 = 0.0, ratio_p90 = 0.0;
    double keff2_mean = 0.0, keff4_mean = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct PerturbationRow {
    double sigma = 0.0;
    double density = 0.0;
    double ratio_median_of_means = 0.0;
};

struct PerturbationStudy {
    std::vector<PerturbationRow> rows;
};

struct GateErrorRow {
    double keff = 0.0;  // scaled 2QD effective coupling, rad/s
    double err_2qd = 0.0, err_4qd = 0.0, ratio = 0.0;
    double stderr_2qd = 0.0, stderr_4qd = 0.0;
    double ratio_ci_lo = 0.0, ratio_ci_hi = 0.0;  // bootstrap 90% CI
};

struct GateErrorStudy {
    std::vector<GateErrorRow> rows;
};

DecayComparison run_decay_comparison(const RunConfig& cfg);
// File-based variant: any non-null input replaces the config-derived one.
DecayComparison run_decay_comparison(const RunConfig& cfg, const QubitGeometry* g2,
                                     const QubitGeometry* g4, const TrapEnsemble* traps);
DecayTimeStudy run_decaytime_study(const RunConfig& cfg);
SweepResult run_density_sweep(const RunConfig& cfg);
PerturbationStudy run_perturbation_study(const RunConfig& cfg);
GateErrorStudy run_gate_error_study(const RunConfig& cfg);

// Entry point behind the quadq binary; exits 0 on success, 2 on config or
// usage errors, 1 on runtime failures.
int cli_main(int argc, const char* const* argv);

} // namespace quadq
