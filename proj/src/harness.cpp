#include "quadq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "quadq/rng.hpp"
#include "quadq/stats.hpp"

namespace quadq {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDistStream = 0x64697374ULL;
constexpr std::uint64_t kPerturbStream = 0x70657274ULL;
constexpr std::uint64_t kMc2 = 0x6d6332ULL;
constexpr std::uint64_t kMc4 = 0x6d6334ULL;
constexpr std::uint64_t kGateEnsemble = 0x67656e73ULL;
constexpr std::uint64_t kGatePoint = 0x67707431ULL;
constexpr std::uint64_t kBootstrap = 0x62747374ULL;

// Both encodings share one trap distribution; standoff is enforced against
// the union of their dots.
QubitGeometry combined_avoid(const QubitGeometry& a, const QubitGeometry& b) {
    QubitGeometry u = a;
    u.dots.insert(u.dots.end(), b.dots.begin(), b.dots.end());
    return u;
}

struct Scene {
    QubitGeometry geom2, geom4;
    TrapEnsemble traps;
};

Scene make_scene(const RunConfig& cfg, double density, std::uint64_t trap_seed) {
    Scene s;
    s.geom2 = make_ideal_geometry(GeometryKind::Dipole2QD, cfg.side_length, cfg.depth);
    s.geom4 = make_ideal_geometry(GeometryKind::Quadrupole4QD, cfg.side_length, cfg.depth);
    QubitGeometry avoid = combined_avoid(s.geom2, s.geom4);
    s.traps = sample_traps_fixed(cfg.trap_count, density, cfg.rate, trap_seed, &avoid);
    return s;
}

double ratio_or_inf(double num, double den) {
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

} // namespace

void RunConfig::validate() const {
    if (side_length <= 0 || depth <= 0) throw ConfigError("geometry dimensions must be positive");
    if (densities.empty()) throw ConfigError("density list must not be empty");
    for (double d : densities) {
        if (d <= 0) throw ConfigError("densities must be positive");
    }
    if (trap_count < 0) throw ConfigError("trap count must be >= 0");
    if (rate <= 0) throw ConfigError("switching rate must be positive");
    if (n_distributions < 1) throw ConfigError("n_distributions must be >= 1");
    if (n_trajectories < 1) throw ConfigError("n_trajectories must be >= 1");
    if (n_perturbations < 1) throw ConfigError("n_perturbations must be >= 1");
    for (double s : sigmas) {
        if (s < 0) throw ConfigError("sigmas must be >= 0");
    }
    if (p_threshold <= 0 || p_threshold >= 1) throw ConfigError("p_threshold must be in (0,1)");
    if (horizon < 0) throw ConfigError("horizon must be >= 0");
    if (n_time_points < 16) throw ConfigError("n_time_points must be >= 16");
    if (relative_permittivity <= 0 || coupling_scale <= 0) {
        throw ConfigError("permittivity and coupling scale must be positive");
    }
    if (gate.n < 2 || gate.m < 1) throw ConfigError("gate (n, m) invalid");
    if (gate.delta_radps <= 0) throw ConfigError("gate delta must be positive");
    if (gate.n_traj_per_state < 1) throw ConfigError("gate n_traj_per_state must be >= 1");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (threads < 0) throw ConfigError("threads must be >= 0");
}

PhysicalConstants RunConfig::constants() const {
    PhysicalConstants c;
    c.relative_permittivity = relative_permittivity;
    c.coupling_scale = coupling_scale;
    c.validate();
    return c;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["side_length_nm"] = cfg.side_length * 1e9;
    j["depth_nm"] = cfg.depth * 1e9;
    j["densities_per_m2"] = cfg.densities;
    j["trap_count"] = cfg.trap_count;
    j["rate_hz"] = cfg.rate;
    j["n_distributions"] = cfg.n_distributions;
    j["n_trajectories"] = cfg.n_trajectories;
    j["sigmas"] = cfg.sigmas;
    j["n_perturbations"] = cfg.n_perturbations;
    j["gate"] = {{"n", cfg.gate.n},
                 {"m", cfg.gate.m},
                 {"delta_radps", cfg.gate.delta_radps},
                 {"n_traj_per_state", cfg.gate.n_traj_per_state},
                 {"keff2_targets_radps", cfg.gate.keff2_targets}};
    j["relative_permittivity"] = cfg.relative_permittivity;
    j["coupling_scale"] = cfg.coupling_scale;
    j["p_threshold"] = cfg.p_threshold;
    j["horizon_s"] = cfg.horizon;
    j["n_time_points"] = cfg.n_time_points;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    j["threads"] = cfg.threads;
    j["format"] = cfg.format;
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    cfg.experiment = j.value("experiment", cfg.experiment);
    cfg.side_length = j.value("side_length_nm", cfg.side_length * 1e9) * 1e-9;
    cfg.depth = j.value("depth_nm", cfg.depth * 1e9) * 1e-9;
    cfg.densities = j.value("densities_per_m2", cfg.densities);
    cfg.trap_count = j.value("trap_count", cfg.trap_count);
    cfg.rate = j.value("rate_hz", cfg.rate);
    cfg.n_distributions = j.value("n_distributions", cfg.n_distributions);
    cfg.n_trajectories = j.value("n_trajectories", cfg.n_trajectories);
    cfg.sigmas = j.value("sigmas", cfg.sigmas);
    cfg.n_perturbations = j.value("n_perturbations", cfg.n_perturbations);
    if (j.contains("gate")) {
        const auto& g = j.at("gate");
        cfg.gate.n = g.value("n", cfg.gate.n);
        cfg.gate.m = g.value("m", cfg.gate.m);
        cfg.gate.delta_radps = g.value("delta_radps", cfg.gate.delta_radps);
        cfg.gate.n_traj_per_state = g.value("n_traj_per_state", cfg.gate.n_traj_per_state);
        cfg.gate.keff2_targets = g.value("keff2_targets_radps", cfg.gate.keff2_targets);
    }
    cfg.relative_permittivity = j.value("relative_permittivity", cfg.relative_permittivity);
    cfg.coupling_scale = j.value("coupling_scale", cfg.coupling_scale);
    cfg.p_threshold = j.value("p_threshold", cfg.p_threshold);
    cfg.horizon = j.value("horizon_s", cfg.horizon);
    cfg.n_time_points = j.value("n_time_points", cfg.n_time_points);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.format = j.value("format", cfg.format);
    return cfg;
}

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    if (name == "fig2") {
        cfg.experiment = "decay";
        cfg.densities = {1e15};
        cfg.trap_count = 100;
        cfg.n_trajectories = 200;
    } else if (name == "fig3") {
        cfg.experiment = "decaytimes";
        cfg.densities = {1e15};
        cfg.n_distributions = 50;
    } else if (name == "fig4") {
        cfg.experiment = "sweep-density";
        cfg.densities = {1e12, 1e13, 1e14, 1e15, 1e16};
        cfg.n_distributions = 50;
    } else if (name == "fig5") {
        cfg.experiment = "perturb";
        cfg.densities = {1e13, 1e14, 1e15};
        cfg.sigmas = {0.0, 0.05, 0.1, 0.2, 0.3};
        cfg.n_distributions = 100;
        cfg.n_perturbations = 100;
    } else if (name == "fig6") {
        cfg.experiment = "gate-sweep";
        cfg.densities = {1e15};
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return cfg;
}

DecayComparison run_decay_comparison(const RunConfig& cfg, const QubitGeometry* g2,
                                     const QubitGeometry* g4, const TrapEnsemble* traps) {
    cfg.validate();
    PhysicalConstants consts = cfg.constants();

    DecayComparison out;
    if (g2 != nullptr && g4 != nullptr && traps != nullptr) {
        out.geom2 = *g2;
        out.geom4 = *g4;
        out.traps = *traps;
    } else {
        Scene s = make_scene(cfg, cfg.densities.front(), derive_seed(cfg.seed, kDistStream, 0));
        out.geom2 = g2 ? *g2 : s.geom2;
        out.geom4 = g4 ? *g4 : s.geom4;
        out.traps = traps ? *traps : s.traps;
    }

    auto c2 = ensemble_couplings(out.traps, out.geom2, consts);
    auto c4 = ensemble_couplings(out.traps, out.geom4, consts);
    out.keff2 = effective_coupling(c2).k_eff;
    out.keff4 = effective_coupling(c4).k_eff;
    out.ratio = ratio_or_inf(out.keff2, out.keff4);

    double horizon = cfg.horizon;
    if (horizon <= 0.0) {
        double ref = out.keff4 > 0.0 ? out.keff4 : out.keff2;
        if (ref <= 0.0) throw ConfigError("decay: no coupling and no explicit horizon");
        horizon = 2.0 / ref;
    }
    out.horizon = horizon;

    auto times = default_time_grid(horizon, cfg.n_time_points);
    auto fl2 = to_fluctuators(c2, out.traps.rates());
    auto fl4 = to_fluctuators(c4, out.traps.rates());
    out.analytic2 = analytic_many(fl2, times);
    out.analytic4 = analytic_many(fl4, times);
    out.mc2 = mc_dephasing(fl2, times, cfg.n_trajectories, derive_seed(cfg.seed, kMc2));
    out.mc4 = mc_dephasing(fl4, times, cfg.n_trajectories, derive_seed(cfg.seed, kMc4));

    for (double p : {0.9, 0.99, cfg.p_threshold}) {
        double span2 = out.keff2 > 0 ? 100.0 * std::sqrt(2.0 * (1.0 - p)) / out.keff2 : horizon;
        double span4 = out.keff4 > 0 ? 100.0 * std::sqrt(2.0 * (1.0 - p)) / out.keff4 : horizon;
        auto t2 = decay_time_analytic(fl2, p, span2);
        auto t4 = decay_time_analytic(fl4, p, span4);
        out.tau_p2[std::to_string(p)] =
            t2.reached ? t2.tau : std::numeric_limits<double>::quiet_NaN();
        out.tau_p4[std::to_string(p)] =
            t4.reached ? t4.tau : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

DecayComparison run_decay_comparison(const RunConfig& cfg) {
    return run_decay_comparison(cfg, nullptr, nullptr, nullptr);
}

DecayTimeStudy run_decaytime_study(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.n_distributions < 20) {
        throw ConfigError("decaytimes: need at least 20 distributions");
    }
    PhysicalConstants consts = cfg.constants();
    const double p = cfg.p_threshold;

    DecayTimeStudy out;
    out.rows.resize(static_cast<std::size_t>(cfg.n_distributions));

#pragma omp parallel for schedule(static)
    for (int d = 0; d < cfg.n_distributions; ++d) {
        Scene s = make_scene(cfg, cfg.densities.front(),
                             derive_seed(cfg.seed, kDistStream, static_cast<std::uint64_t>(d)));
        auto c2 = ensemble_couplings(s.traps, s.geom2, consts);
        auto c4 = ensemble_couplings(s.traps, s.geom4, consts);
        DecayTimeRow row;
        row.distribution = d;
        row.keff2 = effective_coupling(c2).k_eff;
        row.keff4 = effective_coupling(c4).k_eff;
        auto crossing = [&](const std::vector<TrapCoupling>& c, double keff, double& tau,
                            bool& reached) {
            if (keff <= 0.0) {
                tau = std::numeric_limits<double>::infinity();
                reached = false;
                return;
            }
            double span = 100.0 * std::sqrt(2.0 * (1.0 - p)) / keff;
            auto dt = decay_time_analytic(to_fluctuators(c, s.traps.rates()), p, span);
            tau = dt.tau;
            reached = dt.reached;
        };
        crossing(c2, row.keff2, row.tau2, row.reached2);
        crossing(c4, row.keff4, row.tau4, row.reached4);
        out.rows[static_cast<std::size_t>(d)] = row;
    }

    std::vector<double> log_k, log_tau, ratio_dev;
    for (const auto& row : out.rows) {
        if (row.reached2) {
            log_k.push_back(std::log(row.keff2));
            log_tau.push_back(std::log(row.tau2));
        }
        if (row.reached4) {
            log_k.push_back(std::log(row.keff4));
            log_tau.push_back(std::log(row.tau4));
        }
        if (row.reached2 && row.reached4 && row.keff4 > 0.0) {
            double tau_ratio = row.tau4 / row.tau2;
            double k_ratio = row.keff2 / row.keff4;
            ratio_dev.push_back(std::abs(tau_ratio / k_ratio - 1.0));
        }
    }
    out.loglog_slope = log_k.size() >= 2 ? linear_fit(log_k, log_tau).slope : 0.0;
    out.ratio_mad = ratio_dev.empty() ? 0.0 : median(ratio_dev);
    return out;
}

SweepResult run_density_sweep(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.densities.size() < 2) throw ConfigError("sweep-density: need at least 2 densities");
    PhysicalConstants consts = cfg.constants();

    SweepResult out;
    for (std::size_t di = 0; di < cfg.densities.size(); ++di) {
        double density = cfg.densities[di];
        std::vector<double> ratios(static_cast<std::size_t>(cfg.n_distributions));
        std::vector<double> k2s(ratios.size()), k4s(ratios.size());

#pragma omp parallel for schedule(static)
        for (int d = 0; d < cfg.n_distributions; ++d) {
            Scene s = make_scene(cfg, density,
                                 derive_seed(cfg.seed, kDistStream, di,
                                             static_cast<std::uint64_t>(d)));
            double k2 = effective_coupling(ensemble_couplings(s.traps, s.geom2, consts)).k_eff;
            double k4 = effective_coupling(ensemble_couplings(s.traps, s.geom4, consts)).k_eff;
            ratios[static_cast<std::size_t>(d)] = ratio_or_inf(k2, k4);
            k2s[static_cast<std::size_t>(d)] = k2;
            k4s[static_cast<std::size_t>(d)] = k4;
        }

        SweepRow row;
        row.density = density;
        row.ratio_mean = mean(ratios);
        row.ratio_median = median(ratios);
        row.ratio_p10 = percentile(ratios, 0.10);
        row.ratio_p90 = percentile(ratios, 0.90);
        row.keff2_mean = mean(k2s);
        row.keff4_mean = mean(k4s);
        out.rows.push_back(row);
    }
    return out;
}

PerturbationStudy run_perturbation_study(const RunConfig& cfg) {
    cfg.validate();
    if (std::find(cfg.sigmas.begin(), cfg.sigmas.end(), 0.0) == cfg.sigmas.end()) {
        throw ConfigError("perturb: sigma list must include 0");
    }
    PhysicalConstants consts = cfg.constants();

    PerturbationStudy out;
    for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
        double sigma = cfg.sigmas[si];
        for (std::size_t di = 0; di < cfg.densities.size(); ++di) {
            double density = cfg.densities[di];
            std::vector<double> means(static_cast<std::size_t>(cfg.n_distributions));

#pragma omp parallel for schedule(static)
            for (int d = 0; d < cfg.n_distributions; ++d) {
                Scene s = make_scene(cfg, density,
                                     derive_seed(cfg.seed, kDistStream, di,
                                                 static_cast<std::uint64_t>(d)));
                double sum = 0.0;
                for (int pidx = 0; pidx < cfg.n_perturbations; ++pidx) {
                    std::uint64_t ps = derive_seed(cfg.seed, kPerturbStream, di,
                                                   static_cast<std::uint64_t>(d),
                                                   static_cast<std::uint64_t>(pidx));
                    QubitGeometry p2 = perturb_geometry(s.geom2, sigma, derive_seed(ps, 2));
                    QubitGeometry p4 = perturb_geometry(s.geom4, sigma, derive_seed(ps, 4));
                    double k2 = effective_coupling(ensemble_couplings(s.traps, p2, consts)).k_eff;
                    double k4 = effective_coupling(ensemble_couplings(s.traps, p4, consts)).k_eff;
                    sum += ratio_or_inf(k2, k4);
                }
                means[static_cast<std::size_t>(d)] = sum / cfg.n_perturbations;
            }

            PerturbationRow row;
            row.sigma = sigma;
            row.density = density;
            row.ratio_median_of_means = median(means);
            out.rows.push_back(row);
        }
    }
    return out;
}

namespace {

// Bootstrap the error ratio E2/E4 by resampling per-state fidelity samples.
std::pair<double, double> bootstrap_ratio_ci(const FidelityResult& f2,
                                             const FidelityResult& f4, long n_traj,
                                             std::uint64_t seed) {
    constexpr int kReps = 1000;
    auto engine = make_engine(seed, kBootstrap);
    std::uniform_int_distribution<long> pick(0, n_traj - 1);
    std::vector<double> ratios;
    ratios.reserve(kReps);
    for (int rep = 0; rep < kReps; ++rep) {
        double mean2 = 0.0, mean4 = 0.0;
        for (int s = 0; s < 6; ++s) {
            double sum2 = 0.0, sum4 = 0.0;
            for (long i = 0; i < n_traj; ++i) {
                sum2 += f2.samples[static_cast<std::size_t>(s) * n_traj + pick(engine)];
                sum4 += f4.samples[static_cast<std::size_t>(s) * n_traj + pick(engine)];
            }
            mean2 += sum2 / static_cast<double>(n_traj);
            mean4 += sum4 / static_cast<double>(n_traj);
        }
        double e2 = 1.0 - mean2 / 6.0;
        double e4 = 1.0 - mean4 / 6.0;
        ratios.push_back(e4 > 0.0 ? e2 / e4 : std::numeric_limits<double>::infinity());
    }
    return {percentile(ratios, 0.05), percentile(ratios, 0.95)};
}

} // namespace

GateErrorStudy run_gate_error_study(const RunConfig& cfg) {
    cfg.validate();
    PhysicalConstants consts = cfg.constants();
    if (cfg.gate.keff2_targets.empty()) throw ConfigError("gate-sweep: no coupling targets");

    Scene s = make_scene(cfg, cfg.densities.front(), derive_seed(cfg.seed, kGateEnsemble));
    auto c2 = ensemble_couplings(s.traps, s.geom2, consts);
    auto c4 = ensemble_couplings(s.traps, s.geom4, consts);
    double keff2_base = effective_coupling(c2).k_eff;
    if (keff2_base <= 0.0) throw ConfigError("gate-sweep: base ensemble has zero coupling");

    GateDesign design = design_gate(cfg.gate.n, cfg.gate.m);
    double t_f_s = design.t_f / cfg.gate.delta_radps;
    auto rates = s.traps.rates();

    std::vector<double> base_ks;
    base_ks.reserve(c2.size());
    for (const auto& tc : c2) base_ks.push_back(tc.k);
    std::vector<std::array<double, 4>> base_shifts;
    base_shifts.reserve(c4.size());
    for (const auto& tc : c4) base_shifts.push_back(basis_state_shifts(tc, s.geom4));

    GateErrorStudy out;
    for (std::size_t pi = 0; pi < cfg.gate.keff2_targets.size(); ++pi) {
        double target = cfg.gate.keff2_targets[pi];
        if (target <= 0.0) throw ConfigError("gate-sweep: targets must be positive");
        double scale = target / keff2_base;

        std::vector<double> ks = base_ks;
        for (auto& k : ks) k *= scale;
        std::vector<std::array<double, 4>> shifts = base_shifts;
        for (auto& sh : shifts) {
            for (auto& v : sh) v *= scale;
        }

        FidelityResult f2 = average_fidelity_2qd(t_f_s, ks, rates, cfg.gate.n_traj_per_state,
                                                 derive_seed(cfg.seed, kGatePoint, pi, 2));
        FidelityResult f4 = average_fidelity(design, cfg.gate.delta_radps, shifts, rates,
                                             cfg.gate.n_traj_per_state,
                                             derive_seed(cfg.seed, kGatePoint, pi, 4));

        GateErrorRow row;
        row.keff = target;
        row.err_2qd = f2.error;
        row.err_4qd = f4.error;
        row.ratio = f4.error > 0.0 ? f2.error / f4.error
                                   : std::numeric_limits<double>::quiet_NaN();
        double se2 = 0.0, se4 = 0.0;
        for (int st = 0; st < 6; ++st) {
            se2 += f2.per_state_stderr[static_cast<std::size_t>(st)] *
                   f2.per_state_stderr[static_cast<std::size_t>(st)];
            se4 += f4.per_state_stderr[static_cast<std::size_t>(st)] *
                   f4.per_state_stderr[static_cast<std::size_t>(st)];
        }
        row.stderr_2qd = std::sqrt(se2) / 6.0;
        row.stderr_4qd = std::sqrt(se4) / 6.0;
        auto ci = bootstrap_ratio_ci(f2, f4, cfg.gate.n_traj_per_state,
                                     derive_seed(cfg.seed, kGatePoint, pi));
        row.ratio_ci_lo = ci.first;
        row.ratio_ci_hi = ci.second;
        out.rows.push_back(row);
    }
    return out;
}

} // namespace quadq
