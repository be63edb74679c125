#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "quadq/harness.hpp"
#include "quadq/io.hpp"
#include "quadq/rng.hpp"

namespace quadq {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_manifest(const std::string& dir, const std::string& command, const RunConfig& cfg,
                    const std::vector<std::string>& outputs, double wall_s) {
    json m;
    m["version"] = kVersion;
    m["command"] = command;
    m["seed"] = cfg.seed;
    m["config"] = config_to_json(cfg);
    m["kappa_rad_m_per_s"] = cfg.constants().kappa();
    m["outputs"] = outputs;
    m["wall_time_s"] = wall_s;
    write_text_file(dir + "/manifest.json", m.dump(2) + "\n");
}

std::string ensure_out_dir(const RunConfig& cfg) {
    if (cfg.out_dir.empty()) {
        throw ConfigError("this command writes files; --out <dir> is required");
    }
    fs::create_directories(cfg.out_dir);
    return cfg.out_dir;
}

json tau_map_to_json(const std::map<std::string, double>& taus) {
    json j = json::object();
    for (const auto& [p, tau] : taus) j[p] = tau;  // NaN serializes as null
    return j;
}

void write_trace(const std::string& path_base, const CoherenceTrace& mc,
                 const CoherenceTrace& analytic, const std::string& format) {
    CsvTable table({"t_s", "re", "im", "stderr", "analytic"});
    for (std::size_t i = 0; i < mc.times.size(); ++i) {
        table.add_row({mc.times[i], mc.values[i].real(), mc.values[i].imag(), mc.stderrs[i],
                       analytic.values[i].real()});
    }
    table.write(path_base, format);
}

void write_couplings_csv(const std::string& path_base, const TrapEnsemble& traps,
                         const std::vector<TrapCoupling>& couplings,
                         const std::string& format) {
    CsvTable table({"trap_index", "x_nm", "y_nm", "z_nm", "lambda_hz", "k_radps"});
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        const auto& site = traps.traps[i];
        table.add_row({static_cast<double>(i), site.position.x * 1e9, site.position.y * 1e9,
                       site.position.z * 1e9, site.rate, couplings[i].k});
    }
    table.write(path_base, format);
}

// Options shared by the sampling-based subcommands; presence-checked so the
// precedence is defaults < preset < --config < explicit flags.
struct CommonOpts {
    std::string preset;
    std::string config_file;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<int> threads;
    std::optional<std::string> format;
    std::optional<double> density;
    std::vector<double> densities;
    std::optional<int> trap_count;
    std::optional<double> rate;
    std::optional<double> side_nm, depth_nm;
    std::optional<double> eps_r, coupling_scale;

    CLI::Option* densities_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_density_list) {
    cmd->add_option("--preset", o.preset, "named preset (fig2..fig6)");
    cmd->add_option("--config", o.config_file, "JSON config file");
    cmd->add_option("--seed", o.seed, "RNG seed")->envname("QUADQ_SEED");
    cmd->add_option("--out", o.out_dir, "output directory")->envname("QUADQ_OUT");
    cmd->add_option("--threads", o.threads, "worker threads (0 = default)");
    cmd->add_option("--format", o.format, "output table format: csv or json");
    cmd->add_option("--trap-count", o.trap_count, "traps per distribution");
    cmd->add_option("--rate", o.rate, "trap switching rate, Hz");
    cmd->add_option("--side-nm", o.side_nm, "qubit side length, nm");
    cmd->add_option("--depth-nm", o.depth_nm, "dot depth below trap layer, nm");
    cmd->add_option("--eps-r", o.eps_r, "relative permittivity");
    cmd->add_option("--coupling-scale", o.coupling_scale, "multiplier on the Coulomb prefactor");
    if (with_density_list) {
        o.densities_opt =
            cmd->add_option("--densities", o.densities, "trap densities, m^-2");
    } else {
        cmd->add_option("--density", o.density, "trap density, m^-2");
    }
}

RunConfig build_config(const CommonOpts& o, const std::string& experiment) {
    RunConfig cfg;
    if (!o.preset.empty()) cfg = preset_config(o.preset);
    if (!o.config_file.empty()) {
        cfg = config_from_json(json::parse(read_text_file(o.config_file)));
    }
    cfg.experiment = experiment;
    if (o.seed) cfg.seed = *o.seed;
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.threads) cfg.threads = *o.threads;
    if (o.format) cfg.format = *o.format;
    if (o.density) cfg.densities = {*o.density};
    if (o.densities_opt != nullptr && o.densities_opt->count() > 0) cfg.densities = o.densities;
    if (o.trap_count) cfg.trap_count = *o.trap_count;
    if (o.rate) cfg.rate = *o.rate;
    if (o.side_nm) cfg.side_length = *o.side_nm * 1e-9;
    if (o.depth_nm) cfg.depth = *o.depth_nm * 1e-9;
    if (o.eps_r) cfg.relative_permittivity = *o.eps_r;
    if (o.coupling_scale) cfg.coupling_scale = *o.coupling_scale;
    return cfg;
}

void apply_threads(const RunConfig& cfg) {
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#else
    (void)cfg;
#endif
}

// Replace ideal geometries / sampled traps with user-provided files.
struct SceneOverrides {
    std::vector<std::string> geometry_files;
    std::string traps_file;

    void resolve(QubitGeometry& g2, QubitGeometry& g4, TrapEnsemble& traps) const {
        for (const auto& path : geometry_files) {
            QubitGeometry g = load_geometry(path);
            if (g.kind == GeometryKind::Dipole2QD) {
                g2 = g;
            } else {
                g4 = g;
            }
        }
        if (!traps_file.empty()) traps = load_traps(traps_file);
    }
};

int cmd_couplings(const CommonOpts& o, const SceneOverrides& ov) {
    Timer timer;
    RunConfig cfg = build_config(o, "couplings");
    cfg.validate();
    apply_threads(cfg);
    std::string dir = ensure_out_dir(cfg);
    PhysicalConstants consts = cfg.constants();

    QubitGeometry g2 = make_ideal_geometry(GeometryKind::Dipole2QD, cfg.side_length, cfg.depth);
    QubitGeometry g4 =
        make_ideal_geometry(GeometryKind::Quadrupole4QD, cfg.side_length, cfg.depth);
    QubitGeometry avoid = g4;
    avoid.dots.insert(avoid.dots.end(), g2.dots.begin(), g2.dots.end());
    TrapEnsemble traps = sample_traps_fixed(cfg.trap_count, cfg.densities.front(), cfg.rate,
                                            derive_seed(cfg.seed, 0x64697374ULL, 0), &avoid);
    ov.resolve(g2, g4, traps);

    auto c2 = ensemble_couplings(traps, g2, consts);
    auto c4 = ensemble_couplings(traps, g4, consts);
    double k2 = effective_coupling(c2).k_eff;
    double k4 = effective_coupling(c4).k_eff;

    write_couplings_csv(dir + "/couplings_2qd", traps, c2, cfg.format);
    write_couplings_csv(dir + "/couplings_4qd", traps, c4, cfg.format);
    json summary = {{"k_eff_2qd", k2},
                    {"k_eff_4qd", k4},
                    {"ratio", k4 > 0.0 ? k2 / k4 : std::numeric_limits<double>::quiet_NaN()}};
    write_text_file(dir + "/summary.json", summary.dump(2) + "\n");
    write_text_file(dir + "/geometry_2qd.json", geometry_to_json(g2).dump(2) + "\n");
    write_text_file(dir + "/geometry_4qd.json", geometry_to_json(g4).dump(2) + "\n");
    write_text_file(dir + "/traps.json", traps_to_json(traps).dump(2) + "\n");

    std::string ext = "." + cfg.format;
    write_manifest(dir, "couplings", cfg,
                   {"couplings_2qd" + ext, "couplings_4qd" + ext, "summary.json",
                    "geometry_2qd.json", "geometry_4qd.json", "traps.json"},
                   timer.seconds());
    return 0;
}

struct DecayOpts {
    std::optional<long> n_traj;
    std::optional<double> horizon_s;
    std::optional<int> points;
};

int cmd_decay(const CommonOpts& o, const DecayOpts& d, const SceneOverrides& ov) {
    Timer timer;
    RunConfig cfg = build_config(o, "decay");
    if (d.n_traj) cfg.n_trajectories = *d.n_traj;
    if (d.horizon_s) cfg.horizon = *d.horizon_s;
    if (d.points) cfg.n_time_points = *d.points;
    cfg.validate();
    apply_threads(cfg);
    std::string dir = ensure_out_dir(cfg);

    DecayComparison result;
    if (!ov.geometry_files.empty() || !ov.traps_file.empty()) {
        QubitGeometry g2 =
            make_ideal_geometry(GeometryKind::Dipole2QD, cfg.side_length, cfg.depth);
        QubitGeometry g4 =
            make_ideal_geometry(GeometryKind::Quadrupole4QD, cfg.side_length, cfg.depth);
        TrapEnsemble traps;
        if (ov.traps_file.empty()) {
            QubitGeometry avoid = g4;
            avoid.dots.insert(avoid.dots.end(), g2.dots.begin(), g2.dots.end());
            traps = sample_traps_fixed(cfg.trap_count, cfg.densities.front(), cfg.rate,
                                       derive_seed(cfg.seed, 0x64697374ULL, 0), &avoid);
        }
        ov.resolve(g2, g4, traps);
        result = run_decay_comparison(cfg, &g2, &g4, &traps);
    } else {
        result = run_decay_comparison(cfg);
    }

    write_trace(dir + "/decay_2qd", result.mc2, result.analytic2, cfg.format);
    write_trace(dir + "/decay_4qd", result.mc4, result.analytic4, cfg.format);
    json summary = {{"k_eff_2qd", result.keff2},
                    {"k_eff_4qd", result.keff4},
                    {"ratio", result.ratio},
                    {"horizon_s", result.horizon},
                    {"n_trajectories", cfg.n_trajectories},
                    {"tau_p_2qd", tau_map_to_json(result.tau_p2)},
                    {"tau_p_4qd", tau_map_to_json(result.tau_p4)}};
    write_text_file(dir + "/summary.json", summary.dump(2) + "\n");
    write_text_file(dir + "/geometry_2qd.json", geometry_to_json(result.geom2).dump(2) + "\n");
    write_text_file(dir + "/geometry_4qd.json", geometry_to_json(result.geom4).dump(2) + "\n");
    write_text_file(dir + "/traps.json", traps_to_json(result.traps).dump(2) + "\n");

    std::string ext = "." + cfg.format;
    write_manifest(dir, "decay", cfg,
                   {"decay_2qd" + ext, "decay_4qd" + ext, "summary.json", "geometry_2qd.json",
                    "geometry_4qd.json", "traps.json"},
                   timer.seconds());
    return 0;
}

int cmd_decaytimes(const CommonOpts& o, std::optional<int> n_dist, std::optional<double> p) {
    Timer timer;
    RunConfig cfg = build_config(o, "decaytimes");
    if (n_dist) cfg.n_distributions = *n_dist;
    if (p) cfg.p_threshold = *p;
    cfg.validate();
    apply_threads(cfg);
    std::string dir = ensure_out_dir(cfg);

    DecayTimeStudy study = run_decaytime_study(cfg);

    CsvTable table({"distribution", "keff2_radps", "keff4_radps", "tau2_s", "tau4_s",
                    "reached2", "reached4"});
    for (const auto& row : study.rows) {
        table.add_row({static_cast<double>(row.distribution), row.keff2, row.keff4, row.tau2,
                       row.tau4, row.reached2 ? 1.0 : 0.0, row.reached4 ? 1.0 : 0.0});
    }
    table.write(dir + "/decaytimes", cfg.format);
    json summary = {{"p", cfg.p_threshold},
                    {"loglog_slope", study.loglog_slope},
                    {"ratio_median_abs_dev", study.ratio_mad}};
    write_text_file(dir + "/summary.json", summary.dump(2) + "\n");
    write_manifest(dir, "decaytimes", cfg, {"decaytimes." + cfg.format, "summary.json"},
                   timer.seconds());
    return 0;
}

int cmd_sweep_density(const CommonOpts& o, std::optional<int> n_dist) {
    Timer timer;
    RunConfig cfg = build_config(o, "sweep-density");
    if (n_dist) cfg.n_distributions = *n_dist;
    cfg.validate();
    apply_threads(cfg);
    std::string dir = ensure_out_dir(cfg);

    SweepResult sweep = run_density_sweep(cfg);
    CsvTable table({"density_per_m2", "ratio_mean", "ratio_median", "ratio_p10", "ratio_p90",
                    "keff2_mean", "keff4_mean"});
    for (const auto& row : sweep.rows) {
        table.add_row({row.density, row.ratio_mean, row.ratio_median, row.ratio_p10,
                       row.ratio_p90, row.keff2_mean, row.keff4_mean});
    }
    table.write(dir + "/sweep", cfg.format);
    write_manifest(dir, "sweep-density", cfg, {"sweep." + cfg.format}, timer.seconds());
    return 0;
}

struct PerturbOpts {
    std::vector<double> sigmas;
    CLI::Option* sigmas_opt = nullptr;
    std::optional<int> n_dist, n_pert;
};

int cmd_perturb(const CommonOpts& o, const PerturbOpts& po) {
    Timer timer;
    RunConfig cfg = build_config(o, "perturb");
    if (po.sigmas_opt != nullptr && po.sigmas_opt->count() > 0) cfg.sigmas = po.sigmas;
    if (po.n_dist) cfg.n_distributions = *po.n_dist;
    if (po.n_pert) cfg.n_perturbations = *po.n_pert;
    cfg.validate();
    apply_threads(cfg);
    std::string dir = ensure_out_dir(cfg);

    PerturbationStudy study = run_perturbation_study(cfg);
    CsvTable table({"sigma", "density_per_m2", "ratio_median_of_means"});
    for (const auto& row : study.rows) {
        table.add_row({row.sigma, row.density, row.ratio_median_of_means});
    }
    table.write(dir + "/perturb", cfg.format);
    write_manifest(dir, "perturb", cfg, {"perturb." + cfg.format}, timer.seconds());
    return 0;
}

struct GateOpts {
    std::optional<int> n, m;
    std::optional<double> delta;
    std::optional<long> n_traj;
    std::optional<int> points;
    std::vector<double> targets;
    CLI::Option* targets_opt = nullptr;
};

json design_to_json(const GateDesign& d, double delta_radps) {
    return json{{"n", d.n},
                {"m", d.m},
                {"j", d.j},
                {"omega_per_delta", d.omega},
                {"t_f_per_delta", d.t_f},
                {"gamma", d.gamma},
                {"kind", d.kind == GateDesign::Kind::HalfPi ? "half_pi" : "not"},
                {"max_transient_population", d.max_transient_population},
                {"integrated_population_scale", d.integrated_population_scale},
                {"delta_radps", delta_radps},
                {"omega_radps", d.omega * delta_radps},
                {"t_f_s", d.t_f / delta_radps}};
}

int cmd_gate_design(const CommonOpts& o, const GateOpts& g) {
    Timer timer;
    RunConfig cfg = build_config(o, "gate-design");
    if (g.n) cfg.gate.n = *g.n;
    if (g.m) cfg.gate.m = *g.m;
    if (g.delta) cfg.gate.delta_radps = *g.delta;
    cfg.validate();

    GateDesign design = design_gate(cfg.gate.n, cfg.gate.m);
    json out = design_to_json(design, cfg.gate.delta_radps);
    std::string text = out.dump(2) + "\n";
    if (cfg.out_dir.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::string dir = ensure_out_dir(cfg);
        write_text_file(dir + "/design.json", text);
        write_manifest(dir, "gate design", cfg, {"design.json"}, timer.seconds());
    }
    return 0;
}

int cmd_gate_simulate(const CommonOpts& o, const GateOpts& g, const SceneOverrides& ov) {
    Timer timer;
    RunConfig cfg = build_config(o, "gate-simulate");
    if (g.n) cfg.gate.n = *g.n;
    if (g.m) cfg.gate.m = *g.m;
    if (g.delta) cfg.gate.delta_radps = *g.delta;
    if (g.n_traj) cfg.gate.n_traj_per_state = *g.n_traj;
    int points = g.points.value_or(401);
    cfg.validate();
    apply_threads(cfg);
    std::string dir = ensure_out_dir(cfg);
    PhysicalConstants consts = cfg.constants();

    GateDesign design = design_gate(cfg.gate.n, cfg.gate.m);

    // Fig. 5 analogue: populations from |0> over one gate time, noiseless.
    Eigen::Vector4cd initial = Eigen::Vector4cd::Zero();
    initial(0) = 1.0;
    PopulationTrace pops = population_trace(design, initial, points);
    CsvTable table({"time", "p0", "p1", "pe0", "pe1"});
    for (std::size_t i = 0; i < pops.times.size(); ++i) {
        table.add_row({pops.times[i], pops.populations[i][0], pops.populations[i][1],
                       pops.populations[i][2], pops.populations[i][3]});
    }
    table.write(dir + "/populations", cfg.format);

    QubitGeometry g4 =
        make_ideal_geometry(GeometryKind::Quadrupole4QD, cfg.side_length, cfg.depth);
    TrapEnsemble traps;
    if (ov.traps_file.empty()) {
        traps = sample_traps_fixed(cfg.trap_count, cfg.densities.front(), cfg.rate,
                                   derive_seed(cfg.seed, 0x64697374ULL, 0), &g4);
    } else {
        traps = load_traps(ov.traps_file);
    }
    auto c4 = ensemble_couplings(traps, g4, consts);
    std::vector<std::array<double, 4>> shifts;
    shifts.reserve(c4.size());
    for (const auto& tc : c4) shifts.push_back(basis_state_shifts(tc, g4));

    FidelityResult fid = average_fidelity(design, cfg.gate.delta_radps, shifts, traps.rates(),
                                          cfg.gate.n_traj_per_state,
                                          derive_seed(cfg.seed, 0x67666964ULL));
    json fj = {{"fidelity", fid.fidelity},
               {"error", fid.error},
               {"n_traj_per_state", fid.n_traj_per_state},
               {"per_state", fid.per_state},
               {"per_state_stderr", fid.per_state_stderr},
               {"design", design_to_json(design, cfg.gate.delta_radps)}};
    write_text_file(dir + "/fidelity.json", fj.dump(2) + "\n");
    write_text_file(dir + "/traps.json", traps_to_json(traps).dump(2) + "\n");

    write_manifest(dir, "gate simulate", cfg,
                   {"populations." + cfg.format, "fidelity.json", "traps.json"},
                   timer.seconds());
    return 0;
}

int cmd_gate_sweep(const CommonOpts& o, const GateOpts& g) {
    Timer timer;
    RunConfig cfg = build_config(o, "gate-sweep");
    if (g.n) cfg.gate.n = *g.n;
    if (g.m) cfg.gate.m = *g.m;
    if (g.delta) cfg.gate.delta_radps = *g.delta;
    if (g.n_traj) cfg.gate.n_traj_per_state = *g.n_traj;
    if (g.targets_opt != nullptr && g.targets_opt->count() > 0) {
        cfg.gate.keff2_targets = g.targets;
    }
    cfg.validate();
    apply_threads(cfg);
    std::string dir = ensure_out_dir(cfg);

    GateErrorStudy study = run_gate_error_study(cfg);
    CsvTable table(
        {"keff_radps", "err_2qd", "err_4qd", "ratio", "stderr_2qd", "stderr_4qd"});
    json ci = json::array();
    for (const auto& row : study.rows) {
        table.add_row({row.keff, row.err_2qd, row.err_4qd, row.ratio, row.stderr_2qd,
                       row.stderr_4qd});
        ci.push_back({{"keff_radps", row.keff},
                      {"ratio_ci90_lo", row.ratio_ci_lo},
                      {"ratio_ci90_hi", row.ratio_ci_hi}});
    }
    table.write(dir + "/gate_sweep", cfg.format);
    json summary = {{"gate", design_to_json(design_gate(cfg.gate.n, cfg.gate.m),
                                            cfg.gate.delta_radps)},
                    {"ratio_ci", ci}};
    write_text_file(dir + "/summary.json", summary.dump(2) + "\n");
    write_manifest(dir, "gate-sweep", cfg, {"gate_sweep." + cfg.format, "summary.json"},
                   timer.seconds());
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"quadrupole charge-qubit noise and gate simulator"};
    app.require_subcommand(1);

    CommonOpts co_couplings, co_decay, co_decaytimes, co_sweep, co_perturb;
    CommonOpts co_gate_design, co_gate_sim, co_gate_sweep;
    SceneOverrides ov_couplings, ov_decay, ov_gate_sim;
    DecayOpts decay_opts;
    PerturbOpts perturb_opts;
    GateOpts gate_design_opts, gate_sim_opts, gate_sweep_opts;
    std::optional<int> dt_ndist, sweep_ndist;
    std::optional<double> dt_p;

    auto* couplings = app.add_subcommand("couplings", "per-trap couplings and k_eff summary");
    add_common(couplings, co_couplings, false);
    couplings->add_option("--geometry-file", ov_couplings.geometry_files,
                          "geometry JSON (repeatable; replaces the matching ideal layout)");
    couplings->add_option("--traps-file", ov_couplings.traps_file, "trap ensemble JSON");

    auto* decay = app.add_subcommand("decay", "MC + analytic coherence decay comparison");
    add_common(decay, co_decay, false);
    decay->add_option("--n-traj", decay_opts.n_traj, "MC trajectories");
    decay->add_option("--horizon-s", decay_opts.horizon_s, "time horizon, s (0 = auto)");
    decay->add_option("--points", decay_opts.points, "time grid points");
    decay->add_option("--geometry-file", ov_decay.geometry_files,
                      "geometry JSON (repeatable)");
    decay->add_option("--traps-file", ov_decay.traps_file, "trap ensemble JSON");

    auto* decaytimes =
        app.add_subcommand("decaytimes", "tau_p vs k_eff scatter over distributions");
    add_common(decaytimes, co_decaytimes, false);
    decaytimes->add_option("--n-distributions", dt_ndist, "trap distributions");
    decaytimes->add_option("--p", dt_p, "coherence threshold");

    auto* sweep = app.add_subcommand("sweep-density", "decoupling ratio vs trap density");
    add_common(sweep, co_sweep, true);
    sweep->add_option("--n-distributions", sweep_ndist, "distributions per density");

    auto* perturb = app.add_subcommand("perturb", "decoupling ratio vs placement error");
    add_common(perturb, co_perturb, true);
    perturb_opts.sigmas_opt =
        perturb->add_option("--sigmas", perturb_opts.sigmas, "placement sigmas");
    perturb->add_option("--n-distributions", perturb_opts.n_dist, "fluctuator distributions");
    perturb->add_option("--n-perturbations", perturb_opts.n_pert, "perturbations each");

    auto* gate = app.add_subcommand("gate", "single-qubit gate design and simulation");
    gate->require_subcommand(1);
    auto* gate_design = gate->add_subcommand("design", "rational-eigenvalue gate design");
    add_common(gate_design, co_gate_design, false);
    gate_design->add_option("--n", gate_design_opts.n, "design integer n (even)");
    gate_design->add_option("--m", gate_design_opts.m, "design integer m");
    gate_design->add_option("--delta", gate_design_opts.delta, "delta, rad/s");

    auto* gate_sim = gate->add_subcommand("simulate", "populations + noisy fidelity");
    add_common(gate_sim, co_gate_sim, false);
    gate_sim->add_option("--n", gate_sim_opts.n, "design integer n (even)");
    gate_sim->add_option("--m", gate_sim_opts.m, "design integer m");
    gate_sim->add_option("--delta", gate_sim_opts.delta, "delta, rad/s");
    gate_sim->add_option("--n-traj", gate_sim_opts.n_traj, "trajectories per initial state");
    gate_sim->add_option("--points", gate_sim_opts.points, "population trace points");
    gate_sim->add_option("--traps-file", ov_gate_sim.traps_file, "trap ensemble JSON");

    auto* gate_sweep =
        app.add_subcommand("gate-sweep", "gate error ratio vs noise coupling");
    add_common(gate_sweep, co_gate_sweep, false);
    gate_sweep->add_option("--n", gate_sweep_opts.n, "design integer n (even)");
    gate_sweep->add_option("--m", gate_sweep_opts.m, "design integer m");
    gate_sweep->add_option("--delta", gate_sweep_opts.delta, "delta, rad/s");
    gate_sweep->add_option("--n-traj", gate_sweep_opts.n_traj,
                           "trajectories per initial state");
    gate_sweep_opts.targets_opt = gate_sweep->add_option(
        "--targets", gate_sweep_opts.targets, "swept 2QD k_eff targets, rad/s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage/flag errors are config errors
    }

    try {
        if (couplings->parsed()) return cmd_couplings(co_couplings, ov_couplings);
        if (decay->parsed()) return cmd_decay(co_decay, decay_opts, ov_decay);
        if (decaytimes->parsed()) return cmd_decaytimes(co_decaytimes, dt_ndist, dt_p);
        if (sweep->parsed()) return cmd_sweep_density(co_sweep, sweep_ndist);
        if (perturb->parsed()) return cmd_perturb(co_perturb, perturb_opts);
        if (gate->parsed()) {
            if (gate_design->parsed()) return cmd_gate_design(co_gate_design, gate_design_opts);
            if (gate_sim->parsed()) return cmd_gate_simulate(co_gate_sim, gate_sim_opts,
                                                             ov_gate_sim);
        }
        if (gate_sweep->parsed()) return cmd_gate_sweep(co_gate_sweep, gate_sweep_opts);
        std::fputs("no subcommand selected\n", stderr);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace quadq
