// Acceptance suite: one line per criterion, nonzero exit when any fail.
// argv[1] must point at the quadq CLI binary (used by A11).

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "quadq/coherence.hpp"
#include "quadq/electrostatics.hpp"
#include "quadq/gates.hpp"
#include "quadq/geometry.hpp"
#include "quadq/harness.hpp"
#include "quadq/io.hpp"
#include "quadq/rng.hpp"
#include "quadq/stats.hpp"

using namespace quadq;
using std::numbers::pi;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Runner {
    int failures = 0;

    void run(const char* id, const std::function<std::pair<bool, std::string>()>& body) {
        auto t0 = std::chrono::steady_clock::now();
        bool pass = false;
        std::string detail;
        try {
            auto r = body();
            pass = r.first;
            detail = r.second;
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        std::printf("[%s] %s  %s  (%.1f s)\n", id, pass ? "PASS" : "FAIL", detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// max deviation in units of the per-point standard error
double max_sigma_dev(const CoherenceTrace& mc, const CoherenceTrace& ref) {
    double worst = 0.0;
    for (std::size_t i = 0; i < mc.values.size(); ++i) {
        double dev = std::abs(mc.values[i] - ref.values[i]);
        if (dev == 0.0) continue;
        double se = mc.stderrs[i];
        worst = std::max(worst, se > 0.0 ? dev / se : 1e9);
    }
    return worst;
}

FluctuatorList random_ensemble(int n_traps, double k_scale, double rate,
                               std::uint64_t seed) {
    auto engine = make_engine(seed, 0xacceULL);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::uniform_int_distribution<int> sign(0, 1);
    FluctuatorList fl;
    for (int i = 0; i < n_traps; ++i) {
        fl.emplace_back((sign(engine) ? 1.0 : -1.0) * u(engine) * k_scale, rate);
    }
    return fl;
}

double keff_of(const FluctuatorList& fl) {
    double s = 0.0;
    for (auto& [k, l] : fl) s += k * k;
    return std::sqrt(s);
}

std::pair<bool, std::string> a1_single_trap_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    auto times = default_time_grid(20e-9, 200);
    auto mc = mc_dephasing({{1e9, 2e8}}, times, 10000, 20250811);
    auto ref = analytic_single(1e9, 2e8, times);
    double worst = max_sigma_dev(mc, ref);
    double secs = elapsed_since(t0);
    bool pass = worst <= 3.0 && secs < 10.0;
    return {pass, "max dev " + fmt(worst) + " sigma (<= 3), runtime " + fmt(secs) +
                      " s (< 10)"};
}

std::pair<bool, std::string> a2_many_trap_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = preset_config("fig2");
    cfg.seed = 20250812;
    auto result = run_decay_comparison(cfg);
    double worst =
        std::max(max_sigma_dev(result.mc2, result.analytic2),
                 max_sigma_dev(result.mc4, result.analytic4));
    double secs = elapsed_since(t0);
    bool pass = worst <= 3.0 && secs < 60.0;
    return {pass, "100 traps, 200 trajectories: max dev " + fmt(worst) +
                      " sigma (<= 3), k_eff ratio " + fmt(result.ratio) + ", runtime " +
                      fmt(secs) + " s (< 60)"};
}

std::pair<bool, std::string> a3_short_time_law() {
    double worst_rel = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto fl = random_ensemble(20, 4e9, 2e8, seed);
        double keff = keff_of(fl);
        for (double frac : {0.02, 0.05, 0.08, 0.1}) {
            double t = frac / keff;
            double full = analytic_many_value(fl, t);
            double parabola = 1.0 - t * t * keff * keff / 2.0;
            worst_rel = std::max(worst_rel, std::abs(full - parabola) / std::abs(full));
        }
    }
    double worst_lambda = 0.0;
    for (std::uint64_t seed = 50; seed < 60; ++seed) {
        auto slow = random_ensemble(20, 8e9, 2e8, seed);
        auto fast = slow;
        for (auto& [k, l] : fast) l *= 10.0;
        double t = 0.02 / keff_of(slow);
        double a = analytic_many_value(slow, t);
        double b = analytic_many_value(fast, t);
        worst_lambda = std::max(worst_lambda, std::abs(a - b) / std::abs(a));
    }
    bool pass = worst_rel < 0.01 && worst_lambda < 1e-3;
    return {pass, "parabola dev " + fmt(worst_rel) + " (< 0.01), lambda x10 dev " +
                      fmt(worst_lambda) + " (< 1e-3)"};
}

std::pair<bool, std::string> a4_tau_ratio_identity() {
    RunConfig cfg = preset_config("fig3");
    cfg.n_distributions = 50;
    cfg.densities = {1e13};
    cfg.seed = 20250814;
    auto study = run_decaytime_study(cfg);
    int unreached = 0;
    for (const auto& row : study.rows) {
        if (!row.reached2 || !row.reached4) ++unreached;
    }
    bool pass = study.ratio_mad < 0.02 && unreached == 0;
    return {pass, "tau/k_eff diagonal MAD " + fmt(study.ratio_mad) + " (< 0.02), " +
                      std::to_string(unreached) + " unreached, slope " +
                      fmt(study.loglog_slope)};
}

std::pair<bool, std::string> a5_scaling_laws() {
    auto t0 = std::chrono::steady_clock::now();
    PhysicalConstants c;
    double side = 20e-9;
    auto distances = logspace(10 * side, 100 * side, 12);
    auto g2 = make_ideal_geometry(GeometryKind::Dipole2QD, side, side);
    auto g4 = make_ideal_geometry(GeometryKind::Quadrupole4QD, side, side);
    double s2 = scaling_exponent(g2, {1, 0, 0}, distances, c);
    double s4 = scaling_exponent(g4, {std::cos(0.5), std::sin(0.5), 0}, distances, c);
    double secs = elapsed_since(t0);
    bool pass = std::abs(s2 + 2.0) < 0.05 && std::abs(s4 + 3.0) < 0.05 && secs < 1.0;
    return {pass, "2QD slope " + fmt(s2) + " (-2 +- 0.05), 4QD slope " + fmt(s4) +
                      " (-3 +- 0.05), runtime " + fmt(secs) + " s (< 1)"};
}

std::pair<bool, std::string> a6_uniform_field_dfs() {
    PhysicalConstants c;
    auto g4 = make_ideal_geometry(GeometryKind::Quadrupole4QD, 20e-9, 20e-9);
    auto g2 = make_ideal_geometry(GeometryKind::Dipole2QD, 20e-9, 20e-9);
    auto engine = make_engine(20250816);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    double worst4 = 0.0;
    for (int i = 0; i < 100; ++i) {
        Vec3 field{u(engine), u(engine), u(engine)};
        auto r = uniform_field_energies(g4, field, c);
        double scale = std::max(std::abs(r.common_mode), 1.0);
        worst4 = std::max(worst4, std::abs(r.splitting) / scale);
    }
    double e_mag = 5.4e4;
    auto r2 = uniform_field_energies(g2, {e_mag, 0, 0}, c);
    double expected = c.electron_charge * e_mag * 20e-9 / c.hbar;
    double dev2 = std::abs(std::abs(r2.splitting) - expected) / expected;
    bool pass = worst4 <= 1e-15 && dev2 <= 1e-12;
    return {pass, "4QD worst relative splitting " + fmt(worst4) +
                      " (<= 1e-15), 2QD qEd/hbar dev " + fmt(dev2) + " (<= 1e-12)"};
}

std::pair<bool, std::string> a7_gate_correctness() {
    const std::vector<std::pair<int, int>> set = {{2, 1}, {4, 1}, {4, 3},
                                                  {6, 5}, {20, 19}, {62, 61}};
    double worst_gate = 0.0, worst_eig = 0.0, worst_leak = 0.0;
    for (auto [n, m] : set) {
        auto d = design_gate(n, m);
        HubbardModel model{1.0, d.omega};
        auto u = propagate_noiseless(model, d.t_f);

        Eigen::Matrix2cd block, ideal = ideal_logical_gate(d);
        block << u(0, 0), u(0, 1), u(1, 0), u(1, 1);
        worst_gate = std::max(
            worst_gate, 1.0 - std::abs((ideal.adjoint() * block).trace()) / 2.0);
        worst_leak = std::max(worst_leak, std::norm(u(2, 0)) + std::norm(u(3, 0)) +
                                              std::norm(u(2, 1)) + std::norm(u(3, 1)));

        auto d_not = d;
        d_not.kind = GateDesign::Kind::Not;
        auto u2 = propagate_noiseless(model, 2 * d.t_f);
        Eigen::Matrix2cd block2, ideal_not = ideal_logical_gate(d_not);
        block2 << u2(0, 0), u2(0, 1), u2(1, 0), u2(1, 1);
        worst_gate = std::max(
            worst_gate, 1.0 - std::abs((ideal_not.adjoint() * block2).trace()) / 2.0);

        double s = std::sqrt(1.0 + 16.0 * d.omega * d.omega);
        auto sys = eigensystem(model);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(hamiltonian(model));
        std::array<double, 4> expected = {0.0, 1.0, (1 + s) / 2, (1 - s) / 2};
        std::array<double, 4> sorted = expected;
        std::sort(sorted.begin(), sorted.end());
        for (int k = 0; k < 4; ++k) {
            worst_eig = std::max(worst_eig,
                                 std::abs(sys.energies[static_cast<std::size_t>(k)] -
                                          expected[static_cast<std::size_t>(k)]));
            worst_eig = std::max(worst_eig, std::abs(es.eigenvalues()(k) -
                                                     sorted[static_cast<std::size_t>(k)]));
        }
    }
    bool pass = worst_gate < 1e-9 && worst_leak < 1e-9 && worst_eig < 1e-12;
    return {pass, "worst gate error " + fmt(worst_gate) + " (< 1e-9), leakage " +
                      fmt(worst_leak) + " (< 1e-9), eigenvalue dev " + fmt(worst_eig) +
                      " (< 1e-12)"};
}

std::pair<bool, std::string> a8_transient_population() {
    const std::vector<std::pair<int, int>> set = {{2, 1}, {4, 1}, {4, 3},
                                                  {6, 5}, {20, 19}, {62, 61}};
    double worst_rel = 0.0;
    double value_62 = 0.0;
    for (auto [n, m] : set) {
        auto d = design_gate(n, m);
        HubbardModel model{1.0, d.omega};
        Eigen::Vector4cd init = Eigen::Vector4cd::Zero();
        init(0) = init(1) = 1.0 / std::sqrt(2.0);
        double peak = 0.0;
        const int steps = 20000;
        for (int i = 0; i <= steps; ++i) {
            double t = d.t_f * i / steps;
            Eigen::Vector4cd psi = propagate_noiseless(model, t) * init;
            peak = std::max(peak, std::norm(psi(2)) + std::norm(psi(3)));
        }
        worst_rel = std::max(
            worst_rel, std::abs(peak - d.max_transient_population) /
                           d.max_transient_population);
        if (n == 62) value_62 = peak;
    }
    bool pass = worst_rel < 0.05 && std::abs(value_62 - 0.032) < 0.001;
    return {pass, "worst relative dev " + fmt(worst_rel) + " (< 0.05), (62,61) peak " +
                      fmt(value_62) + " (~ 0.032)"};
}

std::pair<bool, std::string> a9_gate_advantage() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = preset_config("fig6");
    cfg.seed = 20250819;
    auto study = run_gate_error_study(cfg);
    bool all_above = true;
    double min_ratio = 1e300, min_ci = 1e300;
    for (const auto& row : study.rows) {
        if (!(row.ratio > 1.0) || !(row.ratio_ci_lo > 1.0)) all_above = false;
        min_ratio = std::min(min_ratio, row.ratio);
        min_ci = std::min(min_ci, row.ratio_ci_lo);
    }
    double secs = elapsed_since(t0);
    bool pass = all_above && secs < 300.0;
    return {pass, std::to_string(study.rows.size()) + " couplings: min E2/E4 " +
                      fmt(min_ratio) + ", min CI90 low " + fmt(min_ci) +
                      " (> 1), runtime " + fmt(secs) + " s (< 300)"};
}

std::pair<bool, std::string> a10_density_and_perturbation_trends() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig sweep_cfg = preset_config("fig4");
    sweep_cfg.n_distributions = 50;
    sweep_cfg.seed = 20250820;
    auto sweep = run_density_sweep(sweep_cfg);
    bool strictly_decreasing = true;
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        if (!(sweep.rows[i].ratio_median < sweep.rows[i - 1].ratio_median)) {
            strictly_decreasing = false;
        }
    }

    RunConfig pert_cfg = preset_config("fig5");
    pert_cfg.sigmas = {0.0, 0.1};
    pert_cfg.n_distributions = 50;
    pert_cfg.n_perturbations = 50;
    pert_cfg.seed = 20250821;
    auto pert = run_perturbation_study(pert_cfg);
    bool sigma01_effective = true;
    double min_ratio = 1e300;
    for (const auto& row : pert.rows) {
        if (row.sigma == 0.1) {
            min_ratio = std::min(min_ratio, row.ratio_median_of_means);
            if (!(row.ratio_median_of_means > 1.0)) sigma01_effective = false;
        }
    }
    double secs = elapsed_since(t0);
    bool pass = strictly_decreasing && sigma01_effective && secs < 600.0;
    return {pass, std::string("median ratio ") +
                      (strictly_decreasing ? "strictly decreasing" : "NOT monotone") +
                      " over 5 densities; sigma=0.1 min ratio " + fmt(min_ratio) +
                      " (> 1); runtime " + fmt(secs) + " s (< 600)"};
}

int run_cmd(const std::string& cmd) {
    return std::system((cmd + " > /dev/null 2>&1").c_str());
}

std::pair<bool, std::string> a11_cli_determinism(const std::string& cli) {
    if (cli.empty()) return {false, "CLI binary path not supplied"};
    fs::path base = fs::temp_directory_path() / "quadq_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    auto dir = [&](const char* name) { return (base / name).string(); };

    std::string common = " decay --preset fig2 --seed 7 --trap-count 15 --n-traj 60"
                         " --points 60";
    const std::vector<std::string> files = {"decay_2qd.csv", "decay_4qd.csv",
                                            "summary.json",  "geometry_2qd.json",
                                            "geometry_4qd.json", "traps.json"};

    // rerun into the same directory with the same flags
    if (run_cmd(cli + common + " --threads 1 --out " + dir("a")) != 0) {
        return {false, "decay run failed"};
    }
    std::map<std::string, std::string> first;
    for (const auto& f : files) first[f] = read_text_file(dir("a") + "/" + f);
    json manifest_first = json::parse(read_text_file(dir("a") + "/manifest.json"));
    if (run_cmd(cli + common + " --threads 1 --out " + dir("a")) != 0) {
        return {false, "decay rerun failed"};
    }
    for (const auto& f : files) {
        if (first[f] != read_text_file(dir("a") + "/" + f)) {
            return {false, f + " differs under rerun"};
        }
    }
    json manifest_second = json::parse(read_text_file(dir("a") + "/manifest.json"));
    manifest_first.erase("wall_time_s");
    manifest_second.erase("wall_time_s");
    if (manifest_first.dump() != manifest_second.dump()) {
        return {false, "manifest differs under rerun beyond wall time"};
    }

    // any thread count must produce the same data bytes
    if (run_cmd(cli + common + " --threads 3 --out " + dir("c")) != 0) {
        return {false, "decay threaded run failed"};
    }
    for (const auto& f : files) {
        if (first[f] != read_text_file(dir("c") + "/" + f)) {
            return {false, f + " differs under thread-count change"};
        }
    }
    json mc = json::parse(read_text_file(dir("c") + "/manifest.json"));
    mc.erase("wall_time_s");
    mc["config"].erase("threads");
    mc["config"].erase("out_dir");
    manifest_second["config"].erase("threads");
    manifest_second["config"].erase("out_dir");
    if (manifest_second.dump() != mc.dump()) {
        return {false, "manifest differs beyond wall time / thread count"};
    }

    if (run_cmd(cli + " gate design --n 62 --m 61 --out " + dir("g1")) != 0 ||
        run_cmd(cli + " gate design --n 62 --m 61 --out " + dir("g2")) != 0) {
        return {false, "gate design run failed"};
    }
    if (read_text_file(dir("g1") + "/design.json") !=
        read_text_file(dir("g2") + "/design.json")) {
        return {false, "design.json differs under rerun"};
    }
    fs::remove_all(base);
    return {true, "data outputs byte-identical across rerun and threads 1 vs 3"};
}

} // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    Runner r;
    r.run("A1", a1_single_trap_oracle);
    r.run("A2", a2_many_trap_oracle);
    r.run("A3", a3_short_time_law);
    r.run("A4", a4_tau_ratio_identity);
    r.run("A5", a5_scaling_laws);
    r.run("A6", a6_uniform_field_dfs);
    r.run("A7", a7_gate_correctness);
    r.run("A8", a8_transient_population);
    r.run("A9", a9_gate_advantage);
    r.run("A10", a10_density_and_perturbation_trends);
    r.run("A11", [&] { return a11_cli_determinism(cli); });
    if (r.failures > 0) {
        std::printf("%d criterion(s) failed\n", r.failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
