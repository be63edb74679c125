// Timing comparison of the OpenMP kernels against their serial references.
// Run manually: quadq-bench [n_traj] [n_traps]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "quadq/coherence.hpp"
#include "quadq/gates.hpp"
#include "quadq/rng.hpp"

using namespace quadq;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <class F>
double time_call(F&& f) {
    double t0 = now_seconds();
    f();
    return now_seconds() - t0;
}

} // namespace

int main(int argc, char** argv) {
    long n_traj = argc > 1 ? std::atol(argv[1]) : 2000;
    int n_traps = argc > 2 ? std::atoi(argv[2]) : 100;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("threads=%d  n_traj=%ld  n_traps=%d\n", threads, n_traj, n_traps);

    FluctuatorList fl;
    auto engine = make_engine(42);
    std::uniform_real_distribution<double> u(0.5e9, 5e9);
    for (int j = 0; j < n_traps; ++j) fl.emplace_back(u(engine), 2e8);

    auto times = default_time_grid(5e-9, 400);

    CoherenceTrace serial, parallel;
    double ts = time_call([&] { serial = mc_dephasing_serial(fl, times, n_traj, 7); });
    double tp = time_call([&] { parallel = mc_dephasing(fl, times, n_traj, 7); });

    double max_dev = 0.0;
    for (std::size_t i = 0; i < serial.values.size(); ++i) {
        max_dev = std::max(max_dev, std::abs(serial.values[i] - parallel.values[i]));
    }
    std::printf("mc_dephasing      serial %.3fs  openmp %.3fs  speedup %.2fx  max|dev| %.2e\n",
                ts, tp, ts / tp, max_dev);

    GateDesign design = design_gate(62, 61);
    double delta = 3.84e12;
    std::vector<std::array<double, 4>> shifts(static_cast<std::size_t>(n_traps));
    std::vector<double> rates(static_cast<std::size_t>(n_traps), 2e8);
    for (auto& s : shifts) {
        for (auto& v : s) v = u(engine) * 1e-3;
    }

    FidelityResult fs, fp;
    long n_gate_traj = std::max<long>(10, n_traj / 40);
    double gs = time_call(
        [&] { fs = average_fidelity_serial(design, delta, shifts, rates, n_gate_traj, 7); });
    double gp =
        time_call([&] { fp = average_fidelity(design, delta, shifts, rates, n_gate_traj, 7); });
    std::printf("average_fidelity  serial %.3fs  openmp %.3fs  speedup %.2fx  |dF| %.2e\n",
                gs, gp, gs / gp, std::abs(fs.fidelity - fp.fidelity));
    return 0;
}
