#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "quadq/constants.hpp"
#include "quadq/electrostatics.hpp"
#include "quadq/geometry.hpp"

namespace quadq {

// Normalized off-diagonal density-matrix element rho01(t)/rho01(0).
// Analytic traces are real-valued (zero imaginary part) with
// n_trajectories == 0 and no stderr entries.
struct CoherenceTrace {
    std::vector<double> times;
    std::vector<std::complex<double>> values;
    std::vector<double> stderrs;
    long n_trajectories = 0;

    bool analytic() const { return n_trajectories == 0; }
};

struct DecayTime {
    enum class Method { AnalyticCrossing, McCrossing, Formula };
    double p = 0.0;
    double tau = 0.0;
    Method method = Method::Formula;
    bool reached = false;
};

// (k_j, lambda_j) pairs in rad/s and Hz.
using FluctuatorList = std::vector<std::pair<double, double>>;

// Hybrid grid: t = 0, a log-spaced onset from horizon*1e-4 up to
// horizon/10, then a linear tail to the horizon. Resolves both the
// parabolic onset and the oscillatory tail.
std::vector<double> default_time_grid(double horizon, int n = 400);

// Single-fluctuator coherence factor e^{-lambda t}[cos wt + (lambda/w) sin wt]
// with w = sqrt(k^2 - lambda^2); hyperbolic continuation for k < lambda and
// the e^{-lambda t}(1 + lambda t) limit at k = lambda.
double analytic_single_value(double k, double lambda, double t);
CoherenceTrace analytic_single(double k, double lambda, const std::vector<double>& times);

// Many-fluctuator product form: e^{-t sum(lambda_j)} * prod_j bracket_j.
double analytic_many_value(const FluctuatorList& fluctuators, double t);
CoherenceTrace analytic_many(const FluctuatorList& fluctuators, const std::vector<double>& times);

// Parabolic short-time law 1 - t^2 k_eff^2 / 2.
CoherenceTrace short_time(double k_eff, const std::vector<double>& times);

// Monte Carlo dephasing: per trajectory accumulate the relative phase
// phi(t) = sum_j k_j * int_0^t xi_j, average e^{-i phi} over trajectories.
// Trajectories are independent work items; the reduction order is fixed
// (chunked), so results are identical for any thread count and bit-identical
// to the serial reference.
CoherenceTrace mc_dephasing(const FluctuatorList& fluctuators,
                            const std::vector<double>& times, long n_traj,
                            std::uint64_t seed);

// Serial reference implementation, same reduction order as the parallel kernel.
CoherenceTrace mc_dephasing_serial(const FluctuatorList& fluctuators,
                                   const std::vector<double>& times, long n_traj,
                                   std::uint64_t seed);

// Convenience wrapper: couplings from a trap ensemble against a geometry.
CoherenceTrace mc_dephasing(const QubitGeometry& geom, const TrapEnsemble& traps,
                            const PhysicalConstants& c, const std::vector<double>& times,
                            long n_traj, std::uint64_t seed);

FluctuatorList to_fluctuators(const std::vector<TrapCoupling>& couplings,
                              const std::vector<double>& rates);

// First crossing of |value| below p by linear interpolation between samples.
DecayTime decay_time(const CoherenceTrace& trace, double p);

// Closed-form parabolic estimate sqrt(2(1-p))/k_eff.
DecayTime decay_time_formula(double k_eff, double p);

// Crossing of the analytic many-fluctuator trace located by bisection on the
// closed-form function (grid-free).
DecayTime decay_time_analytic(const FluctuatorList& fluctuators, double p, double horizon);

} // namespace quadq
