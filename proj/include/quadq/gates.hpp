#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "quadq/constants.hpp"
#include "quadq/telegraph.hpp"

namespace quadq {

// Two-electron four-site model restricted to vertical tunneling, in the
// fixed basis (|0>, |1>, |eps0>, |eps1>). delta is the energy of the
// non-diagonal states, omega the tunneling rate; both as angular frequencies
// (use delta = 1 for work in units of delta).
struct HubbardModel {
    double delta = 1.0;
    double omega = 0.0;
};

// Closed-form eigensystem, energies in units of delta:
// E1 = 0, E2 = 1, E3 = (1+S)/2, E4 = (1-S)/2 with S = sqrt(1+16 w^2).
struct EigenSystem {
    std::array<double, 4> energies{};
    Eigen::Matrix4cd vectors;  // orthonormal columns psi1..psi4
    bool degenerate = false;   // omega == 0: E3 = E2 and E4 = E1
};

// sigma_x^{pi/2} gate design from the rational-eigenvalue condition
// 4 Omega = sqrt((n/m)^2 - 1), n even, n > m >= 1, gcd(n, m) = 1.
// Dimensionless: omega in units of delta, t_f in units of 1/delta.
struct GateDesign {
    enum class Kind { HalfPi, Not };

    int n = 0;
    int m = 0;
    int j = 0;          // smallest positive j with j*m = n/2 (mod n)
    double omega = 0.0;
    double t_f = 0.0;   // 2 j m pi / n; the NOT gate runs to 2 t_f
    double gamma = 0.0; // rotation-axis angle pi (n - m)/2 at t_f = pi m
    Kind kind = Kind::HalfPi;

    // (n^2 - m^2)/n^2: peak non-DFS population for an equatorial initial state.
    double max_transient_population = 0.0;
    // m (n^2 - m^2)/n^2: scaling of the time-integrated non-DFS population.
    double integrated_population_scale = 0.0;
};

struct PhaseGatePulse {
    struct Segment {
        double bias_v = 0.0;      // V0 - V1, Volts
        double duration_s = 0.0;
    };
    std::vector<Segment> segments;

    double total_integral() const;  // V s
};

struct FidelityResult {
    double fidelity = 0.0;
    double error = 0.0;  // 1 - fidelity
    std::array<double, 6> per_state{};
    std::array<double, 6> per_state_stderr{};
    long n_traj_per_state = 0;
    // Per-(state, trajectory) fidelities in state-major order, for bootstrap.
    std::vector<double> samples;
};

// phi = (2e/hbar) int (V0 - V1) dt, optionally reduced to [0, 2 pi).
double phase_angle(const PhaseGatePulse& pulse, const PhysicalConstants& c,
                   bool reduce_mod_2pi = false);

// H0 + Htunnel in units of delta (real symmetric 4x4).
Eigen::Matrix4d hamiltonian(const HubbardModel& model);

EigenSystem eigensystem(const HubbardModel& model);

GateDesign design_gate(int n, int m);

// exp(-i H t) via the closed-form eigensystem; t in units of 1/delta when
// the model has delta = 1 (matching GateDesign).
Eigen::Matrix4cd propagate_noiseless(const HubbardModel& model, double t);

// Ordered product of segment propagators exp(-i (H + D(xi)) dt) where D adds
// the per-basis-state trap shifts scaled by the segment signs. Physical
// units throughout: model in rad/s, records and t_f in seconds.
Eigen::Matrix4cd propagate_noisy(const HubbardModel& model,
                                 const std::vector<std::array<double, 4>>& shifts,
                                 const std::vector<SwitchingRecord>& records, double t_f);

// Logical action at t_f (HalfPi) or 2 t_f (Not), exact up to global phase:
// P_- + e^{i gamma} P_+ with P_+- projecting onto (|0> +- |1>)/sqrt(2).
Eigen::Matrix2cd ideal_logical_gate(const GateDesign& design);

// Average fidelity over the six Bloch cardinal initial states under trap
// noise. 4QD variant: the design run at physical delta with per-trap 4-state
// shift vectors. Final states are projected onto the logical subspace
// without renormalization, so leakage counts as error.
FidelityResult average_fidelity(const GateDesign& design, double delta_radps,
                                const std::vector<std::array<double, 4>>& shifts,
                                const std::vector<double>& rates, long n_traj_per_state,
                                std::uint64_t seed);

// 2QD reference: H = Omega2 sigma_x + sum_j (k_j/2) xi_j sigma_z with
// Omega2 = pi/(4 t_f), compared against the exact pi/2 x-rotation.
FidelityResult average_fidelity_2qd(double t_f_s, const std::vector<double>& ks,
                                    const std::vector<double>& rates,
                                    long n_traj_per_state, std::uint64_t seed);

FidelityResult average_fidelity_serial(const GateDesign& design, double delta_radps,
                                       const std::vector<std::array<double, 4>>& shifts,
                                       const std::vector<double>& rates,
                                       long n_traj_per_state, std::uint64_t seed);

FidelityResult average_fidelity_2qd_serial(double t_f_s, const std::vector<double>& ks,
                                           const std::vector<double>& rates,
                                           long n_traj_per_state, std::uint64_t seed);

// Populations (p0, p1, pe0, pe1) of U(t)|initial> on a time grid, noiseless.
struct PopulationTrace {
    std::vector<double> times;  // units of 1/delta
    std::vector<std::array<double, 4>> populations;
};
PopulationTrace population_trace(const GateDesign& design, const Eigen::Vector4cd& initial,
                                 int n_points);

} // namespace quadq
