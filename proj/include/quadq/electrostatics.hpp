#pragma once

#include <array>
#include <vector>

#include "quadq/constants.hpp"
#include "quadq/geometry.hpp"

namespace quadq {

// Coupling of one trap to the logical splitting: k is the energy difference
// (state 0 minus state 1, as angular frequency) induced when the trap sits
// at xi = +1.
struct TrapCoupling {
    int trap_index = -1;
    double k = 0.0;                       // rad/s
    std::vector<double> per_dot_shifts;   // rad/s, on-site shift per dot at xi = +1
};

struct CoherenceSummary {
    double k_eff = 0.0;  // rad/s, sqrt(sum k_j^2)

    // Time for coherence to fall from 1 to p in the parabolic regime,
    // sqrt(2(1-p))/k_eff; +inf when k_eff == 0.
    double tau_p(double p) const;
};

struct UniformFieldResult {
    double common_mode = 0.0;  // rad/s, energy of the state-0 configuration
    double splitting = 0.0;    // rad/s, eps0 - eps1
};

// q^2/(4 pi eps0 eps_r hbar |trap - dot|). Throws on coincident positions.
double onsite_shift(const TrapSite& trap, const Vec3& dot, const PhysicalConstants& c);

TrapCoupling trap_coupling(const TrapSite& trap, const QubitGeometry& geom,
                           const PhysicalConstants& c, int trap_index = -1);

std::vector<TrapCoupling> ensemble_couplings(const TrapEnsemble& ensemble,
                                             const QubitGeometry& geom,
                                             const PhysicalConstants& c);

CoherenceSummary effective_coupling(const std::vector<TrapCoupling>& couplings);

// Least-squares slope of log|k| vs log r for a single trap placed at
// centroid + r * direction for each r in distances. Throws when any k
// vanishes (symmetry axis) or fewer than 5 distances are given.
double scaling_exponent(const QubitGeometry& geom, const Vec3& direction,
                        const std::vector<double>& distances, const PhysicalConstants& c);

// On-site energies in a uniform electric field. The splitting is computed
// from the occupancy-difference vector so that exact geometric symmetry
// yields an exact zero.
UniformFieldResult uniform_field_energies(const QubitGeometry& geom, const Vec3& field,
                                          const PhysicalConstants& c);

// Diagonal noise shifts of the four gate basis states (|0>,|1>,|eps0>,|eps1>)
// for one trap at xi = +1: per-basis-state sums of the per-dot shifts.
// Requires a Quadrupole4QD geometry.
std::array<double, 4> basis_state_shifts(const TrapCoupling& coupling,
                                         const QubitGeometry& geom);

} // namespace quadq
