#include "quadq/electrostatics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "quadq/stats.hpp"

namespace quadq {

double CoherenceSummary::tau_p(double p) const {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("tau_p: p must be in (0,1)");
    if (k_eff == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 * (1.0 - p)) / k_eff;
}

double onsite_shift(const TrapSite& trap, const Vec3& dot, const PhysicalConstants& c) {
    double r = trap.position.distance(dot);
    if (r <= 0.0) throw std::domain_error("onsite_shift: trap coincides with a dot");
    return c.kappa() / r;
}

TrapCoupling trap_coupling(const TrapSite& trap, const QubitGeometry& geom,
                           const PhysicalConstants& c, int trap_index) {
    TrapCoupling out;
    out.trap_index = trap_index;
    out.per_dot_shifts.reserve(geom.dots.size());
    for (const auto& dot : geom.dots) {
        out.per_dot_shifts.push_back(onsite_shift(trap, dot, c));
    }
    double s0 = 0.0, s1 = 0.0;
    for (int d : geom.occupied("0")) s0 += out.per_dot_shifts[static_cast<std::size_t>(d)];
    for (int d : geom.occupied("1")) s1 += out.per_dot_shifts[static_cast<std::size_t>(d)];
    out.k = s0 - s1;
    return out;
}

std::vector<TrapCoupling> ensemble_couplings(const TrapEnsemble& ensemble,
                                             const QubitGeometry& geom,
                                             const PhysicalConstants& c) {
    std::vector<TrapCoupling> out;
    out.reserve(ensemble.traps.size());
    for (std::size_t i = 0; i < ensemble.traps.size(); ++i) {
        out.push_back(trap_coupling(ensemble.traps[i], geom, c, static_cast<int>(i)));
    }
    return out;
}

CoherenceSummary effective_coupling(const std::vector<TrapCoupling>& couplings) {
    double sum_sq = 0.0;
    for (const auto& tc : couplings) sum_sq += tc.k * tc.k;
    return CoherenceSummary{std::sqrt(sum_sq)};
}

double scaling_exponent(const QubitGeometry& geom, const Vec3& direction,
                        const std::vector<double>& distances, const PhysicalConstants& c) {
    if (distances.size() < 5) {
        throw std::invalid_argument("scaling_exponent: need at least 5 distances");
    }
    Vec3 dir = direction.normalized();
    Vec3 origin = centroid(geom);
    std::vector<double> log_r, log_k;
    log_r.reserve(distances.size());
    log_k.reserve(distances.size());
    for (double r : distances) {
        if (r <= 0.0) throw std::invalid_argument("scaling_exponent: non-positive distance");
        TrapSite trap{origin + r * dir, 1.0};
        double k = trap_coupling(trap, geom, c).k;
        if (k == 0.0) {
            throw std::domain_error("scaling_exponent: direction lies on a symmetry axis (k = 0)");
        }
        log_r.push_back(std::log(r));
        log_k.push_back(std::log(std::abs(k)));
    }
    return linear_fit(log_r, log_k).slope;
}

UniformFieldResult uniform_field_energies(const QubitGeometry& geom, const Vec3& field,
                                          const PhysicalConstants& c) {
    double q_over_hbar = c.electron_charge / c.hbar;

    Vec3 occ0{}, occ1{};
    for (int d : geom.occupied("0")) occ0 += geom.dots[static_cast<std::size_t>(d)];
    for (int d : geom.occupied("1")) occ1 += geom.dots[static_cast<std::size_t>(d)];

    UniformFieldResult out;
    out.common_mode = q_over_hbar * field.dot(occ0);
    // Difference of occupancy centroids taken before the dot product: the
    // ideal 4QD cancellation is then exact in floating point.
    out.splitting = q_over_hbar * field.dot(occ0 - occ1);
    return out;
}

std::array<double, 4> basis_state_shifts(const TrapCoupling& coupling,
                                         const QubitGeometry& geom) {
    if (geom.kind != GeometryKind::Quadrupole4QD) {
        throw std::invalid_argument("basis_state_shifts: requires a 4QD geometry");
    }
    std::array<double, 4> shifts{};
    const char* labels[4] = {"0", "1", "eps0", "eps1"};
    for (int b = 0; b < 4; ++b) {
        double s = 0.0;
        for (int d : geom.occupied(labels[b])) {
            s += coupling.per_dot_shifts[static_cast<std::size_t>(d)];
        }
        shifts[static_cast<std::size_t>(b)] = s;
    }
    return shifts;
}

} // namespace quadq
