#include "quadq/constants.hpp"

#include <numbers>
#include <stdexcept>

namespace quadq {

double PhysicalConstants::kappa() const {
    return coupling_scale * electron_charge * electron_charge /
           (4.0 * std::numbers::pi * vacuum_permittivity * relative_permittivity * hbar);
}

void PhysicalConstants::validate() const {
    if (electron_charge <= 0 || hbar <= 0 || vacuum_permittivity <= 0 ||
        relative_permittivity <= 0 || coupling_scale <= 0) {
        throw std::invalid_argument("PhysicalConstants: all entries must be positive");
    }
}

} // namespace quadq
