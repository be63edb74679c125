#pragma once

namespace quadq {

// Every energy-like quantity in this library is stored as an angular
// frequency (energy divided by hbar, rad/s), so propagators never need
// explicit hbar bookkeeping.
struct PhysicalConstants {
    double electron_charge = 1.602176634e-19;       // C (exact, SI 2019)
    double hbar = 1.054571817e-34;                  // J s
    double vacuum_permittivity = 8.8541878128e-12;  // F/m
    double relative_permittivity = 11.7;            // bulk silicon
    // Dimensionless multiplier on kappa(). The absolute trap-coupling scale
    // depends on screening details outside the model, so it is a config knob
    // and gets recorded in run manifests.
    double coupling_scale = 1.0;

    // Coulomb shift prefactor q^2/(4 pi eps0 eps_r hbar) in units of rad m/s;
    // divide by a distance to get the on-site shift of one electron.
    double kappa() const;

    // Throws std::invalid_argument when any entry is non-positive.
    void validate() const;
};

} // namespace quadq
