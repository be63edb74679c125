#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quadq/vec3.hpp"

namespace quadq {

enum class GeometryKind { Dipole2QD, Quadrupole4QD };

// Dot layout plus the charge configuration of each basis state. Dots are
// point sites labelled A,B[,C,D] clockwise; occupancy maps a basis-state
// label to the dot indices holding an excess electron.
//
// Dipole2QD:      basis {"0": {A}, "1": {B}}
// Quadrupole4QD:  basis {"0": {A,C}, "1": {B,D}, "eps0": {A,B}, "eps1": {C,D}}
struct QubitGeometry {
    GeometryKind kind = GeometryKind::Dipole2QD;
    std::vector<Vec3> dots;
    std::map<std::string, std::vector<int>> occupancy;
    double side_length = 0.0;  // m, construction parameter (kept for perturbation scale)

    const std::vector<int>& occupied(const std::string& label) const;
};

struct TrapSite {
    Vec3 position;
    double rate = 0.0;  // Poisson switching rate, Hz
};

// Lateral sampling window: a rectangle in the z = z_offset plane.
struct SampleRegion {
    double width = 0.0;   // m
    double height = 0.0;  // m
    double z_offset = 0.0;
    Vec3 center{};        // lateral center; z component ignored

    double area() const { return width * height; }
};

struct TrapEnsemble {
    std::vector<TrapSite> traps;
    SampleRegion region;
    double density = 0.0;  // areal density, m^-2
    std::uint64_t seed = 0;

    std::vector<double> rates() const;
};

// 2QD: two dots separated by side_length on the x axis; 4QD: square of side
// side_length. Both in the z = -depth plane, laterally centered at the origin.
QubitGeometry make_ideal_geometry(GeometryKind kind, double side_length, double depth);

// Trap positions iid uniform over the region, count = round(density * area).
// Positions closer than min_standoff to any dot of `avoid` are rejected and
// redrawn. Deterministic per seed.
TrapEnsemble sample_traps(const SampleRegion& region, double density, double rate,
                          std::uint64_t seed, const QubitGeometry* avoid = nullptr,
                          double min_standoff = 1e-9);

// Fixed-count mode: `count` traps over a square window of area count/density,
// centered laterally over the qubit, in the z = 0 plane.
TrapEnsemble sample_traps_fixed(int count, double density, double rate,
                                std::uint64_t seed, const QubitGeometry* avoid = nullptr,
                                double min_standoff = 1e-9);

// Independent isotropic 3D Gaussian displacement of every dot; per-axis
// standard deviation is sigma * side_length. Occupancy is unchanged.
QubitGeometry perturb_geometry(const QubitGeometry& geom, double sigma, std::uint64_t seed);

Vec3 centroid(const QubitGeometry& geom);

} // namespace quadq
