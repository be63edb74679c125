#include "quadq/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "quadq/rng.hpp"

namespace quadq {

namespace {

// stream tags for seed derivation
constexpr std::uint64_t kTrapStream = 0x7261705f73697465ULL;
constexpr std::uint64_t kPerturbStream = 0x706572747572ULL;

} // namespace

const std::vector<int>& QubitGeometry::occupied(const std::string& label) const {
    auto it = occupancy.find(label);
    if (it == occupancy.end()) {
        throw std::out_of_range("QubitGeometry: no basis state '" + label + "'");
    }
    return it->second;
}

std::vector<double> TrapEnsemble::rates() const {
    std::vector<double> out;
    out.reserve(traps.size());
    for (const auto& t : traps) out.push_back(t.rate);
    return out;
}

QubitGeometry make_ideal_geometry(GeometryKind kind, double side_length, double depth) {
    if (side_length <= 0.0 || depth <= 0.0) {
        throw std::invalid_argument("make_ideal_geometry: dimensions must be positive");
    }
    QubitGeometry g;
    g.kind = kind;
    g.side_length = side_length;
    double h = side_length / 2.0;
    double z = -depth;
    if (kind == GeometryKind::Dipole2QD) {
        g.dots = {{-h, 0.0, z}, {h, 0.0, z}};  // A, B
        g.occupancy = {{"0", {0}}, {"1", {1}}};
    } else {
        // A,B,C,D clockwise; diagonals (A,C) and (B,D) carry the logical states,
        // edges (A,B) top and (C,D) bottom are the non-DFS configurations.
        g.dots = {{-h, h, z}, {h, h, z}, {h, -h, z}, {-h, -h, z}};
        g.occupancy = {{"0", {0, 2}}, {"1", {1, 3}}, {"eps0", {0, 1}}, {"eps1", {2, 3}}};
    }
    return g;
}

static bool too_close(const Vec3& p, const QubitGeometry* avoid, double standoff) {
    if (avoid == nullptr) return false;
    for (const auto& d : avoid->dots) {
        if (p.distance(d) < standoff) return true;
    }
    return false;
}

TrapEnsemble sample_traps(const SampleRegion& region, double density, double rate,
                          std::uint64_t seed, const QubitGeometry* avoid,
                          double min_standoff) {
    if (density < 0.0) throw std::invalid_argument("sample_traps: density must be >= 0");
    if (density > 0.0 && region.area() <= 0.0) {
        throw std::invalid_argument("sample_traps: positive density over zero-area region");
    }
    int count = static_cast<int>(std::llround(density * region.area()));

    TrapEnsemble ensemble;
    ensemble.region = region;
    ensemble.density = density;
    ensemble.seed = seed;
    ensemble.traps.reserve(static_cast<std::size_t>(count));

    auto engine = make_engine(seed, kTrapStream);
    std::uniform_real_distribution<double> ux(-region.width / 2.0, region.width / 2.0);
    std::uniform_real_distribution<double> uy(-region.height / 2.0, region.height / 2.0);
    for (int i = 0; i < count; ++i) {
        Vec3 p;
        do {
            p = {region.center.x + ux(engine), region.center.y + uy(engine), region.z_offset};
        } while (too_close(p, avoid, min_standoff));
        ensemble.traps.push_back({p, rate});
    }
    return ensemble;
}

TrapEnsemble sample_traps_fixed(int count, double density, double rate, std::uint64_t seed,
                                const QubitGeometry* avoid, double min_standoff) {
    if (count < 0) throw std::invalid_argument("sample_traps_fixed: negative count");
    if (density <= 0.0) throw std::invalid_argument("sample_traps_fixed: density must be > 0");
    double side = std::sqrt(static_cast<double>(count) / density);
    SampleRegion region{side, side, 0.0, {0.0, 0.0, 0.0}};

    TrapEnsemble ensemble = sample_traps(region, density, rate, seed, avoid, min_standoff);
    // round(density * area) can disagree with `count` by float rounding; pin it.
    auto engine = make_engine(seed, kTrapStream, 0x746f70ULL);
    std::uniform_real_distribution<double> ux(-side / 2.0, side / 2.0);
    while (static_cast<int>(ensemble.traps.size()) < count) {
        Vec3 p;
        do {
            p = {ux(engine), ux(engine), 0.0};
        } while (too_close(p, avoid, min_standoff));
        ensemble.traps.push_back({p, rate});
    }
    if (static_cast<int>(ensemble.traps.size()) > count) {
        ensemble.traps.resize(static_cast<std::size_t>(count));
    }
    return ensemble;
}

QubitGeometry perturb_geometry(const QubitGeometry& geom, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("perturb_geometry: sigma must be >= 0");
    if (sigma == 0.0) return geom;
    QubitGeometry out = geom;
    auto engine = make_engine(seed, kPerturbStream);
    std::normal_distribution<double> gauss(0.0, sigma * geom.side_length);
    for (auto& d : out.dots) {
        d.x += gauss(engine);
        d.y += gauss(engine);
        d.z += gauss(engine);
    }
    return out;
}

Vec3 centroid(const QubitGeometry& geom) {
    if (geom.dots.empty()) throw std::invalid_argument("centroid: geometry has no dots");
    Vec3 sum{};
    for (const auto& d : geom.dots) sum += d;
    return sum / static_cast<double>(geom.dots.size());
}

} // namespace quadq
