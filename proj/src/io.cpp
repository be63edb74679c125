#include "quadq/io.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace quadq {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) {
        throw std::invalid_argument("CsvTable: row width mismatch");
    }
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    rows_.push_back(std::move(cells));
}

void CsvTable::add_row_raw(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
        throw std::invalid_argument("CsvTable: row width mismatch");
    }
    rows_.push_back(std::move(cells));
}

std::string CsvTable::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out << (i ? "," : "") << columns_[i];
    }
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string CsvTable::to_json() const {
    json arr = json::array();
    for (const auto& row : rows_) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            // cells hold shortest round-trip numerals; re-parse for typed JSON
            double v = 0.0;
            auto res = std::from_chars(row[i].data(), row[i].data() + row[i].size(), v);
            if (res.ec == std::errc() && res.ptr == row[i].data() + row[i].size()) {
                obj[columns_[i]] = v;
            } else {
                obj[columns_[i]] = row[i];
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

void CsvTable::write(const std::string& path_without_ext, const std::string& format) const {
    if (format == "csv") {
        write_text_file(path_without_ext + ".csv", to_csv());
    } else if (format == "json") {
        write_text_file(path_without_ext + ".json", to_json());
    } else {
        throw std::invalid_argument("CsvTable: unknown format '" + format + "'");
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

constexpr double kNm = 1e-9;

json vec_to_nm(const Vec3& v) {
    return json::array({v.x / kNm, v.y / kNm, v.z / kNm});
}

Vec3 vec_from_nm(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected [x,y,z] in nm");
    return {j[0].get<double>() * kNm, j[1].get<double>() * kNm, j[2].get<double>() * kNm};
}

} // namespace

json geometry_to_json(const QubitGeometry& geom) {
    json j;
    j["kind"] = geom.kind == GeometryKind::Dipole2QD ? "dipole2qd" : "quadrupole4qd";
    j["side_nm"] = geom.side_length / kNm;
    json dots = json::array();
    for (const auto& d : geom.dots) dots.push_back(vec_to_nm(d));
    j["dots_nm"] = std::move(dots);
    json occ = json::object();
    for (const auto& [label, idx] : geom.occupancy) occ[label] = idx;
    j["occupancy"] = std::move(occ);
    return j;
}

QubitGeometry geometry_from_json(const json& j) {
    QubitGeometry g;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "dipole2qd") {
        g.kind = GeometryKind::Dipole2QD;
    } else if (kind == "quadrupole4qd") {
        g.kind = GeometryKind::Quadrupole4QD;
    } else {
        throw std::runtime_error("unknown geometry kind: " + kind);
    }
    g.side_length = j.at("side_nm").get<double>() * kNm;
    for (const auto& d : j.at("dots_nm")) g.dots.push_back(vec_from_nm(d));
    for (const auto& [label, idx] : j.at("occupancy").items()) {
        g.occupancy[label] = idx.get<std::vector<int>>();
    }
    std::size_t expected = g.kind == GeometryKind::Dipole2QD ? 2 : 4;
    if (g.dots.size() != expected) throw std::runtime_error("geometry: wrong dot count");
    return g;
}

json traps_to_json(const TrapEnsemble& ensemble) {
    json j;
    j["density_per_m2"] = ensemble.density;
    j["seed"] = ensemble.seed;
    j["region"] = {{"width_nm", ensemble.region.width / kNm},
                   {"height_nm", ensemble.region.height / kNm},
                   {"z_offset_nm", ensemble.region.z_offset / kNm},
                   {"center_nm", vec_to_nm(ensemble.region.center)}};
    json sites = json::array();
    for (const auto& t : ensemble.traps) {
        sites.push_back({{"pos_nm", vec_to_nm(t.position)}, {"rate_hz", t.rate}});
    }
    j["sites"] = std::move(sites);
    return j;
}

TrapEnsemble traps_from_json(const json& j) {
    TrapEnsemble e;
    e.density = j.value("density_per_m2", 0.0);
    e.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("region")) {
        const auto& r = j.at("region");
        e.region.width = r.value("width_nm", 0.0) * kNm;
        e.region.height = r.value("height_nm", 0.0) * kNm;
        e.region.z_offset = r.value("z_offset_nm", 0.0) * kNm;
        if (r.contains("center_nm")) e.region.center = vec_from_nm(r.at("center_nm"));
    }
    for (const auto& s : j.at("sites")) {
        e.traps.push_back({vec_from_nm(s.at("pos_nm")), s.at("rate_hz").get<double>()});
    }
    return e;
}

QubitGeometry load_geometry(const std::string& path) {
    return geometry_from_json(json::parse(read_text_file(path)));
}

TrapEnsemble load_traps(const std::string& path) {
    return traps_from_json(json::parse(read_text_file(path)));
}

} // namespace quadq
