#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "quadq/geometry.hpp"

namespace quadq {

// Shortest round-trip decimal representation (std::to_chars); locale-free
// and byte-stable across reruns.
std::string format_double(double v);

// Minimal CSV sink with deterministic formatting.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row_raw(std::vector<std::string> cells);

    std::string to_csv() const;
    std::string to_json() const;  // array of objects keyed by column name

    // format: "csv" or "json"; extension follows the format.
    void write(const std::string& path_without_ext, const std::string& format) const;

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Geometry / trap JSON documents (positions in nm, rates in Hz).
nlohmann::json geometry_to_json(const QubitGeometry& geom);
QubitGeometry geometry_from_json(const nlohmann::json& j);
nlohmann::json traps_to_json(const TrapEnsemble& ensemble);
TrapEnsemble traps_from_json(const nlohmann::json& j);

QubitGeometry load_geometry(const std::string& path);
TrapEnsemble load_traps(const std::string& path);

} // namespace quadq
