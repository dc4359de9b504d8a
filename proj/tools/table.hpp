#pragma once

// Plot-ready tables: '#' metadata lines, one header row, 17 significant digits
// in CSV; {"meta": ..., "records": [...]} in JSON.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace nlgeo::cli {

using Cell = std::variant<std::monostate, bool, long long, double, std::string>;

struct Table {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// %.17g; "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double x);

/// Null cells are written as NA.
void write_csv(const Table& table, std::ostream& os);
/// Non-finite doubles and null cells become JSON null.
void write_json(const Table& table, std::ostream& os);

}  // namespace nlgeo::cli
