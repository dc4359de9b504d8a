#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace nlgeo::cli {

namespace {

std::string csv_cell(const Cell& cell) {
  struct {
    std::string operator()(std::monostate) const { return "NA"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return s; }
  } visitor;
  return std::visit(visitor, cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return v;
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  } visitor;
  return std::visit(visitor, cell);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const Table& table, std::ostream& os) {
  for (const auto& [key, value] : table.meta.items()) {
    os << "# " << key << ": ";
    if (value.is_string()) {
      os << value.get<std::string>();
    } else if (value.is_number_float()) {
      os << format_double(value.get<double>());
    } else {
      os << value.dump();
    }
    os << '\n';
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
    os << '\n';
  }
}

void write_json(const Table& table, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["meta"] = table.meta;
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) rec[table.columns[c]] = json_cell(row[c]);
    doc["records"].push_back(std::move(rec));
  }
  os << doc.dump(2) << '\n';
}

}  // namespace nlgeo::cli
