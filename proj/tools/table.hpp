#pragma once

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace lagpsd::cli {

using Cell = std::variant<std::string, double, long long>;

// shortest round-trip text
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> r) { rows.push_back(std::move(r)); }
};

inline std::string cell_text(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string q = "\"";
    for (char ch : *s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  if (auto d = std::get_if<double>(&c)) return fmt(*d);
  return std::to_string(std::get<long long>(c));
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return fmt(*d);
    return *d;
  }
  return std::get<long long>(c);
}

inline void write_csv(std::ostream& os, const Table& t, const nlohmann::ordered_json& config) {
  os << "# config: " << config.dump() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
    os << '\n';
  }
}

inline void write_json(std::ostream& os, const Table& t, const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j;
  j["config"] = config;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = cell_json(r[i]);
    j["rows"].push_back(o);
  }
  os << j.dump(2) << '\n';
}

}  // namespace lagpsd::cli
