#include "vexlp/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "vexlp/error.hpp"

namespace vexlp {

ExperimentReport::ExperimentReport(std::string name, std::vector<Column> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty()) throw Error("report needs at least one column");
}

void ExperimentReport::add_row(std::vector<double> row) {
  if (row.size() != columns_.size())
    throw Error("report row has " + std::to_string(row.size()) + " entries, expected " +
                std::to_string(columns_.size()));
  for (double v : row)
    if (std::isnan(v)) throw Error("report row contains NaN");
  rows_.push_back(std::move(row));
}

void ExperimentReport::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata_.emplace_back(key, value);
}

void ExperimentReport::set_meta(const std::string& key, double value) { set_meta(key, format_real(value)); }

std::string ExperimentReport::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata_)
    if (k == key) return v;
  return {};
}

std::size_t ExperimentReport::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  throw Error("report has no column '" + name + "'");
}

std::vector<double> ExperimentReport::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void ExperimentReport::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i].name;
  out << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_real(r[i]);
    out << '\n';
  }
  bool any_unit = false;
  for (const auto& c : columns_) any_unit = any_unit || !c.unit.empty();
  if (any_unit) {
    out << "# units";
    for (const auto& c : columns_) out << ',' << c.unit;
    out << '\n';
  }
  for (const auto& [k, v] : metadata_) out << "# " << k << ',' << v << '\n';
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream s;
  write_csv(s);
  return s.str();
}

}  // namespace vexlp
