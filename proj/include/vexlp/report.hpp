#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace vexlp {

struct Column {
  std::string name;
  std::string unit;
};

/// Tabular experiment output: named real columns plus ordered metadata.
/// Rows are finite except entries the producing operation flags as inf.
class ExperimentReport {
 public:
  ExperimentReport(std::string name, std::vector<Column> columns);

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

  void add_row(std::vector<double> row);
  /// Inserts or overwrites, keeping first-insertion order.
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  /// Value for key, or empty string.
  std::string meta(const std::string& key) const;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;

  /// CSV: header row, one line per row, then "# key,value" metadata lines.
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

/// Shortest-round-trip-safe 17 significant digit rendering, locale free.
std::string format_real(double v);

}  // namespace vexlp
