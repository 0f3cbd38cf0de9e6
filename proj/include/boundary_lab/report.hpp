#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace boundary_lab {

using Cell = std::variant<std::int64_t, double, std::string>;

// Tabular result of one experiment. Rows are serialised as RFC-4180 CSV; the
// header parameters and summary go to JSON.
struct ExperimentReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();

  ExperimentReport() = default;
  ExperimentReport(std::string name_, std::vector<std::string> columns_)
      : name(std::move(name_)), columns(std::move(columns_)) {}

  void add_row(std::vector<Cell> row);
  std::string to_csv() const;
};

// Shortest decimal that round-trips; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double x);
std::string format_cell(const Cell& c);

// Least-squares slope and intercept of y against x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace boundary_lab
