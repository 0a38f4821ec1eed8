#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rydsub/density_evolution.hpp"
#include "rydsub/retrieval_model.hpp"
#include "rydsub/subtraction_model.hpp"

namespace rydsub::io {

std::string library_version();

/// Column-oriented table: the first column is the axis, every other column
/// is one series. Metadata is written as leading `# key=value` lines.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Metadata meta;

  void add_row(std::vector<double> row);
};

void write_csv(std::ostream& out, const Table& table);
Table read_csv(std::istream& in);

Table to_table(const EfficiencyCurve& curve);
Table to_table(const std::vector<EfficiencyCurve>& curves); // curves must share one axis

/// Density grid as CSV: header `x,re(y0),im(y0),...`, one row per x.
void write_csv(std::ostream& out, const DensityMatrixGrid& grid);
void write_json(std::ostream& out, const DensityMatrixGrid& grid);
DensityMatrixGrid read_density_csv(std::istream& in);

void write_json(std::ostream& out, const SubtractionReport& report);
void write_json(std::ostream& out, const std::vector<SubtractionReport>& reports);

void write_json(std::ostream& out, const Table& table);

} // namespace rydsub::io
