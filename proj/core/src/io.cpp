#include "rydsub/io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "rydsub/errors.hpp"
#include "rydsub/format.hpp"

namespace rydsub::io {
namespace {

using nlohmann::ordered_json;

void write_meta(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw invalid_parameter("not a number: '" + s + "'");
  }
  if (used != s.size()) throw invalid_parameter("trailing characters in number: '" + s + "'");
  return v;
}

ordered_json meta_json(const Metadata& meta) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

// Doubles go through format_number so CSV and JSON share one representation.
ordered_json number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return ordered_json::parse(format_number(v));
}

ordered_json report_json(const SubtractionReport& r) {
  ordered_json j;
  j["fidelity"] = number(r.fidelity);
  j["alpha_s_opt"] = number(r.alpha_s_opt);
  ordered_json loc = ordered_json::object();
  for (const auto& [k, v] : r.location) loc[k] = number(v);
  j["location"] = loc;
  ordered_json fock = ordered_json::array();
  for (const auto& [n, v] : r.per_fock) fock.push_back({{"n_g", n}, {"p1", number(v)}});
  j["per_fock"] = fock;
  j["degenerate"] = r.degenerate;
  j["boundary_hit"] = r.boundary_hit;
  j["constraint_active"] = r.constraint_active;
  j["meta"] = meta_json(r.meta);
  return j;
}

} // namespace

std::string library_version() { return RYDSUB_VERSION; }

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw dimension_mismatch("row width does not match the column count");
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& out, const Table& table) {
  write_meta(out, table.meta);
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      t.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (!header) {
      t.columns = split(line);
      header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(parse_double(cell));
    t.add_row(std::move(row));
  }
  if (!header) throw invalid_parameter("CSV input has no header row");
  return t;
}

Table to_table(const EfficiencyCurve& curve) { return to_table(std::vector<EfficiencyCurve>{curve}); }

Table to_table(const std::vector<EfficiencyCurve>& curves) {
  if (curves.empty()) throw invalid_parameter("no curves to tabulate");
  Table t;
  t.columns.push_back(curves.front().axis_name);
  for (const auto& c : curves) {
    if (c.axis != curves.front().axis || c.values.size() != c.axis.size())
      throw grid_mismatch("curves must share one axis");
    t.columns.push_back(c.value_name);
  }
  t.meta = curves.front().meta;
  for (std::size_t i = 0; i < curves.front().axis.size(); ++i) {
    std::vector<double> row{curves.front().axis[i]};
    for (const auto& c : curves) row.push_back(c.values[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(std::ostream& out, const DensityMatrixGrid& grid) {
  Metadata meta = grid.meta;
  meta["n_s"] = std::to_string(grid.n_s);
  write_meta(out, meta);
  out << "x";
  for (double y : grid.axis) out << ",re(" << format_number(y) << "),im(" << format_number(y) << ')';
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_number(grid.axis[i]);
    for (std::size_t j = 0; j < grid.size(); ++j)
      out << ',' << format_number(grid.at(i, j).real()) << ',' << format_number(grid.at(i, j).imag());
    out << '\n';
  }
}

DensityMatrixGrid read_density_csv(std::istream& in) {
  const Table t = read_csv(in);
  DensityMatrixGrid g;
  g.meta = t.meta;
  if (auto it = g.meta.find("n_s"); it != g.meta.end()) {
    g.n_s = std::stoi(it->second);
    g.meta.erase(it);
  }
  const std::size_t n = t.rows.size();
  if (t.columns.size() != 2 * n + 1) throw dimension_mismatch("density CSV is not square");
  g.values.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    g.axis.push_back(t.rows[i][0]);
    for (std::size_t j = 0; j < n; ++j) g.at(i, j) = {t.rows[i][1 + 2 * j], t.rows[i][2 + 2 * j]};
  }
  return g;
}

void write_json(std::ostream& out, const DensityMatrixGrid& grid) {
  ordered_json j;
  j["meta"] = meta_json(grid.meta);
  j["n_s"] = grid.n_s;
  ordered_json axis = ordered_json::array();
  for (double x : grid.axis) axis.push_back(number(x));
  j["axis"] = axis;
  ordered_json re = ordered_json::array(), im = ordered_json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ordered_json rr = ordered_json::array(), ii = ordered_json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      rr.push_back(number(grid.at(i, k).real()));
      ii.push_back(number(grid.at(i, k).imag()));
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  j["re"] = re;
  j["im"] = im;
  out << j.dump(1) << '\n';
}

void write_json(std::ostream& out, const SubtractionReport& report) { out << report_json(report).dump(2) << '\n'; }

void write_json(std::ostream& out, const std::vector<SubtractionReport>& reports) {
  ordered_json j = ordered_json::array();
  for (const auto& r : reports) j.push_back(report_json(r));
  out << j.dump(2) << '\n';
}

void write_json(std::ostream& out, const Table& table) {
  ordered_json j;
  j["meta"] = meta_json(table.meta);
  j["columns"] = table.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r = ordered_json::array();
    for (double v : row) r.push_back(number(v));
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  out << j.dump(1) << '\n';
}

} // namespace rydsub::io
