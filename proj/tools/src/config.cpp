#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rydsub/errors.hpp"

namespace rydsub::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw invalid_parameter("config key " + key + ": '" + raw + "' is not a number");
  return v;
}

} // namespace

const std::vector<SchemaEntry>& schema() {
  static const std::vector<SchemaEntry> entries = {
      {"run.seed", "1", "Monte Carlo seed"},
      {"run.threads", "1", "worker threads; never changes results"},
      {"output.dir", "out", "output directory"},
      {"output.format", "csv", "csv or json"},

      {"model.d_b", "2", "half the optical depth per blockade radius"},
      {"model.length", "20", "medium length in blockade radii"},
      {"model.quad_rel_tol", "1e-10", "quadrature tolerance"},
      {"model.grid_points", "64", "default samples per blockade radius"},
      {"model.v_cap", "1e12", "cap on the rescaled potential"},
      {"model.exponent", "exact", "scattering exponent: exact or approximate"},

      {"fields.alpha_g", "2", "mean gate photon number"},
      {"fields.alpha_s", "1", "mean source photon number"},
      {"fields.eta_S", "1", "storage efficiency"},
      {"fields.eta_R", "1", "retrieval efficiency"},

      {"fig1d.r", "6,10,14", "fixed coordinate of the second excitation, one grid per value"},
      {"fig1d.n_s", "5", "scattered source photons"},
      {"fig1d.mode", "gaussian", "gaussian or flat"},
      {"fig1d.mode_center", "10", "mode centre"},
      {"fig1d.mode_width", "3", "standard deviation (gaussian) or full width (flat)"},
      {"fig1d.points_per_zb", "8", "grid density"},

      {"retrieval.p", "0.5", "scattering probability per excitation"},
      {"retrieval.alpha_g", "0.5,1,2,4", "one curve per gate amplitude"},
      {"retrieval.scattered_max", "3", "largest mean scattered photon number"},
      {"retrieval.points", "31", "axis points"},

      {"subtract.p", "0.5", "scattering probability per excitation"},
      {"subtract.alpha_s", "0,0.5,1,2,5", "one curve per source amplitude"},
      {"subtract.alpha_g_max", "5", "largest gate amplitude"},
      {"subtract.points", "51", "axis points"},

      {"fidelity.d_b_min", "0.25", "first optical depth of the sweep"},
      {"fidelity.d_b_max", "6", "last optical depth of the sweep"},
      {"fidelity.points", "24", "sweep points"},
      {"fidelity.alpha_s_min", "1e-3", "lower alpha_s bound"},
      {"fidelity.alpha_s_max", "50", "upper alpha_s bound"},
      {"fidelity.scan_points", "17", "coarse log scan points"},
      {"fidelity.ratio_min", "10", "lower bound on Gamma_EIT/Gamma"},
      {"fidelity.ratio_max", "1000", "upper bound on Gamma_EIT/Gamma"},
      {"fidelity.delta_min", "0.1", "lower bound on Delta/gamma"},
      {"fidelity.delta_max", "1000", "upper bound on Delta/gamma"},
      {"fidelity.absorber_grid", "33", "absorber scan points per axis"},
      {"fidelity.surface_d_b", "0.5,1,5", "optical depths of the storage/retrieval surfaces"},
      {"fidelity.surface_n_g", "2", "gate photon number of the surfaces"},
      {"fidelity.eta_min", "0.5", "smallest efficiency on the surfaces"},
      {"fidelity.eta_points", "11", "surface points per axis"},

      {"verify.configs", "50", "random configurations for the ODE comparison"},
      {"verify.kernel_configs", "200", "random configurations for the kernel identities"},
      {"verify.ode_step", "0.015625", "ODE step"},
      {"verify.ode_tol", "1e-6", "ODE vs closed-form tolerance"},
      {"verify.kernel_tol", "1e-6", "diagonal identity tolerance"},
      {"verify.hermitian_tol", "1e-10", "Hermitian symmetry tolerance"},
      {"verify.constant_tol", "1e-4", "scattering constant tolerance"},
      {"verify.closed_form_tol", "1e-6", "closed-form limit tolerance"},
      {"verify.identity_tol", "1e-12", "algebraic identity tolerance"},
      {"verify.mc_trials", "100000", "Monte Carlo trials per check"},
      {"verify.mc_sigma", "3", "allowed deviation in standard errors"},
      {"verify.mc_sets", "20", "random parameter sets for the pipeline check"},
  };
  return entries;
}

RunConfig::RunConfig() {
  for (const auto& e : schema()) values_[e.key] = e.value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw invalid_parameter("unknown config key: " + key);
  it->second = trim(value);
}

void RunConfig::load_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw invalid_parameter(std::string("cannot read config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw invalid_parameter("config entry outside a section: " + section);
    for (const auto& [key, node] : body) set(section + "." + key, node.get_value<std::string>());
  }
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw invalid_parameter("override must look like section.key=value: " + assignment);
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw invalid_parameter("unknown config key: " + key);
  return it->second;
}

double RunConfig::number(const std::string& key) const { return parse_number(key, text(key)); }

int RunConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != static_cast<int>(v)) throw invalid_parameter("config key " + key + " must be an integer");
  return static_cast<int>(v);
}

std::uint64_t RunConfig::unsigned64(const std::string& key) const {
  const std::string& s = text(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw invalid_parameter("config key " + key + " must be an unsigned integer");
  return v;
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw invalid_parameter("config key " + key + " needs at least one value");
  return out;
}

ModelParams RunConfig::model() const {
  ModelParams p;
  p.d_b = number("model.d_b");
  p.length = number("model.length");
  p.quad_rel_tol = number("model.quad_rel_tol");
  p.grid_points = integer("model.grid_points");
  p.v_cap = number("model.v_cap");
  p.validate();
  return p;
}

FieldSpec RunConfig::fields() const {
  FieldSpec f{number("fields.alpha_g"), number("fields.alpha_s"), number("fields.eta_S"), number("fields.eta_R")};
  f.validate();
  return f;
}

ScatteringExponent RunConfig::exponent() const {
  const auto& s = text("model.exponent");
  if (s == "exact") return ScatteringExponent::exact;
  if (s == "approximate") return ScatteringExponent::approximate;
  throw invalid_parameter("model.exponent must be exact or approximate");
}

SpinWaveMode RunConfig::mode() const {
  const auto& kind = text("fig1d.mode");
  const double c = number("fig1d.mode_center"), w = number("fig1d.mode_width");
  if (!(w > 0.0)) throw invalid_parameter("fig1d.mode_width must be positive");
  if (kind == "gaussian") return SpinWaveMode::gaussian(c, w);
  if (kind == "flat") return SpinWaveMode::flat(c, w);
  throw invalid_parameter("fig1d.mode must be gaussian or flat");
}

FidelityBounds RunConfig::fidelity_bounds() const {
  FidelityBounds b;
  b.alpha_s_min = number("fidelity.alpha_s_min");
  b.alpha_s_max = number("fidelity.alpha_s_max");
  b.scan_points = static_cast<std::size_t>(integer("fidelity.scan_points"));
  if (b.scan_points < 3) throw invalid_parameter("fidelity.scan_points must be >= 3");
  return b;
}

AbsorberBounds RunConfig::absorber_bounds() const {
  AbsorberBounds b;
  b.ratio_min = number("fidelity.ratio_min");
  b.ratio_max = number("fidelity.ratio_max");
  b.delta_min = number("fidelity.delta_min");
  b.delta_max = number("fidelity.delta_max");
  b.grid = static_cast<std::size_t>(integer("fidelity.absorber_grid"));
  return b;
}

Metadata RunConfig::as_metadata() const {
  Metadata m;
  for (const auto& [k, v] : values_) {
    // Thread count and output location never change results.
    if (k == "run.threads" || k == "output.dir") continue;
    m["config." + k] = v;
  }
  return m;
}

void RunConfig::validate() const {
  model();
  fields();
  exponent();
  mode();
  fidelity_bounds();
  absorber_bounds();
  unsigned64("run.seed");
  if (integer("run.threads") < 1) throw invalid_parameter("run.threads must be >= 1");
  const auto& fmt = text("output.format");
  if (fmt != "csv" && fmt != "json") throw invalid_parameter("output.format must be csv or json");
  for (const auto& e : schema()) {
    const std::string key = e.key;
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section == "run" || section == "output" || key == "model.exponent" || key == "fig1d.mode") continue;
    numbers(key); // every other value is a number or a number list
  }
  for (const char* key : {"verify.ode_tol", "verify.kernel_tol", "verify.hermitian_tol", "verify.constant_tol",
                          "verify.closed_form_tol", "verify.identity_tol", "verify.mc_sigma", "verify.ode_step"})
    if (!(number(key) > 0.0)) throw invalid_parameter(std::string(key) + " must be positive");
}

std::string default_config_text() {
  std::ostringstream out;
  std::string section;
  for (const auto& e : schema()) {
    const std::string key = e.key;
    const auto dot = key.find('.');
    if (key.substr(0, dot) != section) {
      section = key.substr(0, dot);
      out << (out.tellp() > 0 ? "\n" : "") << '[' << section << "]\n";
    }
    out << "; " << e.doc << '\n' << key.substr(dot + 1) << " = " << e.value << '\n';
  }
  return out.str();
}

} // namespace rydsub::cli
