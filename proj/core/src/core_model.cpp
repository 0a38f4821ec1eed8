#include "rydsub/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rydsub/errors.hpp"

namespace rydsub {

void ModelParams::validate() const {
  if (!(d_b >= 0.0) || !std::isfinite(d_b)) throw invalid_parameter("d_b must be finite and >= 0");
  if (!(length > 0.0) || !std::isfinite(length)) throw invalid_parameter("length must be > 0");
  if (!(quad_rel_tol > 0.0 && quad_rel_tol < 1.0))
    throw invalid_parameter("quad_rel_tol must lie in (0, 1)");
  if (grid_points < 8) throw invalid_parameter("grid_points must be >= 8");
  if (!(v_cap >= 1e6)) throw invalid_parameter("v_cap must be >= 1e6");
}

GateConfig::GateConfig(std::vector<double> positions, double length) : positions_(std::move(positions)) {
  if (positions_.empty()) throw invalid_parameter("gate configuration needs at least one excitation");
  std::sort(positions_.begin(), positions_.end());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const double x = positions_[i];
    if (!std::isfinite(x) || x < 0.0 || x > length)
      throw invalid_parameter("excitation position " + std::to_string(x) + " outside [0, length]");
    if (i > 0 && x == positions_[i - 1]) throw invalid_parameter("coincident excitation positions");
  }
}

void FieldSpec::validate() const {
  if (!(alpha_g >= 0.0)) throw invalid_parameter("alpha_g must be >= 0");
  if (!(alpha_s >= 0.0)) throw invalid_parameter("alpha_s must be >= 0");
  if (!(eta_S >= 0.0 && eta_S <= 1.0)) throw invalid_parameter("eta_S must lie in [0, 1]");
  if (!(eta_R >= 0.0 && eta_R <= 1.0)) throw invalid_parameter("eta_R must lie in [0, 1]");
}

double rescaled_potential(double r, const ModelParams& params) {
  const double a = std::abs(r);
  // a^-6 > v_cap  <=>  a < v_cap^{-1/6}; compare before dividing.
  const double r2 = a * a;
  const double r6 = r2 * r2 * r2;
  if (r6 * params.v_cap <= 1.0) return params.v_cap;
  return 1.0 / r6;
}

double total_potential(double z, std::span<const double> positions, const ModelParams& params) {
  double sum = 0.0;
  for (double x : positions) sum += rescaled_potential(z - x, params);
  return sum;
}

double total_potential(double z, const GateConfig& config, const ModelParams& params) {
  return total_potential(z, config.positions(), params);
}

double scattering_exponent(ScatteringExponent kind) {
  if (kind == ScatteringExponent::approximate) return 4.0;
  return 4.0 * std::numbers::pi / 3.0 * std::cos(std::numbers::pi / 12.0);
}

double scattering_probability(double d_b, ScatteringExponent kind) {
  if (!(d_b >= 0.0)) throw invalid_parameter("d_b must be >= 0");
  return -std::expm1(-scattering_exponent(kind) * d_b);
}

} // namespace rydsub
