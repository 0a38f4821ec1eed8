#include "rydsub/absorber_model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rydsub/errors.hpp"
#include "rydsub/format.hpp"
#include "rydsub/optimize.hpp"

namespace rydsub {

void AbsorberParams::validate() const {
  if (!(d_b >= 0.0) || !std::isfinite(d_b)) throw invalid_parameter("d_b must be finite and >= 0");
  if (!std::isfinite(delta_over_gamma)) throw invalid_parameter("delta_over_gamma must be finite");
  if (!(eit_over_dephasing >= 0.0)) throw invalid_parameter("eit_over_dephasing must be >= 0");
}

void AbsorberParams::validate_constraint() const {
  validate();
  if (!(ratio_min > 0.0)) throw invalid_parameter("ratio_min must be > 0");
  if (eit_over_dephasing < ratio_min)
    throw invalid_parameter("eit_over_dephasing below ratio_min: absorption would not be incoherent");
}

double absorb_prob(const AbsorberParams& params) {
  params.validate();
  const double a = 1.0 + params.eit_over_dephasing;
  const double d = params.delta_over_gamma;
  return -std::expm1(-2.0 * params.d_b * a / (a * a + d * d));
}

double residual_prob(const AbsorberParams& params) {
  params.validate();
  const double d = params.delta_over_gamma;
  return -std::expm1(-2.0 * params.d_b / (1.0 + d * d));
}

namespace {

double subtract_fock(int n_g, double p, double p_res) {
  double sum = 0.0;
  double before = 1.0; // (1-p)^{k-1}
  for (int k = 1; k <= n_g; ++k) {
    sum += p * before * std::pow(1.0 - p_res, n_g - k);
    before *= 1.0 - p;
  }
  return sum;
}

} // namespace

double absorber_subtract_fock(int n_g, const AbsorberParams& params) {
  if (n_g < 1) throw invalid_parameter("absorber_subtract_fock needs n_g >= 1");
  return subtract_fock(n_g, absorb_prob(params), residual_prob(params));
}

double absorber_fidelity(double alpha_g, const AbsorberParams& params, double tail) {
  if (!(alpha_g >= 0.0)) throw invalid_parameter("alpha_g must be >= 0");
  const double p = absorb_prob(params);
  const double p_res = residual_prob(params);
  return poisson_average(
      alpha_g, [&](std::size_t n) { return n == 0 ? 1.0 : subtract_fock(static_cast<int>(n), p, p_res); }, tail);
}

SubtractionReport optimize_absorber(double alpha_g, double d_b, const AbsorberBounds& bounds) {
  if (!(bounds.ratio_min > 0.0 && bounds.ratio_max > bounds.ratio_min))
    throw invalid_parameter("ratio bounds must satisfy 0 < min < max");
  if (!(bounds.delta_min > 0.0 && bounds.delta_max > bounds.delta_min))
    throw invalid_parameter("detuning bounds must satisfy 0 < min < max");
  if (bounds.grid < 3) throw invalid_parameter("grid must have at least 3 points per axis");

  // Log-10 coordinates: u for Delta/gamma, v for Gamma_EIT/Gamma.
  const double u_lo = std::log10(bounds.delta_min), u_hi = std::log10(bounds.delta_max);
  const double v_lo = std::log10(bounds.ratio_min), v_hi = std::log10(bounds.ratio_max);
  auto objective = [&](double u, double v) {
    AbsorberParams a{d_b, std::pow(10.0, u), std::pow(10.0, v), bounds.ratio_min};
    return absorber_fidelity(alpha_g, a);
  };

  const std::size_t n = bounds.grid;
  const double hu = (u_hi - u_lo) / static_cast<double>(n - 1);
  const double hv = (v_hi - v_lo) / static_cast<double>(n - 1);
  double best_u = u_lo, best_v = v_lo, best = -1.0, worst = 2.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double u = u_lo + hu * static_cast<double>(i);
      const double v = v_lo + hv * static_cast<double>(j);
      const double f = objective(u, v);
      worst = std::min(worst, f);
      if (f > best) {
        best = f;
        best_u = u;
        best_v = v;
      }
    }

  SubtractionReport report;
  if (best - worst <= 1e-12) {
    report.degenerate = true;
  } else {
    for (int sweep = 0; sweep < 200; ++sweep) {
      const double before = best;
      const ScalarOptimum along_u = golden_section_maximize([&](double u) { return objective(u, best_v); },
                                                            std::max(u_lo, best_u - hu), std::min(u_hi, best_u + hu));
      if (along_u.value > best) {
        best = along_u.value;
        best_u = along_u.x;
      }
      const ScalarOptimum along_v = golden_section_maximize([&](double v) { return objective(best_u, v); },
                                                            std::max(v_lo, best_v - hv), std::min(v_hi, best_v + hv));
      if (along_v.value > best) {
        best = along_v.value;
        best_v = along_v.x;
      }
      if (best - before <= 1e-15) break;
    }
  }

  const double edge = 1e-6;
  report.fidelity = best;
  report.location = {{"delta_over_gamma", std::pow(10.0, best_u)}, {"eit_over_dephasing", std::pow(10.0, best_v)}};
  report.constraint_active = best_v - v_lo <= edge;
  report.boundary_hit = report.degenerate || best_u - u_lo <= edge || u_hi - best_u <= edge || v_hi - best_v <= edge;
  const AbsorberParams at{d_b, std::pow(10.0, best_u), std::pow(10.0, best_v), bounds.ratio_min};
  const std::size_t terms = poisson_terms(alpha_g);
  for (std::size_t k = 1; k < terms; ++k)
    report.per_fock.emplace_back(static_cast<int>(k), absorber_subtract_fock(static_cast<int>(k), at));
  report.meta = {{"mechanism", "saturable_absorber"},
                 {"alpha_g", format_number(alpha_g)},
                 {"d_b", format_number(d_b)},
                 {"ratio_min", format_number(bounds.ratio_min)},
                 {"ratio_max", format_number(bounds.ratio_max)},
                 {"delta_min", format_number(bounds.delta_min)},
                 {"delta_max", format_number(bounds.delta_max)},
                 {"grid", std::to_string(bounds.grid)}};
  return report;
}

} // namespace rydsub
