#include "rydsub/subtraction_model.hpp"

#include <cmath>
#include <string>

#include "rydsub/errors.hpp"
#include "rydsub/format.hpp"
#include "rydsub/optimize.hpp"

namespace rydsub {
namespace {

void check_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw invalid_parameter(std::string(name) + " must lie in [0, 1]");
}

void check_count(int n, const char* name) {
  if (n < 0) throw invalid_parameter(std::string(name) + " must be >= 0");
}

StageProbs binomial_loss(int n, double efficiency) {
  const double kept = std::pow(efficiency, n);
  const double one_lost = n == 0 ? 0.0 : n * (1.0 - efficiency) * std::pow(efficiency, n - 1);
  return {kept, one_lost};
}

} // namespace

StageProbs storage_probs(int n_g, double eta_S) {
  check_count(n_g, "n_g");
  check_probability(eta_S, "eta_S");
  return binomial_loss(n_g, eta_S);
}

StageProbs retrieval_probs(int n, double eta_R) {
  check_count(n, "n");
  check_probability(eta_R, "eta_R");
  return binomial_loss(n, eta_R);
}

StageProbs decoherence_probs(int n_g, int n_s, double p) {
  check_count(n_g, "n_g");
  check_count(n_s, "n_s");
  check_probability(p, "p");
  if (n_g == 0) return {1.0, 0.0};
  const double miss_all = std::pow(1.0 - p, n_g);
  const double none = std::pow(miss_all, n_s);
  double one = 0.0;
  double hit_k = p; // p (1-p)^{k-1}
  for (int k = 1; k <= n_g; ++k) {
    one += std::pow(hit_k + miss_all, n_s) - none;
    hit_k *= 1.0 - p;
  }
  return {none, one};
}

double subtract_prob_fock(int n_g, int n_s, double eta_S, double eta_R, double p) {
  if (n_g < 1) throw invalid_parameter("subtract_prob_fock needs n_g >= 1");
  const StageProbs store = storage_probs(n_g, eta_S);
  const StageProbs scatter_all = decoherence_probs(n_g, n_s, p);
  const StageProbs scatter_rest = decoherence_probs(n_g - 1, n_s, p);
  const StageProbs retrieve_all = retrieval_probs(n_g, eta_R);
  const StageProbs retrieve_rest = retrieval_probs(n_g - 1, eta_R);
  return store.p1 * scatter_rest.p0 * retrieve_rest.p0   // lost in storage
         + store.p0 * scatter_all.p1 * retrieve_rest.p0  // decohered
         + store.p0 * scatter_all.p0 * retrieve_all.p1;  // lost in retrieval
}

double subtract_prob_coherent_source(int n_g, double alpha_s, double eta_S, double eta_R, double p, double tail) {
  if (!(alpha_s >= 0.0)) throw invalid_parameter("alpha_s must be >= 0");
  return poisson_average(
      alpha_s, [&](std::size_t n_s) { return subtract_prob_fock(n_g, static_cast<int>(n_s), eta_S, eta_R, p); },
      tail);
}

double fidelity(const FieldSpec& fields, double p, double tail) {
  fields.validate();
  check_probability(p, "p");
  return poisson_average(
      fields.alpha_g,
      [&](std::size_t n_g) {
        if (n_g == 0) return 1.0;
        return subtract_prob_coherent_source(static_cast<int>(n_g), fields.alpha_s, fields.eta_S, fields.eta_R, p,
                                             tail);
      },
      tail);
}

SubtractionReport optimize_fidelity(const FieldSpec& fields, double p, const FidelityBounds& bounds) {
  fields.validate();
  check_probability(p, "p");
  if (!(bounds.alpha_s_min > 0.0 && bounds.alpha_s_max > bounds.alpha_s_min))
    throw invalid_parameter("alpha_s bounds must satisfy 0 < min < max");

  auto objective = [&](double alpha_s) {
    FieldSpec f = fields;
    f.alpha_s = alpha_s;
    return fidelity(f, p);
  };
  const ScalarOptimum best =
      scan_then_golden_maximize(objective, bounds.alpha_s_min, bounds.alpha_s_max, bounds.scan_points);

  SubtractionReport report;
  report.fidelity = best.value;
  report.alpha_s_opt = best.x;
  report.location = {{"alpha_s", best.x}};
  report.degenerate = best.degenerate;
  report.boundary_hit = best.boundary_hit;
  const std::size_t terms = poisson_terms(fields.alpha_g);
  for (std::size_t n = 1; n < terms; ++n)
    report.per_fock.emplace_back(static_cast<int>(n), subtract_prob_coherent_source(static_cast<int>(n), best.x,
                                                                                    fields.eta_S, fields.eta_R, p));
  report.meta = {{"mechanism", "decoherence"},
                 {"alpha_g", format_number(fields.alpha_g)},
                 {"eta_S", format_number(fields.eta_S)},
                 {"eta_R", format_number(fields.eta_R)},
                 {"p", format_number(p)},
                 {"alpha_s_min", format_number(bounds.alpha_s_min)},
                 {"alpha_s_max", format_number(bounds.alpha_s_max)},
                 {"scan_points", std::to_string(bounds.scan_points)}};
  return report;
}

SubtractionReport optimize_fock(int n_g, double eta_S, double eta_R, double p, const FidelityBounds& bounds) {
  if (n_g < 1) throw invalid_parameter("optimize_fock needs n_g >= 1");
  auto objective = [&](double alpha_s) { return subtract_prob_coherent_source(n_g, alpha_s, eta_S, eta_R, p); };
  const ScalarOptimum best =
      scan_then_golden_maximize(objective, bounds.alpha_s_min, bounds.alpha_s_max, bounds.scan_points);
  SubtractionReport report;
  report.fidelity = best.value;
  report.alpha_s_opt = best.x;
  report.location = {{"alpha_s", best.x}};
  report.degenerate = best.degenerate;
  report.boundary_hit = best.boundary_hit;
  report.per_fock = {{n_g, best.value}};
  report.meta = {{"mechanism", "decoherence-fock"}, {"n_g", std::to_string(n_g)}, {"p", format_number(p)}};
  return report;
}

} // namespace rydsub
