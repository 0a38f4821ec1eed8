#include "rydsub/retrieval_model.hpp"

#include <cmath>

#include "rydsub/errors.hpp"

namespace rydsub {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw invalid_parameter(std::string(name) + " must lie in [0, 1]");
}

// sum_{k=1}^{n} [1 - exp(-alpha_s p (1-p)^{k-1})], the expected number of
// decohered excitations out of n, accumulated incrementally over n.
class DecoheredSum {
public:
  DecoheredSum(double alpha_s, double p) : alpha_s_(alpha_s), p_(p) {}
  double advance() {
    sum_ -= std::expm1(-alpha_s_ * p_ * shield_);
    shield_ *= 1.0 - p_;
    return sum_;
  }

private:
  double alpha_s_, p_;
  double shield_ = 1.0;
  double sum_ = 0.0;
};

// Poisson average over n_g of DecoheredSum. Working with the deficit keeps
// alpha_s = 0 exact and confines the truncation error to the lost part.
double mean_decohered(const FieldSpec& fields, double p, double tail) {
  DecoheredSum lost(fields.alpha_s, p);
  const std::size_t terms = poisson_terms(fields.alpha_g, tail);
  double total = 0.0;
  for (std::size_t n = 1; n < terms; ++n) total += poisson_pmf(n, fields.alpha_g) * lost.advance();
  return total;
}

} // namespace

double eta_k(int k, int n_s, double p, double eta_R) {
  if (k < 1) throw invalid_parameter("k must be >= 1");
  if (n_s < 0) throw invalid_parameter("n_s must be >= 0");
  check_probability(p, "p");
  check_probability(eta_R, "eta_R");
  const double hit = p * std::pow(1.0 - p, k - 1);
  return eta_R * std::pow(1.0 - hit, n_s);
}

double mean_retrieved(const FieldSpec& fields, double p, double tail) {
  fields.validate();
  check_probability(p, "p");
  return fields.eta_R * (fields.alpha_g - mean_decohered(fields, p, tail));
}

double retrieval_efficiency(const FieldSpec& fields, double p, double tail) {
  fields.validate();
  check_probability(p, "p");
  if (fields.alpha_g == 0.0) return fields.eta_R * std::exp(-fields.alpha_s * p);
  return fields.eta_R * (1.0 - mean_decohered(fields, p, tail) / fields.alpha_g);
}

double scattered_photons(const FieldSpec& fields, double p, double tail) {
  fields.validate();
  check_probability(p, "p");
  const double mean_fraction = poisson_average(
      fields.alpha_g, [&](std::size_t n) { return 1.0 - std::pow(1.0 - p, static_cast<double>(n)); }, tail);
  return fields.alpha_s * mean_fraction;
}

double no_protection_baseline(double scattered, double alpha_g, double eta_R) {
  if (!(alpha_g > 0.0)) throw invalid_parameter("alpha_g must be > 0");
  return eta_R * std::exp(-scattered / alpha_g);
}

double alpha_s_for_scattered(double scattered, double alpha_g, double p) {
  // sum_n P(n; alpha_g) (1 - (1-p)^n) = 1 - exp(-alpha_g p)
  const double fraction = -std::expm1(-alpha_g * p);
  if (!(fraction > 0.0)) throw invalid_parameter("no scattering possible for alpha_g p = 0");
  return scattered / fraction;
}

} // namespace rydsub
