#pragma once

#include "rydsub/poisson.hpp"
#include "rydsub/subtraction_model.hpp"

namespace rydsub {

/// Saturable-absorber subtractor: a blockaded ensemble with engineered
/// Rydberg dephasing absorbs one photon and then scatters the rest only
/// weakly.
struct AbsorberParams {
  double d_b = 1.0;
  double delta_over_gamma = 0.0;    // single-photon detuning / intermediate decay
  double eit_over_dephasing = 10.0; // Gamma_EIT / Gamma
  double ratio_min = 10.0;          // lower bound on Gamma_EIT / Gamma

  /// Basic ranges only: d_b >= 0, eit_over_dephasing >= 0.
  void validate() const;
  /// Also requires eit_over_dephasing >= ratio_min > 0.
  void validate_constraint() const;
};

/// p = 1 - exp[-2 d_b (1 + R) / ((1 + R)^2 + (Delta/gamma)^2)], R = Gamma_EIT/Gamma.
double absorb_prob(const AbsorberParams& params);

/// p~ = 1 - exp[-2 d_b / (1 + (Delta/gamma)^2)].
double residual_prob(const AbsorberParams& params);

/// sum_k p (1-p)^{k-1} (1-p~)^{n_g-k}
double absorber_subtract_fock(int n_g, const AbsorberParams& params);

double absorber_fidelity(double alpha_g, const AbsorberParams& params, double tail = default_poisson_tail);

struct AbsorberBounds {
  double ratio_min = 10.0;
  double ratio_max = 1e3;
  double delta_min = 0.1;
  double delta_max = 1e3;
  std::size_t grid = 33;
};

/// Maximizes absorber_fidelity over Delta/gamma and Gamma_EIT/Gamma: a
/// log-spaced grid scan followed by coordinate descent in log coordinates.
/// `location` holds "delta_over_gamma" and "eit_over_dephasing";
/// constraint_active marks an optimum on the ratio_min bound.
SubtractionReport optimize_absorber(double alpha_g, double d_b, const AbsorberBounds& bounds = {});

} // namespace rydsub
