#pragma once

#include <string>
#include <vector>

#include "rydsub/core_model.hpp"
#include "rydsub/density_evolution.hpp"
#include "rydsub/poisson.hpp"

namespace rydsub {

/// A sweep result: one value per axis point plus the parameters used.
struct EfficiencyCurve {
  std::string axis_name;
  std::string value_name;
  std::vector<double> axis;
  std::vector<double> values;
  Metadata meta;
};

/// Retrieval efficiency of the k-th stored excitation after n_s source
/// photons: eta_R [1 - p (1 - p)^{k-1}]^{n_s}.
double eta_k(int k, int n_s, double p, double eta_R);

/// Coherent-state total retrieval efficiency
///   eta = eta_R e^{-a_g}/a_g sum_{n_g>=1} a_g^{n_g}/n_g! sum_{k=1}^{n_g} exp(-a_s p (1-p)^{k-1}),
/// evaluated as eta_R minus the expected decohered fraction.
/// For alpha_g = 0 the continuous limit eta_R exp(-alpha_s p) is returned.
double retrieval_efficiency(const FieldSpec& fields, double p, double tail = default_poisson_tail);

/// Mean number of retrieved gate photons, alpha_g * eta.
double mean_retrieved(const FieldSpec& fields, double p, double tail = default_poisson_tail);

/// Mean number of source photons scattered by the stored excitations,
///   alpha_s sum_{n_g} P(n_g; alpha_g) (1 - (1 - p)^{n_g}).
double scattered_photons(const FieldSpec& fields, double p, double tail = default_poisson_tail);

/// Retrieval with every stored excitation decohered by any scattering:
/// eta_R exp(-scattered / alpha_g).
double no_protection_baseline(double scattered, double alpha_g, double eta_R);

/// Source photon number that yields `scattered` scattered photons.
double alpha_s_for_scattered(double scattered, double alpha_g, double p);

} // namespace rydsub
