#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rydsub/core_model.hpp"
#include "rydsub/density_evolution.hpp"
#include "rydsub/poisson.hpp"

namespace rydsub {

/// Probabilities that no photon (p0) or exactly one photon (p1) is lost in a
/// stage.
struct StageProbs {
  double p0 = 1.0;
  double p1 = 0.0;
};

/// Outcome of a subtraction-efficiency optimization.
struct SubtractionReport {
  double fidelity = 0.0;
  double alpha_s_opt = 0.0;
  std::vector<std::pair<int, double>> per_fock; // (n_g, P_1) at the optimum
  std::map<std::string, double> location;       // optimizer coordinates
  bool degenerate = false;
  bool boundary_hit = false;
  bool constraint_active = false;
  Metadata meta;
};

/// Linear storage: (eta_S^{n_g}, n_g (1 - eta_S) eta_S^{n_g - 1}).
StageProbs storage_probs(int n_g, double eta_S);

/// Source-photon scattering off n_g stored excitations, n_s photons:
///   p0 = (1-p)^{n_g n_s}
///   p1 = sum_k [(p (1-p)^{k-1} + (1-p)^{n_g})^{n_s} - (1-p)^{n_g n_s}]
StageProbs decoherence_probs(int n_g, int n_s, double p);

/// Linear retrieval of n coherent excitations.
StageProbs retrieval_probs(int n, double eta_R);

/// Probability that exactly one of n_g gate photons is removed by storage,
/// decoherence or retrieval with n_s source photons.
double subtract_prob_fock(int n_g, int n_s, double eta_S, double eta_R, double p);

/// subtract_prob_fock averaged over a coherent source with mean alpha_s.
double subtract_prob_coherent_source(int n_g, double alpha_s, double eta_S, double eta_R, double p,
                                     double tail = default_poisson_tail);

/// Coherent-gate subtraction efficiency
///   F = e^{-a_g} [1 + sum_{n_g>=1} a_g^{n_g}/n_g! P_1(n_g, a_s)],
/// counting the vacuum component as success.
double fidelity(const FieldSpec& fields, double p, double tail = default_poisson_tail);

struct FidelityBounds {
  double alpha_s_min = 1e-3;
  double alpha_s_max = 50.0;
  std::size_t scan_points = 17;
};

/// Maximizes fidelity over alpha_s (fields.alpha_s is ignored).
SubtractionReport optimize_fidelity(const FieldSpec& fields, double p, const FidelityBounds& bounds = {});

/// Maximizes subtract_prob_coherent_source(n_g, .) over alpha_s.
SubtractionReport optimize_fock(int n_g, double eta_S, double eta_R, double p, const FidelityBounds& bounds = {});

} // namespace rydsub
