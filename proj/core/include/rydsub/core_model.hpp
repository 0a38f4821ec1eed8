#pragma once

#include <span>
#include <vector>

namespace rydsub {

// All lengths are in units of the blockade radius z_b, where the rescaled
// interaction potential equals one.

struct ModelParams {
  double d_b = 1.0;           // half the optical depth per blockade radius
  double length = 20.0;       // medium length
  double quad_rel_tol = 1e-10;
  int grid_points = 64;       // samples per blockade radius
  double v_cap = 1e12;        // magnitude cap on the rescaled potential

  /// Throws invalid_parameter when an invariant is violated.
  void validate() const;
};

/// Ordered positions of the stored excitations, each inside [0, length].
class GateConfig {
public:
  GateConfig() = default;

  /// Sorts the positions; rejects empty lists, coincident entries and
  /// positions outside [0, length].
  GateConfig(std::vector<double> positions, double length);

  std::span<const double> positions() const { return positions_; }
  std::size_t size() const { return positions_.size(); }
  double front() const { return positions_.front(); }
  double operator[](std::size_t i) const { return positions_[i]; }

private:
  std::vector<double> positions_;
};

struct FieldSpec {
  double alpha_g = 1.0; // mean gate photon number
  double alpha_s = 1.0; // mean source photon number
  double eta_S = 1.0;   // storage efficiency
  double eta_R = 1.0;   // retrieval efficiency

  void validate() const;
};

/// min(|r|^-6, v_cap).
double rescaled_potential(double r, const ModelParams& params);

/// Sum of rescaled_potential(z - x_k) over all excitation positions. Accepts
/// raw positions so callers may place excitations outside the medium.
double total_potential(double z, std::span<const double> positions, const ModelParams& params);
double total_potential(double z, const GateConfig& config, const ModelParams& params);

enum class ScatteringExponent { exact, approximate };

/// Decay exponent c in A = exp(-c d_b). The exact value is
/// -2 Re[(2 pi / 3) (-1)^{11/12}] = (4 pi / 3) cos(pi / 12); the approximate
/// one is 4.
double scattering_exponent(ScatteringExponent kind = ScatteringExponent::exact);

/// Per-excitation scattering probability p = 1 - exp(-c d_b).
double scattering_probability(double d_b, ScatteringExponent kind = ScatteringExponent::exact);

} // namespace rydsub
