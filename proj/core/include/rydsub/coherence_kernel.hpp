#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include "rydsub/core_model.hpp"

namespace rydsub {

/// Normalized source-field amplitude at a point, with the -G/Omega_s
/// prefactor divided out.
using ComplexAmplitude = std::complex<double>;

/// Per-photon decoherence factor for a pair of gate configurations.
struct PhiValue {
  std::complex<double> value{1.0, 0.0};
  std::size_t n_g = 0;
  double quadrature_estimate_error = 0.0;
  // Diagnostics: excitations of one configuration closer than 2 z_b to each
  // other, or closer than 2 z_b to a medium edge. Evaluation still proceeds.
  bool dilute_violation = false;
  bool near_boundary = false;
};

/// Normalized amplitude along the medium for a fixed set of excitations.
/// The exponent integral is refined once and cached as a prefix table, so
/// repeated evaluation along z costs one short local rule per point.
class TransmissionProfile {
public:
  TransmissionProfile(std::span<const double> positions, const ModelParams& params);
  ~TransmissionProfile();
  TransmissionProfile(TransmissionProfile&&) noexcept;
  TransmissionProfile& operator=(TransmissionProfile&&) noexcept;

  /// 1/(1 + i S(z)) exp(d_b \int_0^z S/(i - S)), S the summed potential.
  ComplexAmplitude amplitude(double z) const;
  /// Only the propagated factor exp(d_b \int_0^z S/(i - S)).
  ComplexAmplitude field_ratio(double z) const;
  double error() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Throws quadrature_failure when the exponent integral cannot meet
/// params.quad_rel_tol.
ComplexAmplitude transmission_amplitude(double z, const GateConfig& config, const ModelParams& params);

/// Decoherence factor Phi = 1 + phi for one scattered source photon.
///
/// Evaluated in the bounded form
///   phi = -i d_b \int_0^L (q_x + q_y - 2 i q_x q_y) exp(U(z)) dz,
///   U(z) = d_b \int_0^z (i (q_x + q_y) - 2) dz',
/// with q_x = 1/(i + S_x), q_y = 1/(i - S_y); this equals
/// i d_b \int (S_x - S_y) e*(z, x) e(z, y) dz for the normalized amplitudes.
/// Panels are forced to break at every excitation and at +-1 z_b around it.
PhiValue phi(const GateConfig& x, const GateConfig& y, const ModelParams& params);

/// Same as above on raw position lists. Positions need not be ordered,
/// distinct, or inside the medium; sizes must agree.
PhiValue phi(std::span<const double> x, std::span<const double> y, const ModelParams& params);

/// Dilute-limit approximation
///   1 + sum_k (1 - p)^{k-1} phi_1(x_k, y_k)
/// over position-ordered pairs, with p the exact per-excitation scattering
/// probability.
PhiValue phi_approx_sum(const GateConfig& x, const GateConfig& y, const ModelParams& params);

/// Infinite-d_b limit: 1 when the first excitations coincide within
/// `spacing`, else 0.
PhiValue phi_infinite_db(const GateConfig& x, const GateConfig& y, double spacing = 1.0 / 64.0);

/// The scattering exponent recovered by integrating
/// V/(i - V) - V/(i + V) over the whole line for a single excitation.
double scattering_exponent_by_quadrature(double abs_tol = 1e-13);

} // namespace rydsub
