#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rydsub/core_model.hpp"

namespace rydsub {

using Metadata = std::map<std::string, std::string>;

/// Spatial mode of a stored excitation.
struct SpinWaveMode {
  enum class Kind { gaussian, flat, custom_table };

  Kind kind = Kind::gaussian;
  double center = 10.0;
  double width = 3.0; // standard deviation (gaussian) or full width (flat)
  std::vector<std::complex<double>> table; // custom_table only, one value per axis point

  static SpinWaveMode gaussian(double center, double width) { return {Kind::gaussian, center, width, {}}; }
  static SpinWaveMode flat(double center, double width) { return {Kind::flat, center, width, {}}; }

  /// Unnormalized amplitude at z (gaussian and flat only).
  std::complex<double> raw(double z) const;

  /// Amplitudes on `axis`, normalized so that sum |c|^2 dz = 1.
  std::vector<std::complex<double>> sample(const std::vector<double>& axis) const;

  /// Uniform axis with `per_zb` points per blockade radius covering the
  /// mode support (+-4 sigma for gaussian) clipped to [0, length].
  std::vector<double> support_axis(double length, int per_zb) const;

  std::string describe() const;
};

/// Square complex matrix sampled on a uniform coordinate axis, row-major.
struct DensityMatrixGrid {
  std::vector<double> axis;
  std::vector<std::complex<double>> values;
  int n_s = 0;
  Metadata meta;

  std::size_t size() const { return axis.size(); }
  double spacing() const { return axis.size() > 1 ? axis[1] - axis[0] : 1.0; }
  std::complex<double>& at(std::size_t i, std::size_t j) { return values[i * axis.size() + j]; }
  const std::complex<double>& at(std::size_t i, std::size_t j) const { return values[i * axis.size() + j]; }

  /// sum_i rho_ii dz
  double trace() const;
  /// sum_ij |rho_ij|^2 dz^2
  double purity() const;
  /// max_ij |rho_ij - conj(rho_ji)|
  double hermiticity_defect() const;
};

/// Phi sampled on the same axis as a density grid.
struct PhiTable {
  std::vector<double> axis;
  std::vector<std::complex<double>> values;
  double max_error = 0.0;

  const std::complex<double>& at(std::size_t i, std::size_t j) const { return values[i * axis.size() + j]; }
};

/// Phi_2((x, r), (y, r)) for all x, y on `axis`. Only the upper triangle is
/// integrated; the lower one is filled by Hermitian conjugation and the
/// diagonal is exactly one. `r` may lie outside the medium.
PhiTable slice_phi_table(double r, const std::vector<double>& axis, const ModelParams& params,
                         unsigned threads = 1);

/// rho_{n_s} = Phi^{n_s} rho_0 elementwise, computed as exp(n_s log Phi).
/// Throws grid_mismatch when the axes differ.
DensityMatrixGrid evolve_density(const DensityMatrixGrid& rho0, int n_s, const PhiTable& phi_table);

/// rho_{n_s}(x, r, y, r) for two excitations stored in the same mode.
DensityMatrixGrid two_excitation_slice(double r, int n_s, const SpinWaveMode& mode, const ModelParams& params,
                                       unsigned threads = 1);

enum class SinglePhiModel { quadrature, piecewise };

/// Reduced single-excitation matrix of the k-th (1-based) excitation,
/// [1 + (1 - p)^{k-1} phi(x, y)]^{n_s} rho_0^{(k)}(x, y). With the piecewise
/// model phi is 0 on the diagonal and -p elsewhere.
DensityMatrixGrid reduced_density(int k, int n_g, int n_s, double p, const SpinWaveMode& mode_k,
                                  const ModelParams& params, SinglePhiModel model = SinglePhiModel::quadrature,
                                  unsigned threads = 1);

} // namespace rydsub
