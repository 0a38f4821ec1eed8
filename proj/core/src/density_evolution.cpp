#include "rydsub/density_evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rydsub/coherence_kernel.hpp"
#include "rydsub/errors.hpp"
#include "rydsub/format.hpp"
#include "rydsub/parallel.hpp"

namespace rydsub {
namespace {

using cplx = std::complex<double>;

std::vector<double> uniform_axis(double lo, double hi, int per_zb) {
  const auto intervals = std::max<long>(1, std::lround((hi - lo) * per_zb));
  std::vector<double> axis(static_cast<std::size_t>(intervals) + 1);
  const double step = (hi - lo) / static_cast<double>(intervals);
  for (std::size_t i = 0; i < axis.size(); ++i) axis[i] = lo + step * static_cast<double>(i);
  axis.back() = hi;
  return axis;
}

cplx power(cplx base, int n) {
  if (n == 0) return 1.0;
  if (base == 0.0) return 0.0;
  return std::exp(static_cast<double>(n) * std::log(base));
}

} // namespace

cplx SpinWaveMode::raw(double z) const {
  switch (kind) {
  case Kind::gaussian: {
    const double u = (z - center) / width;
    return std::exp(-0.25 * u * u); // |c|^2 has standard deviation `width`
  }
  case Kind::flat:
    return std::abs(z - center) <= 0.5 * width ? 1.0 : 0.0;
  case Kind::custom_table:
    break;
  }
  throw invalid_parameter("custom-table modes have no closed form; sample them on their axis");
}

std::vector<cplx> SpinWaveMode::sample(const std::vector<double>& axis) const {
  std::vector<cplx> amp;
  if (kind == Kind::custom_table) {
    if (table.size() != axis.size()) throw grid_mismatch("custom mode table does not match the axis");
    amp = table;
  } else {
    amp.reserve(axis.size());
    for (double z : axis) amp.push_back(raw(z));
  }
  const double dz = axis.size() > 1 ? axis[1] - axis[0] : 1.0;
  double norm = 0.0;
  for (const auto& c : amp) norm += std::norm(c) * dz;
  if (!(norm > 0.0)) throw invalid_parameter("spin-wave mode vanishes on the grid");
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& c : amp) c *= scale;
  return amp;
}

std::vector<double> SpinWaveMode::support_axis(double length, int per_zb) const {
  double lo = 0.0, hi = length;
  if (kind == Kind::gaussian) {
    lo = center - 4.0 * width;
    hi = center + 4.0 * width;
  } else if (kind == Kind::flat) {
    lo = center - 0.5 * width;
    hi = center + 0.5 * width;
  }
  lo = std::max(lo, 0.0);
  hi = std::min(hi, length);
  if (!(hi > lo)) throw invalid_parameter("spin-wave mode support lies outside the medium");
  return uniform_axis(lo, hi, per_zb);
}

std::string SpinWaveMode::describe() const {
  switch (kind) {
  case Kind::gaussian:
    return "gaussian(center=" + format_number(center) + ",sigma=" + format_number(width) + ")";
  case Kind::flat:
    return "flat(center=" + format_number(center) + ",width=" + format_number(width) + ")";
  case Kind::custom_table:
    return "custom-table(" + std::to_string(table.size()) + ")";
  }
  return "unknown";
}

double DensityMatrixGrid::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < size(); ++i) t += at(i, i).real();
  return t * spacing();
}

double DensityMatrixGrid::purity() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * spacing() * spacing();
}

double DensityMatrixGrid::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i; j < size(); ++j) worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
  return worst;
}

PhiTable slice_phi_table(double r, const std::vector<double>& axis, const ModelParams& params, unsigned threads) {
  params.validate();
  const std::size_t n = axis.size();
  PhiTable table{axis, std::vector<cplx>(n * n, cplx{1.0, 0.0}), 0.0};
  std::vector<double> row_error(n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::array<double, 2> x{axis[i], r}, y{axis[j], r};
      const PhiValue v = phi(std::span<const double>(x), std::span<const double>(y), params);
      table.values[i * n + j] = v.value;
      table.values[j * n + i] = std::conj(v.value);
      row_error[i] = std::max(row_error[i], v.quadrature_estimate_error);
    }
  });
  table.max_error = n ? *std::max_element(row_error.begin(), row_error.end()) : 0.0;
  return table;
}

DensityMatrixGrid evolve_density(const DensityMatrixGrid& rho0, int n_s, const PhiTable& phi_table) {
  if (n_s < 0) throw invalid_parameter("n_s must be >= 0");
  if (phi_table.axis != rho0.axis || phi_table.values.size() != rho0.values.size())
    throw grid_mismatch("phi table and density matrix use different grids");
  DensityMatrixGrid out = rho0;
  out.n_s = rho0.n_s + n_s;
  if (n_s == 0) return out;
  const std::size_t n = rho0.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.at(i, i) = rho0.at(i, i) * power(phi_table.at(i, i), n_s);
    for (std::size_t j = i + 1; j < n; ++j) {
      out.at(i, j) = rho0.at(i, j) * power(phi_table.at(i, j), n_s);
      out.at(j, i) = std::conj(out.at(i, j));
    }
  }
  return out;
}

DensityMatrixGrid two_excitation_slice(double r, int n_s, const SpinWaveMode& mode, const ModelParams& params,
                                       unsigned threads) {
  if (!std::isfinite(r)) throw invalid_parameter("slice coordinate must be finite");
  if (n_s < 0) throw invalid_parameter("n_s must be >= 0");
  if (mode.kind == SpinWaveMode::Kind::custom_table)
    throw invalid_parameter("two_excitation_slice needs a closed-form mode to evaluate it at r");
  const auto axis = mode.support_axis(params.length, params.grid_points);
  const auto amp = mode.sample(axis);

  // Normalize the continuous mode with the same constant as the grid samples.
  const cplx scale = amp.front() / mode.raw(axis.front());
  const double weight_r = std::norm(mode.raw(r) * scale);

  DensityMatrixGrid rho0;
  rho0.axis = axis;
  rho0.values.resize(axis.size() * axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i)
    for (std::size_t j = 0; j < axis.size(); ++j) rho0.at(i, j) = weight_r * amp[i] * std::conj(amp[j]);
  rho0.meta = {{"kind", "two_excitation_slice"},
               {"r", format_number(r)},
               {"mode", mode.describe()},
               {"d_b", format_number(params.d_b)},
               {"length", format_number(params.length)},
               {"grid_points_per_zb", std::to_string(params.grid_points)}};
  if (n_s == 0) return rho0;

  const PhiTable table = slice_phi_table(r, axis, params, threads);
  DensityMatrixGrid out = evolve_density(rho0, n_s, table);
  out.meta["phi_max_quadrature_error"] = format_number(table.max_error);
  return out;
}

DensityMatrixGrid reduced_density(int k, int n_g, int n_s, double p, const SpinWaveMode& mode_k,
                                  const ModelParams& params, SinglePhiModel model, unsigned threads) {
  if (n_g < 1 || k < 1 || k > n_g)
    throw index_out_of_range("reduced_density: k = " + std::to_string(k) + " outside [1, " +
                             std::to_string(n_g) + "]");
  if (n_s < 0) throw invalid_parameter("n_s must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw invalid_parameter("p must lie in [0, 1]");

  const auto axis = mode_k.kind == SpinWaveMode::Kind::custom_table
                        ? [&] {
                            std::vector<double> a(mode_k.table.size());
                            const double step = params.length / static_cast<double>(a.size() - 1);
                            for (std::size_t i = 0; i < a.size(); ++i) a[i] = step * static_cast<double>(i);
                            return a;
                          }()
                        : mode_k.support_axis(params.length, params.grid_points);
  const auto amp = mode_k.sample(axis);
  const std::size_t n = axis.size();

  DensityMatrixGrid rho0;
  rho0.axis = axis;
  rho0.values.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho0.at(i, j) = amp[i] * std::conj(amp[j]);
  rho0.meta = {{"kind", "reduced_density"},
               {"k", std::to_string(k)},
               {"n_g", std::to_string(n_g)},
               {"p", format_number(p)},
               {"mode", mode_k.describe()},
               {"phi_model", model == SinglePhiModel::quadrature ? "quadrature" : "piecewise"}};

  // Shielding weight A^{k-1}, A = 1 - p, with 0^0 = 1.
  const double shield = k == 1 ? 1.0 : std::pow(1.0 - p, k - 1);
  PhiTable table{axis, std::vector<cplx>(n * n, cplx{1.0, 0.0}), 0.0};
  if (n_s > 0) {
    parallel_for(n, threads, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        cplx single_phi = -p;
        if (model == SinglePhiModel::quadrature)
          single_phi = phi(std::span<const double>(&axis[i], 1), std::span<const double>(&axis[j], 1), params).value -
                       1.0;
        const cplx factor = 1.0 + shield * single_phi;
        table.values[i * n + j] = factor;
        table.values[j * n + i] = std::conj(factor);
      }
    });
  }
  return evolve_density(rho0, n_s, table);
}

} // namespace rydsub
