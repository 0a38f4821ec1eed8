#include "rydsub/coherence_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rydsub/errors.hpp"
#include "rydsub/quadrature.hpp"

namespace rydsub {
namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

std::vector<double> forced_edges(double length, std::span<const double> x, std::span<const double> y) {
  std::vector<double> interior;
  interior.reserve(3 * (x.size() + y.size()));
  for (auto list : {x, y})
    for (double c : list) {
      interior.push_back(c - 1.0);
      interior.push_back(c);
      interior.push_back(c + 1.0);
    }
  return quadrature::panel_edges(0.0, length, interior);
}

bool too_close(std::span<const double> v, double min_sep) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] - s[i - 1] < min_sep) return true;
  return false;
}

bool near_edge(std::span<const double> v, double length) {
  return std::any_of(v.begin(), v.end(), [&](double c) { return c < 2.0 || c > length - 2.0; });
}

// d_b S/(i - S) in the bounded form d_b (i q - 1), q = 1/(i - S).
struct ExponentIntegrand {
  std::vector<double> positions;
  ModelParams params;
  cplx operator()(double z) const {
    const double s = total_potential(z, positions, params);
    const cplx q = 1.0 / (I - s);
    return params.d_b * (I * q - 1.0);
  }
};

using ExponentTable = quadrature::Cumulative<cplx, ExponentIntegrand>;

} // namespace

struct TransmissionProfile::Impl {
  ExponentTable table;
  std::vector<double> positions;
  ModelParams params;
};

TransmissionProfile::TransmissionProfile(std::span<const double> positions, const ModelParams& params) {
  params.validate();
  const auto edges = forced_edges(params.length, positions, {});
  ExponentIntegrand g{{positions.begin(), positions.end()}, params};
  ExponentTable table(g, edges, 0.1 * params.quad_rel_tol);
  if (!table.converged() && table.error() > params.quad_rel_tol)
    throw quadrature_failure("transmission exponent did not converge (error " +
                             std::to_string(table.error()) + ")");
  impl_ = std::make_unique<Impl>(Impl{std::move(table), {positions.begin(), positions.end()}, params});
}

TransmissionProfile::~TransmissionProfile() = default;
TransmissionProfile::TransmissionProfile(TransmissionProfile&&) noexcept = default;
TransmissionProfile& TransmissionProfile::operator=(TransmissionProfile&&) noexcept = default;

ComplexAmplitude TransmissionProfile::field_ratio(double z) const { return std::exp(impl_->table(z)); }

ComplexAmplitude TransmissionProfile::amplitude(double z) const {
  const double s = total_potential(z, impl_->positions, impl_->params);
  // 1/(1 + i S) = i/(i - S)
  return I / (I - s) * field_ratio(z);
}

double TransmissionProfile::error() const { return impl_->table.error(); }

ComplexAmplitude transmission_amplitude(double z, const GateConfig& config, const ModelParams& params) {
  if (z < 0.0 || z > params.length) throw invalid_parameter("z outside [0, length]");
  return TransmissionProfile(config.positions(), params).amplitude(z);
}

PhiValue phi(std::span<const double> x, std::span<const double> y, const ModelParams& params) {
  if (x.size() != y.size())
    throw dimension_mismatch("phi: configurations hold " + std::to_string(x.size()) + " and " +
                             std::to_string(y.size()) + " excitations");
  params.validate();

  PhiValue out;
  out.n_g = x.size();
  out.dilute_violation = too_close(x, 2.0) || too_close(y, 2.0);
  out.near_boundary = near_edge(x, params.length) || near_edge(y, params.length);

  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  if (xs == ys || params.d_b == 0.0) return out;

  const double d_b = params.d_b;
  const auto edges = forced_edges(params.length, xs, ys);
  auto pair_q = [&](double z) {
    const double sx = total_potential(z, xs, params);
    const double sy = total_potential(z, ys, params);
    return std::pair<cplx, cplx>{1.0 / (I + sx), 1.0 / (I - sy)};
  };
  auto exponent = [&](double z) {
    const auto [qx, qy] = pair_q(z);
    return d_b * (I * (qx + qy) - 2.0);
  };
  const double tol = params.quad_rel_tol;
  quadrature::Cumulative<cplx, decltype(exponent)> prefix(exponent, edges, 0.1 * tol);

  auto integrand = [&](double z) {
    const auto [qx, qy] = pair_q(z);
    return -I * d_b * (qx + qy - 2.0 * I * qx * qy) * std::exp(prefix(z));
  };
  const auto res = quadrature::integrate(integrand, edges, tol);

  out.value += res.value;
  out.quadrature_estimate_error = res.error + prefix.error();
  if ((!res.converged || !prefix.converged()) && out.quadrature_estimate_error > tol)
    throw quadrature_failure("phi: estimated error " + std::to_string(out.quadrature_estimate_error) +
                             " exceeds tolerance");
  return out;
}

PhiValue phi(const GateConfig& x, const GateConfig& y, const ModelParams& params) {
  return phi(x.positions(), y.positions(), params);
}

PhiValue phi_approx_sum(const GateConfig& x, const GateConfig& y, const ModelParams& params) {
  if (x.size() != y.size()) throw dimension_mismatch("phi_approx_sum: configuration sizes differ");
  PhiValue out;
  out.n_g = x.size();
  out.dilute_violation = too_close(x.positions(), 2.0) || too_close(y.positions(), 2.0);
  out.near_boundary = near_edge(x.positions(), params.length) || near_edge(y.positions(), params.length);

  const double transmit = 1.0 - scattering_probability(params.d_b);
  double shield = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xk = x[k], yk = y[k];
    const PhiValue single = phi(std::span<const double>(&xk, 1), std::span<const double>(&yk, 1), params);
    out.value += shield * (single.value - 1.0);
    out.quadrature_estimate_error += shield * single.quadrature_estimate_error;
    shield *= transmit;
  }
  return out;
}

PhiValue phi_infinite_db(const GateConfig& x, const GateConfig& y, double spacing) {
  if (x.size() != y.size()) throw dimension_mismatch("phi_infinite_db: configuration sizes differ");
  PhiValue out;
  out.n_g = x.size();
  out.value = std::abs(x.front() - y.front()) <= spacing ? 1.0 : 0.0;
  return out;
}

double scattering_exponent_by_quadrature(double abs_tol) {
  // V/(i - V) - V/(i + V) = i (q_- + q_+) - 2 with q_-+ = 1/(i -+ V).
  ModelParams unit;
  const double reach = 40.0;
  auto integrand = [&](double z) {
    const double v = rescaled_potential(z, unit);
    return (I * (1.0 / (I - v) + 1.0 / (I + v)) - 2.0).real();
  };
  const std::vector<double> edges{-reach, -1.0, 0.0, 1.0, reach};
  const auto res = quadrature::integrate(integrand, edges, abs_tol);
  // Tails beyond the window contribute 2 \int_reach^inf r^-12 dr each side.
  const double tail = 2.0 * std::pow(reach, -11.0) / 11.0;
  return -(res.value - 2.0 * tail);
}

} // namespace rydsub
