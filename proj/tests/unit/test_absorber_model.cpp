#include <cmath>

#include "doctest.h"
#include "rydsub/absorber_model.hpp"
#include "rydsub/errors.hpp"
#include "rydsub/oracles.hpp"

using namespace rydsub;

namespace {

AbsorberParams make(double d_b, double delta, double ratio) {
  AbsorberParams a;
  a.d_b = d_b;
  a.delta_over_gamma = delta;
  a.eit_over_dephasing = ratio;
  return a;
}

} // namespace

TEST_CASE("absorption and residual probabilities") {
  CHECK(absorb_prob(make(1.0, 2.0, 1.0)) == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-15));
  CHECK(residual_prob(make(1.0, 0.0, 10.0)) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-15));
  CHECK(absorb_prob(make(1.0, 1e9, 10.0)) < 1e-12);
  CHECK(residual_prob(make(1.0, 1e9, 10.0)) < 1e-12);
  for (double d_b : {0.1, 1.0, 7.0})
    for (double delta : {0.0, 0.5, 3.0}) CHECK(absorb_prob(make(d_b, delta, 0.0)) == residual_prob(make(d_b, delta, 0.0)));

  double prev = 1.0;
  for (double delta = 0.0; delta < 50.0; delta += 0.5) {
    const double p = absorb_prob(make(2.0, delta, 10.0));
    CHECK(p < prev);
    CHECK(p >= 0.0);
    prev = p;
  }
  CHECK_THROWS_AS(make(1.0, 0.0, 5.0).validate_constraint(), invalid_parameter);
  CHECK_NOTHROW(make(1.0, 0.0, 10.0).validate_constraint());
}

TEST_CASE("fock subtraction by absorption") {
  auto a = make(1.0, 0.5, 10.0);
  const double p = absorb_prob(a), pt = residual_prob(a);
  CHECK(absorber_subtract_fock(1, a) == doctest::Approx(p).epsilon(1e-15));
  for (int n = 2; n <= 10; ++n)
    CHECK(std::abs(absorber_subtract_fock(n, a) - (p * std::pow(1.0 - pt, n - 1) + (1.0 - p) * absorber_subtract_fock(n - 1, a))) < 1e-12);
  const auto mc = mc_absorber(3, 0.9, 0.1, 100000, 17);
  CHECK(mc.z_score(0.819) < 3.0);
  CHECK_THROWS_AS(absorber_subtract_fock(0, a), invalid_parameter);
}

TEST_CASE("absorber fidelity") {
  CHECK(absorber_fidelity(0.0, make(1.0, 0.5, 10.0)) == 1.0);
  const double f = absorber_fidelity(2.0, make(0.0, 0.5, 10.0));
  CHECK(f == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("constrained optimization") {
  const auto r0 = optimize_absorber(2.0, 0.0);
  CHECK(r0.fidelity == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(r0.degenerate);

  double prev = 0.0;
  for (double d_b : {0.25, 0.5, 1.0, 2.0, 4.0, 6.0}) {
    const auto r = optimize_absorber(2.0, d_b);
    CHECK(r.fidelity >= prev - 1e-12);
    CHECK(r.location.at("eit_over_dephasing") >= 10.0);
    CHECK(r.location.at("delta_over_gamma") >= 0.1);
    CHECK(r.constraint_active);
    CHECK_FALSE(r.boundary_hit);
    prev = r.fidelity;
  }

  AbsorberBounds loose;
  loose.ratio_min = 20.0;
  CHECK(optimize_absorber(2.0, 2.0, loose).fidelity <= optimize_absorber(2.0, 2.0).fidelity + 1e-12);
}
