#include <cmath>
#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "rydsub/errors.hpp"
#include "rydsub/oracles.hpp"
#include "rydsub/retrieval_model.hpp"

using namespace rydsub;

TEST_CASE("per-excitation retrieval efficiency") {
  CHECK(eta_k(3, 0, 0.7, 0.4) == 0.4);
  CHECK(eta_k(1, 2, 1.0, 0.4) == 0.0);
  CHECK(eta_k(2, 9, 1.0, 0.4) == 0.4);
  CHECK(eta_k(2, 3, 0.5, 0.8) == doctest::Approx(0.421875 * 0.8).epsilon(1e-15));
  CHECK_THROWS_AS(eta_k(0, 1, 0.5, 1.0), invalid_parameter);
  CHECK_THROWS_AS(eta_k(1, -1, 0.5, 1.0), invalid_parameter);
  CHECK_THROWS_AS(eta_k(1, 1, 1.5, 1.0), invalid_parameter);
}

TEST_CASE("per-excitation retrieval matches Monte Carlo") {
  const auto mc = mc_retrieval(3, 3, 0.5, 0.9, 100000, 11);
  for (int k = 1; k <= 3; ++k) CHECK(mc[static_cast<std::size_t>(k - 1)].z_score(eta_k(k, 3, 0.5, 0.9)) < 3.0);
}

TEST_CASE("coherent-state efficiency, brute-force double sum") {
  const FieldSpec f{1.7, 2.3, 1.0, 0.6};
  const double p = 0.35;
  double direct = 0.0;
  for (int n = 1; n < 60; ++n) {
    double inner = 0.0;
    // Fock-state average over n_s via the definition of eta_k.
    for (int k = 1; k <= n; ++k)
      for (int ns = 0; ns < 80; ++ns) inner += ref::poisson(ns, f.alpha_s) * eta_k(k, ns, p, 1.0);
    direct += ref::poisson(n, f.alpha_g) * inner;
  }
  direct *= f.eta_R;
  CHECK(mean_retrieved(f, p) == doctest::Approx(direct).epsilon(1e-11));
  CHECK(retrieval_efficiency(f, p) == doctest::Approx(direct / f.alpha_g).epsilon(1e-11));
}

TEST_CASE("no source photons means plain retrieval") {
  for (double ag : {0.05, 0.5, 2.0, 9.0}) {
    const FieldSpec f{ag, 0.0, 1.0, 0.37};
    CHECK(retrieval_efficiency(f, 0.5) == 0.37);
    CHECK(mean_retrieved(f, 0.5) == 0.37 * ag);
  }
}

TEST_CASE("vacuum gate limit is continuous") {
  const FieldSpec f0{0.0, 1.2, 1.0, 0.5};
  const double p = 0.4;
  const FieldSpec tiny{1e-7, 1.2, 1.0, 0.5};
  CHECK(retrieval_efficiency(f0, p) == doctest::Approx(retrieval_efficiency(tiny, p)).epsilon(1e-6));
  CHECK(retrieval_efficiency(f0, p) == doctest::Approx(0.5 * std::exp(-1.2 * p)).epsilon(1e-15));
}

TEST_CASE("ideal subtraction dashed line") {
  for (double ag : {0.5, 1.0, 2.0, 4.0}) {
    const FieldSpec f{ag, 1e4, 1.0, 0.2};
    CHECK(std::abs(mean_retrieved(f, 1.0) - 0.2 * (ag - 1.0 + std::exp(-ag))) < 1e-6);
  }
  const FieldSpec none{2.0, 0.0, 1.0, 0.2}, many{2.0, 1e4, 1.0, 0.2};
  CHECK(mean_retrieved(none, 1.0) - mean_retrieved(many, 1.0) ==
        doctest::Approx(0.2 * (1.0 - std::exp(-2.0))).epsilon(1e-10));
}

TEST_CASE("scattered photon forward map") {
  CHECK(scattered_photons({2.0, 3.0, 1.0, 1.0}, 0.0) == 0.0);
  CHECK(scattered_photons({60.0, 3.0, 1.0, 1.0}, 0.5) == doctest::Approx(3.0).epsilon(1e-12));
  // Closed form of the Poisson average of 1 - (1 - p)^n.
  for (double ag : {0.1, 1.0, 4.0}) {
    const double p = 0.3;
    CHECK(scattered_photons({ag, 2.0, 1.0, 1.0}, p) == doctest::Approx(2.0 * (1.0 - std::exp(-ag * p))).epsilon(1e-12));
    CHECK(alpha_s_for_scattered(scattered_photons({ag, 2.0, 1.0, 1.0}, p), ag, p) == doctest::Approx(2.0));
  }
  CHECK(scattered_photons({1.0, 2.0, 1.0, 1.0}, 1.0) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))));
}

TEST_CASE("single gate photon scatters a fraction p of the source") {
  // Fock n_g = 1: mean scattered = alpha_s p; Monte Carlo over Poisson n_s.
  const double p = 0.45, as = 1.3;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    auto rng = SplitMix64::substream(3, t);
    const int ns = std::poisson_distribution<int>(as)(rng);
    for (int i = 0; i < ns; ++i) hits += rng.uniform() < p;
  }
  const double est = static_cast<double>(hits) / 1e5;
  CHECK(std::abs(est - as * p) < 4.0 * std::sqrt(as * p / 1e5));
}

TEST_CASE("vacuum-component baseline at small gate amplitude") {
  const double p = 0.5, ag = 0.05;
  for (double sbar : {0.005, 0.02, 0.05, 0.1}) {
    const double as = alpha_s_for_scattered(sbar, ag, p);
    const FieldSpec f{ag, as, 1.0, 0.3};
    const double base = no_protection_baseline(sbar, ag, 0.3);
    CHECK(retrieval_efficiency(f, p) == doctest::Approx(base).epsilon(0.02));
  }
}

TEST_CASE("retrieval efficiency monotonicity and protection bound") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double ag = 0.05 + 5.0 * u01(rng), as = 5.0 * u01(rng), p = u01(rng), er = u01(rng);
    const FieldSpec f{ag, as, 1.0, er};
    const double eta = retrieval_efficiency(f, p);
    CHECK(eta <= er * (1.0 + 1e-12));
    CHECK(eta >= no_protection_baseline(scattered_photons(f, p), ag, er) * (1.0 - 1e-12));
    CHECK(retrieval_efficiency({ag, as * 1.1, 1.0, er}, p) <= eta * (1.0 + 1e-12));
  }
}

TEST_CASE("stronger scattering can raise the efficiency by shielding") {
  // Excitations behind the first one are protected once p(1-p)^{k-1}
  // decreases in p, so eta is not monotone in p at fixed alpha_s.
  const FieldSpec f{2.0, 20.0, 1.0, 1.0};
  CHECK(retrieval_efficiency(f, 1.0) > retrieval_efficiency(f, 0.5));
  // A single stored excitation has no shield: monotone decreasing in p.
  const FieldSpec weak{1e-4, 2.0, 1.0, 1.0};
  double prev = 2.0;
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    const double eta = retrieval_efficiency(weak, p);
    CHECK(eta < prev);
    prev = eta;
  }
}

TEST_CASE("efficiency grows with the gate amplitude at fixed scattered number") {
  const double p = 0.5;
  for (double sbar : {0.2, 1.0, 3.0}) {
    double prev = 0.0;
    for (double ag : {0.5, 1.0, 2.0, 4.0}) {
      const FieldSpec f{ag, alpha_s_for_scattered(sbar, ag, p), 1.0, 1.0};
      const double eta = retrieval_efficiency(f, p);
      CHECK(eta > prev);
      prev = eta;
    }
  }
}

TEST_CASE("truncation stability") {
  const FieldSpec f{3.0, 4.0, 1.0, 1.0};
  CHECK(std::abs(retrieval_efficiency(f, 0.3) - retrieval_efficiency(f, 0.3, 1e-24)) < 1e-10);
}
