#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rydsub/core_model.hpp"

namespace rydsub {

/// Bernoulli tally from a Monte Carlo run.
struct McResult {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double std_error = 0.0; // sqrt(estimate (1 - estimate) / trials)
  std::uint64_t seed = 0;

  static McResult from_counts(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed);
  /// |estimate - expected| in units of the standard error, with the error
  /// floored at 1/trials so exact zero-variance tallies stay finite.
  double z_score(double expected) const;
};

/// SplitMix64. One independent stream per (seed, index) so that every trial
/// draws the same numbers regardless of how trials are spread over threads.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

/// Classical fourth-order Runge-Kutta integration of the steady-state
/// propagation equation dE/dz = d_b [1/(1 + i S(z)) - 1] E over [0, length]
/// with `steps` equal steps. Returns E(length)/E(0).
std::complex<double> ode_field_ratio(std::span<const double> positions, const ModelParams& params,
                                     std::size_t steps);

/// Checked integration: step must not exceed 1/32 z_b, and the results at
/// `step` and `step/2` must agree within `richardson_tol`, otherwise
/// step_too_coarse is thrown. Returns the finer result.
std::complex<double> ode_transmission(std::span<const double> positions, const ModelParams& params, double step,
                                      double richardson_tol = 1e-6);
std::complex<double> ode_transmission(const GateConfig& config, const ModelParams& params, double step,
                                      double richardson_tol = 1e-6);

/// Distribution of the number of distinct decohered excitations after n_s
/// source photons each walk the position-ordered ladder: scatter off the
/// k-th excitation with probability p (1-p)^{k-1}, or pass all of them.
struct McDecoherence {
  McResult none; // no excitation decohered
  McResult one;  // exactly one
  McResult many; // two or more
};

McDecoherence mc_decoherence(int n_g, int n_s, double p, std::uint64_t trials, std::uint64_t seed,
                             unsigned threads = 1);

/// How the source photon number is drawn in mc_pipeline.
struct SourceSampling {
  enum class Kind { fixed, poisson };
  Kind kind = Kind::fixed;
  double value = 0.0; // n_s for fixed, mean for poisson

  static SourceSampling fixed(int n_s) { return {Kind::fixed, static_cast<double>(n_s)}; }
  static SourceSampling poisson(double mean) { return {Kind::poisson, mean}; }
};

/// Storage (Bernoulli eta_S per gate photon), decoherence ladder, retrieval
/// (Bernoulli eta_R per coherent excitation). Success means exactly one of
/// n_g photons is missing at the output; n_g = 0 always succeeds.
McResult mc_pipeline(int n_g, SourceSampling source, double eta_S, double eta_R, double p, std::uint64_t trials,
                     std::uint64_t seed, unsigned threads = 1);

/// Per-excitation retrieval: entry k-1 estimates the probability that the
/// k-th excitation is never scattered upon and is then retrieved.
std::vector<McResult> mc_retrieval(int n_g, int n_s, double p, double eta_R, std::uint64_t trials,
                                   std::uint64_t seed, unsigned threads = 1);

/// Sequential saturable absorber: before the first absorption each photon
/// is absorbed with probability p; afterwards each is lost with p_res.
/// Success means exactly one absorption and no residual loss.
McResult mc_absorber(int n_g, double p, double p_res, std::uint64_t trials, std::uint64_t seed,
                     unsigned threads = 1);

} // namespace rydsub
