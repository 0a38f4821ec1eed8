#include "rydsub/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "rydsub/errors.hpp"
#include "rydsub/parallel.hpp"

namespace rydsub {
namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw invalid_parameter(std::string(name) + " must lie in [0, 1]");
}

// Trials are grouped in fixed blocks; each block sums into its own slot.
constexpr std::uint64_t block_size = 4096;

template <class Trial>
std::vector<std::uint64_t> run_blocks(std::uint64_t trials, std::uint64_t seed, unsigned threads, std::size_t slots,
                                      Trial&& trial) {
  const std::uint64_t blocks = (trials + block_size - 1) / block_size;
  std::vector<std::vector<std::uint64_t>> partial(blocks, std::vector<std::uint64_t>(slots, 0));
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t first = b * block_size;
    const std::uint64_t last = std::min(trials, first + block_size);
    for (std::uint64_t t = first; t < last; ++t) {
      SplitMix64 rng = SplitMix64::substream(seed, t);
      trial(rng, partial[b]);
    }
  });
  std::vector<std::uint64_t> totals(slots, 0);
  for (const auto& p : partial)
    for (std::size_t s = 0; s < slots; ++s) totals[s] += p[s];
  return totals;
}

// Index of the excitation a photon scatters off, or n if it passes all.
int ladder(SplitMix64& rng, int n, double p) {
  for (int k = 0; k < n; ++k)
    if (rng.uniform() < p) return k;
  return n;
}

void check_trials(std::uint64_t trials) {
  if (trials < 1000) throw invalid_parameter("Monte Carlo runs need at least 1000 trials");
}

} // namespace

McResult McResult::from_counts(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed) {
  McResult r;
  r.trials = trials;
  r.successes = successes;
  r.seed = seed;
  r.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  r.std_error = trials ? std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials)) : 0.0;
  return r;
}

double McResult::z_score(double expected) const {
  const double floor = 1.0 / static_cast<double>(std::max<std::uint64_t>(trials, 1));
  return std::abs(estimate - expected) / std::max(std_error, floor);
}

SplitMix64 SplitMix64::substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

SplitMix64::result_type SplitMix64::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

cplx ode_field_ratio(std::span<const double> positions, const ModelParams& params, std::size_t steps) {
  params.validate();
  if (steps == 0) throw invalid_parameter("ode_field_ratio needs at least one step");
  auto rate = [&](double z) {
    const double s = total_potential(z, positions, params);
    // 1/(1 + i S) - 1 = S/(i - S) = i/(i - S) - 1
    return params.d_b * (I / (I - s) - 1.0);
  };
  const double h = params.length / static_cast<double>(steps);
  cplx e = 1.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double z = h * static_cast<double>(n);
    const cplx r_mid = rate(z + 0.5 * h);
    const cplx k1 = rate(z) * e;
    const cplx k2 = r_mid * (e + 0.5 * h * k1);
    const cplx k3 = r_mid * (e + 0.5 * h * k2);
    const cplx k4 = rate(z + h) * (e + h * k3);
    e += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return e;
}

cplx ode_transmission(std::span<const double> positions, const ModelParams& params, double step,
                      double richardson_tol) {
  if (!(step > 0.0) || step > 1.0 / 32.0) throw step_too_coarse("ode step must lie in (0, 1/32] z_b");
  const auto steps = static_cast<std::size_t>(std::ceil(params.length / step));
  const cplx coarse = ode_field_ratio(positions, params, steps);
  const cplx fine = ode_field_ratio(positions, params, 2 * steps);
  if (std::abs(coarse - fine) > richardson_tol)
    throw step_too_coarse("ode step " + std::to_string(step) + " fails the Richardson check (difference " +
                          std::to_string(std::abs(coarse - fine)) + ")");
  return fine;
}

cplx ode_transmission(const GateConfig& config, const ModelParams& params, double step, double richardson_tol) {
  return ode_transmission(config.positions(), params, step, richardson_tol);
}

McDecoherence mc_decoherence(int n_g, int n_s, double p, std::uint64_t trials, std::uint64_t seed,
                             unsigned threads) {
  check_trials(trials);
  check_probability(p, "p");
  if (n_g < 0 || n_s < 0) throw invalid_parameter("n_g and n_s must be >= 0");
  const auto counts = run_blocks(trials, seed, threads, 3, [&](SplitMix64& rng, std::vector<std::uint64_t>& slot) {
    std::vector<char> hit(static_cast<std::size_t>(n_g), 0);
    int distinct = 0;
    for (int photon = 0; photon < n_s; ++photon) {
      const int k = ladder(rng, n_g, p);
      if (k < n_g && !hit[static_cast<std::size_t>(k)]) {
        hit[static_cast<std::size_t>(k)] = 1;
        ++distinct;
      }
    }
    ++slot[static_cast<std::size_t>(std::min(distinct, 2))];
  });
  return {McResult::from_counts(counts[0], trials, seed), McResult::from_counts(counts[1], trials, seed),
          McResult::from_counts(counts[2], trials, seed)};
}

McResult mc_pipeline(int n_g, SourceSampling source, double eta_S, double eta_R, double p, std::uint64_t trials,
                     std::uint64_t seed, unsigned threads) {
  check_trials(trials);
  check_probability(p, "p");
  check_probability(eta_S, "eta_S");
  check_probability(eta_R, "eta_R");
  if (n_g < 0) throw invalid_parameter("n_g must be >= 0");
  if (!(source.value >= 0.0)) throw invalid_parameter("source photon number must be >= 0");
  const auto counts = run_blocks(trials, seed, threads, 1, [&](SplitMix64& rng, std::vector<std::uint64_t>& slot) {
    if (n_g == 0) {
      ++slot[0];
      return;
    }
    int n_s = static_cast<int>(source.value);
    if (source.kind == SourceSampling::Kind::poisson)
      n_s = source.value > 0.0 ? std::poisson_distribution<int>(source.value)(rng) : 0;
    int stored = 0;
    for (int i = 0; i < n_g; ++i) stored += rng.uniform() < eta_S;
    std::vector<char> hit(static_cast<std::size_t>(stored), 0);
    for (int photon = 0; photon < n_s; ++photon) {
      const int k = ladder(rng, stored, p);
      if (k < stored) hit[static_cast<std::size_t>(k)] = 1;
    }
    int retrieved = 0;
    for (int k = 0; k < stored; ++k)
      if (!hit[static_cast<std::size_t>(k)]) retrieved += rng.uniform() < eta_R;
    if (n_g - retrieved == 1) ++slot[0];
  });
  return McResult::from_counts(counts[0], trials, seed);
}

std::vector<McResult> mc_retrieval(int n_g, int n_s, double p, double eta_R, std::uint64_t trials,
                                   std::uint64_t seed, unsigned threads) {
  check_trials(trials);
  check_probability(p, "p");
  check_probability(eta_R, "eta_R");
  if (n_g < 1 || n_s < 0) throw invalid_parameter("mc_retrieval needs n_g >= 1 and n_s >= 0");
  const auto slots = static_cast<std::size_t>(n_g);
  const auto counts =
      run_blocks(trials, seed, threads, slots, [&](SplitMix64& rng, std::vector<std::uint64_t>& slot) {
        std::vector<char> hit(slots, 0);
        for (int photon = 0; photon < n_s; ++photon) {
          const int k = ladder(rng, n_g, p);
          if (k < n_g) hit[static_cast<std::size_t>(k)] = 1;
        }
        for (std::size_t k = 0; k < slots; ++k)
          if (!hit[k] && rng.uniform() < eta_R) ++slot[k];
      });
  std::vector<McResult> out;
  for (auto c : counts) out.push_back(McResult::from_counts(c, trials, seed));
  return out;
}

McResult mc_absorber(int n_g, double p, double p_res, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  check_trials(trials);
  check_probability(p, "p");
  check_probability(p_res, "p_res");
  if (n_g < 1) throw invalid_parameter("mc_absorber needs n_g >= 1");
  const auto counts = run_blocks(trials, seed, threads, 1, [&](SplitMix64& rng, std::vector<std::uint64_t>& slot) {
    bool absorbed = false;
    bool lost = false;
    for (int k = 0; k < n_g; ++k) {
      if (!absorbed) {
        absorbed = rng.uniform() < p;
      } else if (rng.uniform() < p_res) {
        lost = true;
      }
    }
    if (absorbed && !lost) ++slot[0];
  });
  return McResult::from_counts(counts[0], trials, seed);
}

} // namespace rydsub
