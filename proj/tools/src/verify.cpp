#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "rydsub/absorber_model.hpp"
#include "rydsub/coherence_kernel.hpp"
#include "rydsub/errors.hpp"
#include "rydsub/oracles.hpp"
#include "rydsub/retrieval_model.hpp"
#include "rydsub/subtraction_model.hpp"

namespace rydsub::cli {
namespace {

using nlohmann::ordered_json;

struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

// Check passes when measured <= tolerance.
Check bound(std::string name, double measured, double tolerance, std::string detail = {}) {
  return {std::move(name), measured, tolerance, measured <= tolerance, std::move(detail)};
}

std::vector<double> random_positions(SplitMix64& rng, int n, double length) {
  std::vector<double> v;
  while (static_cast<int>(v.size()) < n) {
    const double x = length * rng.uniform();
    if (std::none_of(v.begin(), v.end(), [x](double y) { return std::abs(x - y) < 1e-6; })) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

Check check_ode(const Context& ctx) {
  const auto& cfg = ctx.config;
  ModelParams params = cfg.model();
  const double tol = cfg.number("verify.ode_tol"), step = cfg.number("verify.ode_step");
  const int configs = cfg.integer("verify.configs");
  auto rng = SplitMix64::substream(ctx.seed, 0);
  double worst = 0.0;
  try {
    for (int i = 0; i < configs; ++i) {
      const auto pos = random_positions(rng, 1 + i % 4, params.length);
      params.d_b = 6.0 * rng.uniform();
      const auto ode = ode_transmission(pos, params, step, tol);
      const TransmissionProfile prof(pos, params);
      worst = std::max(worst, std::abs(ode - prof.field_ratio(params.length)));
    }
  } catch (const step_too_coarse& e) {
    return {"ode_vs_closed_form", INFINITY, tol, false, e.what()};
  }
  return bound("ode_vs_closed_form", worst, tol, std::to_string(configs) + " random configurations");
}

Check check_ode_order(const Context& ctx) {
  ModelParams params = ctx.config.model();
  params.d_b = 1.0;
  const std::vector<double> pos{params.length + 1.0};
  const auto n = static_cast<std::size_t>(std::llround(32.0 * params.length));
  const auto e1 = ode_field_ratio(pos, params, n);
  const auto e2 = ode_field_ratio(pos, params, 2 * n);
  const auto e3 = ode_field_ratio(pos, params, 4 * n);
  const double order = std::log2(std::abs(e1 - e2) / std::abs(e2 - e3));
  Check c{"ode_convergence_order", order, 3.9, order >= 3.9, "Richardson order at steps 1/32, 1/64, 1/128"};
  return c;
}

std::vector<Check> check_kernel(const Context& ctx) {
  const auto& cfg = ctx.config;
  ModelParams params = cfg.model();
  const int configs = cfg.integer("verify.kernel_configs");
  auto rng = SplitMix64::substream(ctx.seed, 1);
  double diag = 0.0, excess = 0.0, herm = 0.0;
  for (int i = 0; i < configs; ++i) {
    const int n = 1 + i % 4;
    const GateConfig x(random_positions(rng, n, params.length), params.length);
    const GateConfig y(random_positions(rng, n, params.length), params.length);
    params.d_b = 6.0 * rng.uniform();
    const auto xy = phi(x, y, params).value;
    diag = std::max(diag, std::abs(phi(x, x, params).value - 1.0));
    excess = std::max(excess, std::abs(xy) - 1.0);
    herm = std::max(herm, std::abs(xy - std::conj(phi(y, x, params).value)));
  }
  const std::string detail = std::to_string(configs) + " random configurations";
  return {bound("kernel_diagonal", diag, cfg.number("verify.kernel_tol"), detail),
          bound("kernel_contractive", excess, 10.0 * params.quad_rel_tol, detail),
          bound("kernel_hermitian", herm, cfg.number("verify.hermitian_tol"), detail)};
}

std::vector<Check> check_closed_forms(const Context& ctx) {
  const auto& cfg = ctx.config;
  const double ctol = cfg.number("verify.constant_tol"), ftol = cfg.number("verify.closed_form_tol"),
               itol = cfg.number("verify.identity_tol");
  std::vector<Check> out;
  out.push_back(bound("scattering_constant", std::abs(scattering_exponent() - 4.045968), ctol));
  out.push_back(bound("scattering_constant_quadrature",
                      std::abs(scattering_exponent_by_quadrature() - scattering_exponent()), ctol));

  ModelParams params = cfg.model();
  params.d_b = 1.0;
  const auto e = transmission_amplitude(params.length, GateConfig({params.length / 2.0}, params.length), params);
  out.push_back(bound("single_excitation_transmission", std::abs(std::norm(e) - (1.0 - scattering_probability(1.0))),
                      ctol));

  out.push_back(bound("decoherence_hand_value", std::abs(decoherence_probs(2, 2, 0.5).p1 - 0.6875), itol));

  double dashed = 0.0;
  for (double ag : {0.5, 1.0, 2.0, 4.0})
    dashed = std::max(dashed, std::abs(mean_retrieved({ag, 1e4, 1.0, 1.0}, 1.0) - (ag - 1.0 + std::exp(-ag))));
  out.push_back(bound("ideal_subtraction_line", dashed, ftol));
  double ideal = 0.0;
  for (double ag : {0.5, 2.0, 5.0}) ideal = std::max(ideal, std::abs(fidelity({ag, 60.0, 1.0, 1.0}, 1.0) - 1.0));
  out.push_back(bound("ideal_fidelity", ideal, ftol));

  double rec = 0.0, ident = 0.0;
  AbsorberParams a;
  a.d_b = 1.3;
  a.delta_over_gamma = 0.7;
  const double p = absorb_prob(a), pt = residual_prob(a);
  for (int n = 2; n <= 10; ++n)
    rec = std::max(rec, std::abs(absorber_subtract_fock(n, a) -
                                 (p * std::pow(1.0 - pt, n - 1) + (1.0 - p) * absorber_subtract_fock(n - 1, a))));
  a.eit_over_dephasing = 0.0;
  ident = std::abs(absorb_prob(a) - residual_prob(a));
  out.push_back(bound("absorber_recursion", rec, itol));
  out.push_back(bound("absorber_zero_eit_identity", ident, itol));
  return out;
}

std::vector<Check> check_monte_carlo(const Context& ctx) {
  const auto& cfg = ctx.config;
  const auto trials = static_cast<std::uint64_t>(cfg.integer("verify.mc_trials"));
  const double sigma = cfg.number("verify.mc_sigma");
  std::vector<Check> out;

  const auto dec = mc_decoherence(2, 2, 0.5, trials, ctx.seed, ctx.threads);
  const auto probs = decoherence_probs(2, 2, 0.5);
  out.push_back(bound("mc_decoherence", std::max(dec.one.z_score(probs.p1), dec.none.z_score(probs.p0)), sigma));

  const auto ret = mc_retrieval(3, 3, 0.5, 0.9, trials, ctx.seed + 1, ctx.threads);
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k)
    worst = std::max(worst, ret[static_cast<std::size_t>(k - 1)].z_score(eta_k(k, 3, 0.5, 0.9)));
  out.push_back(bound("mc_retrieval", worst, sigma));

  auto rng = SplitMix64::substream(ctx.seed, 2);
  const int sets = cfg.integer("verify.mc_sets");
  worst = 0.0;
  for (int i = 0; i < sets; ++i) {
    const int n = 1 + i % 4;
    const double as = 3.0 * rng.uniform(), es = rng.uniform(), er = rng.uniform(), p = rng.uniform();
    const auto mc = mc_pipeline(n, SourceSampling::poisson(as), es, er, p, trials, ctx.seed + 10 + static_cast<std::uint64_t>(i),
                                ctx.threads);
    worst = std::max(worst, mc.z_score(subtract_prob_coherent_source(n, as, es, er, p)));
  }
  out.push_back(bound("mc_pipeline", worst, sigma, std::to_string(sets) + " random parameter sets"));

  const auto ab = mc_absorber(3, 0.9, 0.1, trials, ctx.seed + 2, ctx.threads);
  out.push_back(bound("mc_absorber", ab.z_score(0.819), sigma));
  return out;
}

} // namespace

int cmd_verify(const Context& ctx) {
  std::vector<Check> checks;
  auto add = [&](auto&& more) {
    if constexpr (std::is_same_v<std::decay_t<decltype(more)>, Check>)
      checks.push_back(std::move(more));
    else
      for (auto& c : more) checks.push_back(std::move(c));
  };
  add(check_closed_forms(ctx));
  add(check_ode(ctx));
  add(check_ode_order(ctx));
  add(check_kernel(ctx));
  add(check_monte_carlo(ctx));

  bool all = true;
  ordered_json list = ordered_json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    ordered_json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["measured"] = std::isfinite(c.measured) ? ordered_json(c.measured) : ordered_json("inf");
    j["tolerance"] = c.tolerance;
    if (!c.detail.empty()) j["detail"] = c.detail;
    list.push_back(std::move(j));
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
  }
  ordered_json report;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : ctx.metadata("verify")) meta[k] = v;
  report["meta"] = meta;
  report["passed"] = all;
  report["checks"] = list;

  const auto path = ctx.out_dir / "verify.json";
  std::ofstream f(path);
  if (!f) throw invalid_parameter("cannot write " + path.string());
  f << report.dump(2) << '\n';
  std::cout << path.string() << '\n';
  return all ? 0 : 1;
}

} // namespace rydsub::cli
