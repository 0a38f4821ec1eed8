#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "rydsub/absorber_model.hpp"
#include "rydsub/errors.hpp"
#include "rydsub/format.hpp"
#include "rydsub/parallel.hpp"
#include "rydsub/retrieval_model.hpp"
#include "rydsub/subtraction_model.hpp"

namespace rydsub::cli {
namespace {

std::vector<double> linear_axis(double lo, double hi, int points) {
  if (points < 2) throw invalid_parameter("sweeps need at least two points");
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) axis[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  axis.back() = hi;
  return axis;
}

std::string tag(const std::string& name, double v) { return name + "=" + format_number(v); }

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw invalid_parameter("cannot write " + path.string());
  return f;
}

} // namespace

Context make_context(RunConfig config) {
  config.validate();
  Context ctx;
  ctx.out_dir = config.text("output.dir");
  ctx.format = config.text("output.format");
  ctx.threads = static_cast<unsigned>(config.integer("run.threads"));
  ctx.seed = config.unsigned64("run.seed");
  ctx.config = std::move(config);
  std::filesystem::create_directories(ctx.out_dir);
  return ctx;
}

Metadata Context::metadata(const std::string& command) const {
  Metadata m = config.as_metadata();
  m["command"] = command;
  m["version"] = io::library_version();
  m["seed"] = std::to_string(seed);
  m["flag.medium_length"] = "assumed";
  m["flag.scattering_exponent"] = config.text("model.exponent");
  m["flag.decohered_keep_scattering"] = "true";
  return m;
}

std::filesystem::path Context::write(const std::string& stem, const io::Table& table) const {
  const auto path = out_dir / (stem + "." + format);
  auto f = open(path);
  if (format == "json")
    io::write_json(f, table);
  else
    io::write_csv(f, table);
  return path;
}

int cmd_fig1d(const Context& ctx) {
  const auto& cfg = ctx.config;
  ModelParams params = cfg.model();
  params.grid_points = cfg.integer("fig1d.points_per_zb");
  params.validate();
  const int n_s = cfg.integer("fig1d.n_s");
  const SpinWaveMode mode = cfg.mode();
  for (double r : cfg.numbers("fig1d.r")) {
    DensityMatrixGrid g = two_excitation_slice(r, n_s, mode, params, ctx.threads);
    const Metadata base = ctx.metadata("fig1d");
    g.meta.insert(base.begin(), base.end());
    g.meta["flag.stored_mode"] = "assumed";
    g.meta["flag.overlapping_blockade"] = "evaluated_without_validation";
    const auto path = ctx.out_dir / ("fig1d_r" + format_number(r) + "." + ctx.format);
    auto f = open(path);
    if (ctx.format == "json")
      io::write_json(f, g);
    else
      io::write_csv(f, g);
    std::cout << path.string() << '\n';
  }
  return 0;
}

int cmd_retrieval(const Context& ctx) {
  const auto& cfg = ctx.config;
  const double p = cfg.number("retrieval.p");
  const auto amplitudes = cfg.numbers("retrieval.alpha_g");
  const auto axis = linear_axis(0.0, cfg.number("retrieval.scattered_max"), cfg.integer("retrieval.points"));

  io::Table t;
  t.columns.push_back("scattered");
  for (double ag : amplitudes) t.columns.push_back("eta_over_eta_R[" + tag("alpha_g", ag) + "]");
  for (double ag : amplitudes) t.columns.push_back("baseline[" + tag("alpha_g", ag) + "]");
  for (double sbar : axis) {
    std::vector<double> row{sbar};
    for (double ag : amplitudes) {
      const FieldSpec f{ag, alpha_s_for_scattered(sbar, ag, p), 1.0, 1.0};
      row.push_back(retrieval_efficiency(f, p));
    }
    for (double ag : amplitudes) row.push_back(no_protection_baseline(sbar, ag, 1.0));
    t.add_row(std::move(row));
  }
  t.meta = ctx.metadata("retrieval");
  std::cout << ctx.write("retrieval", t).string() << '\n';
  return 0;
}

int cmd_subtract(const Context& ctx) {
  const auto& cfg = ctx.config;
  const double p = cfg.number("subtract.p");
  const FieldSpec base = cfg.fields();
  const auto sources = cfg.numbers("subtract.alpha_s");
  const auto axis = linear_axis(0.0, cfg.number("subtract.alpha_g_max"), cfg.integer("subtract.points"));

  io::Table t;
  t.columns.push_back("alpha_g");
  for (double as : sources) t.columns.push_back("retrieved[" + tag("alpha_s", as) + "]");
  t.columns.push_back("ideal_subtraction");
  for (double ag : axis) {
    std::vector<double> row{ag};
    for (double as : sources) row.push_back(mean_retrieved({ag, as, base.eta_S, base.eta_R}, p));
    row.push_back(base.eta_R * (ag - 1.0 + std::exp(-ag)));
    t.add_row(std::move(row));
  }
  t.meta = ctx.metadata("subtract");
  std::cout << ctx.write("subtract", t).string() << '\n';
  return 0;
}

int cmd_fidelity(const Context& ctx) {
  const auto& cfg = ctx.config;
  const FieldSpec fields = cfg.fields();
  const FidelityBounds fb = cfg.fidelity_bounds();
  const AbsorberBounds ab = cfg.absorber_bounds();
  const auto axis = linear_axis(cfg.number("fidelity.d_b_min"), cfg.number("fidelity.d_b_max"),
                                cfg.integer("fidelity.points"));

  struct Point {
    SubtractionReport exact, approx, absorber;
  };
  std::vector<Point> points(axis.size());
  parallel_for(axis.size(), ctx.threads, [&](std::size_t i) {
    const double d_b = axis[i];
    points[i].exact = optimize_fidelity(fields, scattering_probability(d_b, ScatteringExponent::exact), fb);
    points[i].approx = optimize_fidelity(fields, scattering_probability(d_b, ScatteringExponent::approximate), fb);
    points[i].absorber = optimize_absorber(fields.alpha_g, d_b, ab);
  });

  io::Table t;
  t.columns = {"d_b",        "F_decoherence",    "F_decoherence_approx",       "F_absorber",
               "alpha_s_opt", "alpha_s_opt_approx", "absorber_delta_over_gamma", "absorber_eit_over_dephasing"};
  int boundary_hits = 0;
  std::vector<SubtractionReport> reports;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const auto& pt = points[i];
    t.add_row({axis[i], pt.exact.fidelity, pt.approx.fidelity, pt.absorber.fidelity, pt.exact.alpha_s_opt,
               pt.approx.alpha_s_opt, pt.absorber.location.at("delta_over_gamma"),
               pt.absorber.location.at("eit_over_dephasing")});
    for (const auto* r : {&pt.exact, &pt.approx, &pt.absorber}) {
      if (r->boundary_hit && !r->degenerate) {
        ++boundary_hits;
        std::cerr << "warning: optimum on the search boundary at d_b=" << format_number(axis[i]) << " ("
                  << r->meta.at("mechanism") << ")\n";
      }
      SubtractionReport copy = *r;
      copy.meta["d_b"] = format_number(axis[i]);
      reports.push_back(std::move(copy));
    }
  }
  t.meta = ctx.metadata("fidelity");
  t.meta["flag.absorber_constraint"] = "hard_lower_bound";
  t.meta["flag.vacuum_counts_as_success"] = "true";
  t.meta["boundary_hits"] = std::to_string(boundary_hits);
  std::cout << ctx.write("fig4", t).string() << '\n';
  {
    const auto path = ctx.out_dir / "fig4_reports.json";
    auto f = open(path);
    io::write_json(f, reports);
    std::cout << path.string() << '\n';
  }

  // Storage/retrieval surfaces of the Fock-state subtraction probability.
  const int n_g = cfg.integer("fidelity.surface_n_g");
  const auto etas = linear_axis(cfg.number("fidelity.eta_min"), 1.0, cfg.integer("fidelity.eta_points"));
  for (double d_b : cfg.numbers("fidelity.surface_d_b")) {
    const double p = scattering_probability(d_b, cfg.exponent());
    std::vector<double> values(etas.size() * etas.size());
    parallel_for(etas.size(), ctx.threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < etas.size(); ++j)
        values[i * etas.size() + j] = optimize_fock(n_g, etas[i], etas[j], p, fb).fidelity;
    });
    io::Table s;
    s.columns.push_back("eta_S");
    for (double er : etas) s.columns.push_back("P1[" + tag("eta_R", er) + "]");
    for (std::size_t i = 0; i < etas.size(); ++i) {
      std::vector<double> row{etas[i]};
      row.insert(row.end(), values.begin() + static_cast<long>(i * etas.size()),
                 values.begin() + static_cast<long>((i + 1) * etas.size()));
      s.add_row(std::move(row));
    }
    s.meta = ctx.metadata("fidelity");
    s.meta["surface.d_b"] = format_number(d_b);
    s.meta["surface.p"] = format_number(p);
    s.meta["surface.n_g"] = std::to_string(n_g);
    std::cout << ctx.write("surface_db" + format_number(d_b), s).string() << '\n';
  }
  return 0;
}

} // namespace rydsub::cli
