#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rydsub/errors.hpp"

using namespace rydsub::cli;

int main(int argc, char** argv) {
  CLI::App app{"Decoherence of stored Rydberg spin waves: figure data, sweeps and oracle checks"};
  app.set_version_flag("--version", rydsub::io::library_version());
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, format;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (output.dir)");
  app.add_option("--format", format, "csv or json (output.format)")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Monte Carlo seed (run.seed)");
  app.add_option("--threads", threads, "worker threads (run.threads)")->check(CLI::Range(1u, 1024u));
  app.add_option("--set", overrides, "override a config key, section.key=value")->take_all();

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Context&);
  };
  const std::vector<Command> commands = {
      {"fig1d", "two-excitation density matrix slices after n_s scattered photons", cmd_fig1d},
      {"retrieval", "retrieval efficiency against the mean scattered photon number", cmd_retrieval},
      {"subtract", "mean retrieved gate photons against the gate amplitude", cmd_subtract},
      {"fidelity", "optimal subtraction efficiency of both mechanisms and storage/retrieval surfaces", cmd_fidelity},
      {"verify", "oracle cross-check matrix; exits nonzero on any failure", cmd_verify},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) subs.push_back(app.add_subcommand(c.name, c.help));
  subs.back()->alias("oracle");
  auto* config_cmd = app.add_subcommand("config", "print the documented default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (config_cmd->parsed()) {
    std::cout << default_config_text();
    return 0;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (!out_dir.empty()) cfg.set("output.dir", out_dir);
    if (!format.empty()) cfg.set("output.format", format);
    if (app.count("--seed")) cfg.set("run.seed", std::to_string(seed));
    if (app.count("--threads")) cfg.set("run.threads", std::to_string(threads));
    const Context ctx = make_context(std::move(cfg));
    for (std::size_t i = 0; i < commands.size(); ++i)
      if (subs[i]->parsed()) return commands[i].run(ctx);
  } catch (const rydsub::quadrature_failure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const rydsub::step_too_coarse& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const rydsub::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
