#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"
#include "rydsub/io.hpp"

namespace rydsub::cli {

struct Context {
  RunConfig config;
  std::filesystem::path out_dir;
  std::string format; // csv or json
  unsigned threads = 1;
  std::uint64_t seed = 1;

  /// Metadata shared by every output file of one command.
  Metadata metadata(const std::string& command) const;
  /// Writes `table` as <stem>.csv or <stem>.json and returns the path.
  std::filesystem::path write(const std::string& stem, const io::Table& table) const;
};

Context make_context(RunConfig config);

int cmd_fig1d(const Context& ctx);
int cmd_retrieval(const Context& ctx);
int cmd_subtract(const Context& ctx);
int cmd_fidelity(const Context& ctx);
int cmd_verify(const Context& ctx);

} // namespace rydsub::cli
