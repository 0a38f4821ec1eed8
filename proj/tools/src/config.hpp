#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rydsub/absorber_model.hpp"
#include "rydsub/core_model.hpp"
#include "rydsub/density_evolution.hpp"
#include "rydsub/subtraction_model.hpp"

namespace rydsub::cli {

struct SchemaEntry {
  const char* key; // section.key
  const char* value;
  const char* doc;
};

/// Every accepted configuration key with its default.
const std::vector<SchemaEntry>& schema();

/// Flat section.key -> value map, seeded with the schema defaults.
class RunConfig {
public:
  RunConfig();

  /// Merges an INI file. Unknown sections or keys raise invalid_parameter.
  void load_file(const std::string& path);
  /// Applies one `section.key=value` override.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t unsigned64(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  ModelParams model() const;
  FieldSpec fields() const;
  ScatteringExponent exponent() const;
  SpinWaveMode mode() const;
  FidelityBounds fidelity_bounds() const;
  AbsorberBounds absorber_bounds() const;

  /// All keys as `config.section.key` metadata entries.
  Metadata as_metadata() const;
  /// Parses every typed key once so malformed values fail before any work.
  void validate() const;

private:
  std::map<std::string, std::string> values_;
};

/// Documented schema as an INI file with comments.
std::string default_config_text();

} // namespace rydsub::cli
