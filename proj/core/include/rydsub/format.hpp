#pragma once

#include <charconv>
#include <string>

namespace rydsub {

/// Shortest decimal text that reads back to exactly `v`.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

} // namespace rydsub
