#pragma once

#include <stdexcept>
#include <string>

namespace rydsub {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class invalid_parameter : public error {
public:
  using error::error;
};

class quadrature_failure : public error {
public:
  using error::error;
};

class dimension_mismatch : public error {
public:
  using error::error;
};

class grid_mismatch : public error {
public:
  using error::error;
};

class index_out_of_range : public error {
public:
  using error::error;
};

class step_too_coarse : public error {
public:
  using error::error;
};

} // namespace rydsub
