#pragma once
#include <stdexcept>
#include <string>

namespace bfp {

// invalid configuration or input data; CLI exit code 2
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// breakdown of an iteration, quadrature, or solver; CLI exit code 3
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a verification check failed; CLI exit code 1
struct check_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace bfp
