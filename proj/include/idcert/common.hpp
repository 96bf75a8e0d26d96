// Shared numeric conventions and error types.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace idcert {

using Complex = std::complex<double>;

// One global pair of tolerances: exact-arithmetic comparisons and
// quasi-exact input validation (unitarity, stabilizer detection).
inline constexpr double kTolExact = 1e-10;
inline constexpr double kTolInput = 1e-8;

// Invalid or malformed user input (CLI exit code 2).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dataset lacks the measurement settings a computation needs (CLI exit code 4).
struct CoverageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace idcert
