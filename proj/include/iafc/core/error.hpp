// error.hpp
// ---------
// Error taxonomy.  Precondition violations raise InvalidArgument; numerical
// failures raise a NumericalError subclass naming the failure mode so that
// callers (and the CLI exit codes) can tell them apart.
#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>

namespace iafc {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pulse/spectral grid does not cover the structure it must resolve.
struct CoverageError : NumericalError {
  using NumericalError::NumericalError;
};
/// Fidelity requested with zero output energy in the echo window.
struct UndefinedFidelity : NumericalError {
  using NumericalError::NumericalError;
};
/// Non-finite values or unphysical growth detected.
struct NumericalInstability : NumericalError {
  using NumericalError::NumericalError;
};
/// Transverse grid too coarse or too small for the requested mode.
struct ResolutionError : NumericalError {
  using NumericalError::NumericalError;
};
/// Propagation step too large (phase aliasing).
struct StepSizeError : NumericalError {
  using NumericalError::NumericalError;
};
/// Step-halving / refinement convergence check failed.
struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};

// ---------------------------------------------------------------------------
// Warning sink.  Library code reports recoverable conditions (teeth outside
// the grid, clamped thermal transfer, ...) through here; the default sink
// prints to stderr, tests may install a collecting sink.
// ---------------------------------------------------------------------------
using WarningSink = std::function<void(const std::string&)>;

namespace detail {
inline WarningSink& warning_sink() {
  static WarningSink sink = [](const std::string& msg) {
    std::cerr << "iafc warning: " << msg << '\n';
  };
  return sink;
}
inline std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}
} // namespace detail

/// Install a new warning sink and return the previous one.
inline WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(detail::warning_mutex());
  auto old = std::move(detail::warning_sink());
  detail::warning_sink() = std::move(sink);
  return old;
}

inline void warn(const std::string& msg) {
  std::lock_guard lock(detail::warning_mutex());
  if (detail::warning_sink()) detail::warning_sink()(msg);
}

/// Throw InvalidArgument with `msg` unless `cond` holds.
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

} // namespace iafc
