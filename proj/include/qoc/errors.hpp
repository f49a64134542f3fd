#pragma once

#include <stdexcept>
#include <string>

namespace qoc {

struct InvalidDensity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutsideBlochBall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeIncoherentControl : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A state or costate component became NaN/Inf during integration.
struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The fixed-time solve at the sweep's starting horizon did not reach the
/// target; the horizon is too small, the bounds too tight, or the optimizer
/// budget inadequate.
struct InfeasibleAtTHi : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qoc
