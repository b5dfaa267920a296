#pragma once

#include <stdexcept>
#include <string>

namespace mfgc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// H or H_p requested at m = 0, p != 0 with zero congestion offset.
class SingularEvaluation : public Error {
 public:
  using Error::Error;
};

/// The Legendre grid search found its maximizer on the box boundary.
class SearchBoxTooSmall : public Error {
 public:
  using Error::Error;
};

/// Monotonicity probe called with (z, r) == (0, 0).
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class NewtonDiverged : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class LinearSolveFailed : public Error {
 public:
  using Error::Error;
};

class NegativeDensity : public Error {
 public:
  using Error::Error;
};

/// Two fields or solutions live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid options, schedules or parameter combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mfgc
