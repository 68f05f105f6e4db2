#pragma once

#include <stdexcept>
#include <string>

namespace tacsim {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Frame or tensor has the wrong resolution / shape for the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A contact point fell outside the pad bounds during binning.
class RejectedContactError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Degenerate parameter, e.g. a zero Gaussian-bump deviation.
class SingularParameterError : public Error {
 public:
  using Error::Error;
};

// The grasp cannot hold the peg: no equilibrium inside the friction cones.
class SlipError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (frame streams, logs).
class DataError : public Error {
 public:
  using Error::Error;
};

// Operation on an episode or handle in the wrong lifecycle state.
class LifecycleError : public Error {
 public:
  using Error::Error;
};

}  // namespace tacsim
