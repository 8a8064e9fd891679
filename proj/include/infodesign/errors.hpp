// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_ERRORS_HPP_
#define INFODESIGN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace infodesign {

/// Error categories raised by the library. Solver outcomes (infeasible,
/// unbounded, numerical failure) are reported through Solution::status, not
/// through exceptions.
enum class Errc {
  SingularH,
  IndexOutOfRange,
  KGreaterThanL,
  DimensionMismatch,
  NonSymmetric,
  NuOutOfRange,
  OffDiagonalNotScalarIdentity,
  ZeroD,
  NotPsd,
  SigmaNotPsd,
  EpsNegative,
  DegenerateNormalizer,
  MalformedModel,
  ConfigError,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace infodesign

#endif  // INFODESIGN_ERRORS_HPP_
