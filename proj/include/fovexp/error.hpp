#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fovexp {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  SingularMatrix,
  NotSPD,
  NotSymmetric,
  NoConvergence,
  RepeatedRoots,
  PoleInsideRegion,
  PoleEvaluation,
  ScalingExhausted,
  DegreeExhausted,
  RefitFailed,
  SingularShift,
  DegenerateMesh,
  ResourceGuard,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI, the sweep) can map it to a failure marker.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace fovexp
