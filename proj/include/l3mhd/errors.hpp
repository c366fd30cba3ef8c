#pragma once

#include <stdexcept>
#include <string>

namespace l3mhd {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes (ConfigError -> 2, everything else -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define L3MHD_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

L3MHD_DEFINE_ERROR(InvalidGrid);
L3MHD_DEFINE_ERROR(GridMismatch);
L3MHD_DEFINE_ERROR(NodeMismatch);
L3MHD_DEFINE_ERROR(NegativeTime);
L3MHD_DEFINE_ERROR(EmptyTrajectory);
L3MHD_DEFINE_ERROR(InvalidConstants);
L3MHD_DEFINE_ERROR(ConditionViolated);
L3MHD_DEFINE_ERROR(NoConvergence);
L3MHD_DEFINE_ERROR(WindowCollapse);
L3MHD_DEFINE_ERROR(UnsupportedTestFunction);
L3MHD_DEFINE_ERROR(ScalingViolation);
L3MHD_DEFINE_ERROR(NegativeWeight);
L3MHD_DEFINE_ERROR(ConfigError);
L3MHD_DEFINE_ERROR(FormatError);

#undef L3MHD_DEFINE_ERROR

}  // namespace l3mhd
