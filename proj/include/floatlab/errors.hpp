#pragma once

#include <stdexcept>
#include <string>

namespace floatlab {

/// Base class of every error raised by the library. Carries the name of the
/// module that raised it so that the experiment runner can report provenance.
class Error : public std::runtime_error
{
public:
  Error(std::string module, const std::string& message)
    : std::runtime_error(message), module_(std::move(module))
  {}

  const std::string& module() const noexcept { return module_; }
  virtual const char* code() const noexcept { return "Error"; }

private:
  std::string module_;
};

#define FLOATLAB_DEFINE_ERROR(Name)                                   \
  class Name : public Error                                           \
  {                                                                   \
  public:                                                             \
    using Error::Error;                                               \
    const char* code() const noexcept override { return #Name; }      \
  }

FLOATLAB_DEFINE_ERROR(CurvatureUnavailable);
FLOATLAB_DEFINE_ERROR(ToleranceNotMet);
FLOATLAB_DEFINE_ERROR(RootNotBracketed);
FLOATLAB_DEFINE_ERROR(EmptyIntersection);
FLOATLAB_DEFINE_ERROR(Unbounded);
FLOATLAB_DEFINE_ERROR(EmptyFloatingBody);
FLOATLAB_DEFINE_ERROR(EnvelopeExceeded);
FLOATLAB_DEFINE_ERROR(ImproperBody);
FLOATLAB_DEFINE_ERROR(OutOfChart);
FLOATLAB_DEFINE_ERROR(BudgetTooSmall);
FLOATLAB_DEFINE_ERROR(ConfigError);
FLOATLAB_DEFINE_ERROR(IoError);
FLOATLAB_DEFINE_ERROR(InvalidArgument);

#undef FLOATLAB_DEFINE_ERROR

}  // namespace floatlab
