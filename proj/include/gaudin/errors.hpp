#pragma once

#include <stdexcept>
#include <string>

namespace gaudin {

/// Base class of every error raised by the workbench.
class GaudinError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GAUDIN_DEFINE_ERROR(Name)                                   \
  class Name : public GaudinError {                                 \
   public:                                                          \
    explicit Name(const std::string& what) : GaudinError(#Name ": " + what) {} \
  }

GAUDIN_DEFINE_ERROR(DivisionByZero);
GAUDIN_DEFINE_ERROR(PoleEvaluation);
GAUDIN_DEFINE_ERROR(ImproperRational);
GAUDIN_DEFINE_ERROR(DimensionMismatch);
GAUDIN_DEFINE_ERROR(NotAPartition);
GAUDIN_DEFINE_ERROR(RepeatedSites);
GAUDIN_DEFINE_ERROR(NotInvariant);
GAUDIN_DEFINE_ERROR(PointNotInU);
GAUDIN_DEFINE_ERROR(DegenerateCriticalPoint);
GAUDIN_DEFINE_ERROR(ZeroVector);
GAUDIN_DEFINE_ERROR(KernelDimensionMismatch);
GAUDIN_DEFINE_ERROR(ShapeNormalizationFailure);
GAUDIN_DEFINE_ERROR(AmbientTooSmall);
GAUDIN_DEFINE_ERROR(SchemaError);
GAUDIN_DEFINE_ERROR(DistinctnessError);
GAUDIN_DEFINE_ERROR(TermLimitExceeded);

#undef GAUDIN_DEFINE_ERROR

}  // namespace gaudin
