#pragma once

#include <stdexcept>
#include <string>

namespace patchad {

/// Base class for every error raised by the engine. The command-line tool
/// maps any Error to the data/format exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PATCHAD_DEFINE_ERROR(Name)      \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

PATCHAD_DEFINE_ERROR(IoError);           // stream or file failure
PATCHAD_DEFINE_ERROR(FormatError);       // malformed header / text row
PATCHAD_DEFINE_ERROR(LengthError);       // truncated payload
PATCHAD_DEFINE_ERROR(DataError);         // non-finite or out-of-domain values
PATCHAD_DEFINE_ERROR(DimensionError);    // shape mismatch
PATCHAD_DEFINE_ERROR(ParameterError);    // argument outside its documented range
PATCHAD_DEFINE_ERROR(EmptinessError);    // empty collection where one row is required
PATCHAD_DEFINE_ERROR(ConsistencyError);  // parts of a file disagree
PATCHAD_DEFINE_ERROR(GenerationError);   // defect shape retry budget exhausted
PATCHAD_DEFINE_ERROR(PlacementError);    // no feasible defect offset
PATCHAD_DEFINE_ERROR(SizeError);         // donor image too small
PATCHAD_DEFINE_ERROR(MetricError);       // metric undefined for the input
PATCHAD_DEFINE_ERROR(InputError);        // missing inputs for a requested computation

#undef PATCHAD_DEFINE_ERROR

}  // namespace patchad
