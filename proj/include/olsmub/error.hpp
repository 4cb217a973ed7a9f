#pragma once

#include <stdexcept>
#include <string>

namespace olsmub {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OLSMUB_DEFINE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

OLSMUB_DEFINE_ERROR(FieldMismatch);
OLSMUB_DEFINE_ERROR(NotPrime);
OLSMUB_DEFINE_ERROR(NotPrimePower);
OLSMUB_DEFINE_ERROR(NotIrreducible);
OLSMUB_DEFINE_ERROR(DegenerateBasis);
OLSMUB_DEFINE_ERROR(InvalidSquare);
OLSMUB_DEFINE_ERROR(OrderMismatch);
OLSMUB_DEFINE_ERROR(InvalidNet);
OLSMUB_DEFINE_ERROR(IncompleteNet);
OLSMUB_DEFINE_ERROR(NotCommuting);
OLSMUB_DEFINE_ERROR(ConstructionError);
OLSMUB_DEFINE_ERROR(DimensionMismatch);
OLSMUB_DEFINE_ERROR(NotHermitian);
OLSMUB_DEFINE_ERROR(InvalidArgument);

#undef OLSMUB_DEFINE_ERROR

}  // namespace olsmub
