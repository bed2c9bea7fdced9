#pragma once

#include <stdexcept>
#include <string>

namespace kmc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define KMC_ERROR(Name)                       \
  struct Name : Error {                       \
    using Error::Error;                       \
  }

KMC_ERROR(ParseError);
KMC_ERROR(RingMismatch);
KMC_ERROR(NonUnit);
KMC_ERROR(NotLocal);
KMC_ERROR(UnknownRoot);
KMC_ERROR(NotPrenilpotent);
KMC_ERROR(BoundExceeded);
KMC_ERROR(NotPositive);
KMC_ERROR(IsSimple);
KMC_ERROR(NotTwoSpherical);
KMC_ERROR(NotSpherical);
KMC_ERROR(NotSupported);
KMC_ERROR(NotEnumerated);
KMC_ERROR(TypeA1);
KMC_ERROR(Disconnected);
KMC_ERROR(SearchInfeasible);
KMC_ERROR(EliminationFailed);

// Limits that stop an exhaustive computation. The CLI maps both to exit 3.
KMC_ERROR(CapExceeded);
KMC_ERROR(Overflow);

#undef KMC_ERROR

}  // namespace kmc
