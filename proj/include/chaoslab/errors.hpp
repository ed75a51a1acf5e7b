#pragma once

#include <stdexcept>
#include <string>

namespace chaoslab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CHAOSLAB_DEFINE_ERROR(Name)        \
  struct Name : ::chaoslab::Error {        \
    using ::chaoslab::Error::Error;        \
  }

CHAOSLAB_DEFINE_ERROR(EmptyDomain);
CHAOSLAB_DEFINE_ERROR(Overflow);
CHAOSLAB_DEFINE_ERROR(OutsideDomain);
CHAOSLAB_DEFINE_ERROR(OutOfRadius);
CHAOSLAB_DEFINE_ERROR(NotAnalytic);
CHAOSLAB_DEFINE_ERROR(CumulantDepth);
CHAOSLAB_DEFINE_ERROR(GuardViolated);
CHAOSLAB_DEFINE_ERROR(DuplicateSite);
CHAOSLAB_DEFINE_ERROR(PowerOverflow);
CHAOSLAB_DEFINE_ERROR(NotAvailable);
CHAOSLAB_DEFINE_ERROR(SingularInput);
CHAOSLAB_DEFINE_ERROR(DegenerateDenominator);
CHAOSLAB_DEFINE_ERROR(MethodUnavailable);
CHAOSLAB_DEFINE_ERROR(BudgetExceeded);
CHAOSLAB_DEFINE_ERROR(NotBinary);
CHAOSLAB_DEFINE_ERROR(AsymmetricDisorder);
CHAOSLAB_DEFINE_ERROR(QuadratureBudget);
CHAOSLAB_DEFINE_ERROR(MissingReport);
CHAOSLAB_DEFINE_ERROR(ConfigError);

#undef CHAOSLAB_DEFINE_ERROR

}  // namespace chaoslab
