#pragma once

#include <stdexcept>
#include <string>

namespace confsym {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CONFSYM_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// numerics
CONFSYM_DEFINE_ERROR(SingularForm);
CONFSYM_DEFINE_ERROR(NotHermitian);
CONFSYM_DEFINE_ERROR(DomainExit);
CONFSYM_DEFINE_ERROR(RankOverflow);
CONFSYM_DEFINE_ERROR(RankTooHigh);
CONFSYM_DEFINE_ERROR(EmptyInput);
CONFSYM_DEFINE_ERROR(DimensionMismatch);

// liegroups
CONFSYM_DEFINE_ERROR(SpecMismatch);
CONFSYM_DEFINE_ERROR(NotInGroup);
CONFSYM_DEFINE_ERROR(OutsideHalfspace);

// scenarios
CONFSYM_DEFINE_ERROR(BadParams);
CONFSYM_DEFINE_ERROR(SmokeFail);
CONFSYM_DEFINE_ERROR(OutsideDomain);
CONFSYM_DEFINE_ERROR(BadStrategy);

// momentbody
CONFSYM_DEFINE_ERROR(TooFewRays);
CONFSYM_DEFINE_ERROR(ConfigError);

#undef CONFSYM_DEFINE_ERROR

}  // namespace confsym
