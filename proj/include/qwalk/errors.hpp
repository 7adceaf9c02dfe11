#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph construction / input.
struct EmptyGraph : Error { using Error::Error; };
struct NotSimple : Error { using Error::Error; };
struct NotConnected : Error { using Error::Error; };
struct InvalidVertex : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// Numerical preconditions.
struct NotSymmetric : Error { using Error::Error; };
struct SingularBlock : Error { using Error::Error; };

// Walk preconditions.
struct NotRegular : Error { using Error::Error; };
struct EmptyMarkedSet : Error { using Error::Error; };
struct FullMarkedSet : Error { using Error::Error; };

// Basis construction.
struct BipartiteNoOddCycle : Error { using Error::Error; };
struct WrongSpaceTag : Error { using Error::Error; };

// Analysis.
struct NotAutomorphism : Error { using Error::Error; };
struct DoesNotFixS : Error { using Error::Error; };

// CLI / self-checks.
struct UsageError : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };

}  // namespace qwalk
