#include "fngon/error.hpp"

namespace fngon {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidConductor: return "invalid-conductor";
    case ErrorKind::kConductorMismatch: return "conductor-mismatch";
    case ErrorKind::kEmbeddingUndefined: return "embedding-undefined";
    case ErrorKind::kInvalidOrder: return "invalid-order";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kNotAMember: return "not-a-member";
    case ErrorKind::kCannotJoin: return "cannot-join";
    case ErrorKind::kMembership: return "membership";
    case ErrorKind::kNumericFailure: return "numeric-failure";
    case ErrorKind::kNoRootWithinEps: return "no-root-within-eps";
    case ErrorKind::kBudgetExceeded: return "budget-exceeded";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kChainFailed: return "chain-failed";
    case ErrorKind::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace fngon
