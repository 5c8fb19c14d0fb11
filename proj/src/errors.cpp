#include "zakharov/errors.hpp"

namespace zakharov {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::degenerate_speed: return "degenerate_speed";
    case ErrorCode::degenerate_modulus: return "degenerate_modulus";
    case ErrorCode::cancellation: return "cancellation";
    case ErrorCode::kernel_degeneracy: return "kernel_degeneracy";
    case ErrorCode::contract: return "contract";
    case ErrorCode::analytic_claim: return "analytic_claim";
    case ErrorCode::eigensolver: return "eigensolver";
    case ErrorCode::inconclusive_rank: return "inconclusive_rank";
    case ErrorCode::route_disagreement: return "route_disagreement";
  }
  return "unknown";
}

}  // namespace zakharov
