#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zakharov {

enum class ErrorCode {
  domain,              // argument outside the mathematical domain
  degenerate_speed,    // |c| >= 1
  degenerate_modulus,  // kappa below the admissible window
  cancellation,        // closed-form denominator lost all significance
  kernel_degeneracy,   // ker(L+) != span[phi'] numerically
  contract,            // caller violated a precondition
  analytic_claim,      // a sign/inequality asserted by the theory failed
  eigensolver,         // LAPACK did not converge
  inconclusive_rank,   // singular values straddle the rank threshold
  route_disagreement,  // closed form and numerics disagree
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zakharov
