#pragma once

// Jacobi elliptic functions and complete elliptic integrals.
//
// Every function here takes the *modulus* kappa (not the parameter
// m = kappa^2), matching the dn(x, kappa) notation used throughout the
// wave construction. All functions are pure and thread-safe.

namespace zakharov::elliptic {

/// Modulus kappa in [0, 1] together with kappa' = sqrt(1 - kappa^2).
///
/// kappa' is computed as sqrt((1-kappa)(1+kappa)), which keeps full relative
/// precision as kappa -> 1.
class EllipticModulus {
 public:
  /// Throws Error(domain) unless 0 <= kappa <= 1 and kappa is finite.
  static EllipticModulus from_kappa(double kappa);

  double kappa() const noexcept { return kappa_; }
  double kappa_prime() const noexcept { return kappa_prime_; }

 private:
  EllipticModulus(double kappa, double kappa_prime)
      : kappa_(kappa), kappa_prime_(kappa_prime) {}

  double kappa_;
  double kappa_prime_;
};

/// Arithmetic-geometric mean of two nonnegative numbers.
double agm(double a, double b);

/// Complete elliptic integral of the first kind K(kappa).
/// kappa = 0 gives pi/2; kappa = 1 throws Error(domain).
double complete_K(EllipticModulus m);

/// Complete elliptic integral of the second kind E(kappa), 0 <= kappa <= 1.
double complete_E(EllipticModulus m);

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// sn(u, kappa), cn(u, kappa), dn(u, kappa) for finite u and 0 <= kappa < 1.
///
/// Uses the AGM phase descent. Odd/even symmetry in u is exact: the
/// computation runs on |u| and only the sign of sn is flipped.
JacobiTriple jacobi_sn_cn_dn(double u, EllipticModulus m);

}  // namespace zakharov::elliptic
