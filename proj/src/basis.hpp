#ifndef PCIP_BASIS_HPP
#define PCIP_BASIS_HPP

#include <vector>

#include "linalg.hpp"

namespace pcip {

// Raw family t^{n-1} e^t, n = 1..count, on (lo, hi).
struct RawFamilySpec {
  double lo = 0.0;
  double hi = 1.0;
  int count = 1;
};

// Hard cap: beyond this the moment Gram matrix is numerically singular even
// in extended precision on the short interval.
inline constexpr int kMaxBasisCount = 20;

/// Moments m_k = int t^k e^{2t} dt over (lo, hi), k = 0..max_degree.
/// Evaluated by the closed-form integration-by-parts recurrence in its
/// stable (downward) direction.
std::vector<double> exact_moments(double lo, double hi, int max_degree);

/// Orthonormal family psi_n(t) = (sum_k a_{n,k} t^k) e^t, n = 1..count,
/// obtained from {t^{n-1} e^t} by Gram-Schmidt carried out as a Cholesky
/// factorization of the exact moment Gram matrix. Coefficients are stored
/// exactly (lower-triangular matrix) so derivatives are exact.
class OrthonormalBasis1D {
 public:
  /// Throws Error(NonPositiveDefinite) if the Gram matrix fails the
  /// factorization, i.e. count is too large for the interval.
  static OrthonormalBasis1D orthonormalize(const RawFamilySpec& spec);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int count() const { return n_; }

  /// psi_n or its exact first/second derivative; n is 1-based, deriv_order in {0,1,2}.
  double eval(int n, double t, int deriv_order = 0) const;

  /// Row of polynomial coefficients for psi_n (length n).
  std::span<const double> coeff_row(int n) const {
    return {coeff_[0].data() + static_cast<size_t>(n - 1) * n_, static_cast<size_t>(n_)};
  }

  /// Values (or derivatives) of all n basis functions at the given points,
  /// as an (count x npoints) matrix.
  Mat eval_all(std::span<const double> pts, int deriv_order = 0) const;

 private:
  OrthonormalBasis1D() = default;
  double lo_ = 0.0, hi_ = 0.0;
  int n_ = 0;
  // coeff_[d] holds the n_ x n_ coefficient matrix of the d-th derivative
  // (row-major, row n-1 is psi_n). d/dt[(p) e^t] = (p + p') e^t keeps degrees.
  std::vector<double> coeff_[3];
};

// Flattened ordering of the 2D tensor index (n1, nt), both 1-based:
// flat = (n1-1)*Nt + (nt-1).
struct TensorBasisIndex {
  int n1 = 1;
  int nt = 1;

  int flat(int cutoff_nt) const { return (n1 - 1) * cutoff_nt + (nt - 1); }
  static TensorBasisIndex from_flat(int flat, int cutoff_nt) {
    return {flat / cutoff_nt + 1, flat % cutoff_nt + 1};
  }
};

enum class TensorEvalMode { Value, Dt, Dxx, ValueAtT0 };

/// P_(n1,nt)(x,t) = Psi_n1(x) psi_nt(t) and the derivative combinations the
/// Galerkin system needs.
double eval_tensor_basis(const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
                         TensorBasisIndex idx, double x, double t, TensorEvalMode mode);

}  // namespace pcip

#endif
