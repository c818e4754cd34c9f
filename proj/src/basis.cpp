#include "basis.hpp"

#include <quadmath.h>

#include <cmath>
#include <string>

#include "error.hpp"

namespace pcip {

namespace {

// Downward evaluation of m_k = int t^k e^{2t} dt. The identity
// m_k = [t^k e^{2t}/2] - (k/2) m_{k-1} amplifies errors by k/2 per forward
// step; run it downward (error shrinks by 2/k) from a zero seed well above
// the highest degree needed.
std::vector<__float128> moments_q(__float128 lo, __float128 hi, int max_degree) {
  const int extra = 40;
  const int top = max_degree + extra;
  const __float128 e2hi = expq(2 * hi), e2lo = expq(2 * lo);
  std::vector<__float128> m(max_degree + 1, 0);
  __float128 cur = 0;
  __float128 hik = powq(hi, top), lok = powq(lo, top);
  for (int k = top; k >= 1; --k) {
    const __float128 boundary = (hik * e2hi - lok * e2lo) / 2;
    cur = (2 / __float128(k)) * (boundary - cur);
    if (k - 1 <= max_degree) m[k - 1] = cur;
    if (hi != 0) hik /= hi; else hik = (k - 1 == 0) ? 1 : 0;
    if (lo != 0) lok /= lo; else lok = (k - 1 == 0) ? 1 : 0;
  }
  return m;
}

// Polynomial coefficient row of d/dt[(p)e^t] = (p + p')e^t.
void derive_row(const double* in, double* out, int n) {
  for (int k = 0; k < n; ++k) out[k] = in[k];
  for (int k = 1; k < n; ++k) out[k - 1] += k * in[k];
}

}  // namespace

std::vector<double> exact_moments(double lo, double hi, int max_degree) {
  auto mq = moments_q(lo, hi, max_degree);
  std::vector<double> m(mq.size());
  for (size_t i = 0; i < mq.size(); ++i) m[i] = static_cast<double>(mq[i]);
  return m;
}

OrthonormalBasis1D OrthonormalBasis1D::orthonormalize(const RawFamilySpec& spec) {
  if (!(spec.lo < spec.hi))
    throw Error(ErrorCode::InvalidConfig, "basis interval requires lo < hi");
  if (spec.count < 1 || spec.count > kMaxBasisCount)
    throw Error(ErrorCode::InvalidConfig,
                "basis count must be in [1, " + std::to_string(kMaxBasisCount) +
                    "], got " + std::to_string(spec.count));
  const int n = spec.count;

  // Exact Gram of {t^{j} e^t}: G_ij = m_{i+j}. The raw family is severely
  // ill-conditioned (kappa up to ~1e13 at the sizes used here), so the
  // factorization runs in quad precision and only the final coefficients
  // are rounded to double.
  auto m = moments_q(spec.lo, spec.hi, 2 * (n - 1));
  std::vector<__float128> g(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[static_cast<size_t>(i) * n + j] = m[i + j];

  // lower Cholesky G = L L^T
  for (int j = 0; j < n; ++j) {
    __float128 d = g[static_cast<size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      const __float128 v = g[static_cast<size_t>(j) * n + k];
      d -= v * v;
    }
    if (!(d > 0))
      throw Error(ErrorCode::NonPositiveDefinite,
                  "moment Gram matrix not positive definite at working precision: "
                  "count " + std::to_string(spec.count) + " too large for interval [" +
                      std::to_string(spec.lo) + ", " + std::to_string(spec.hi) + "]");
    const __float128 ljj = sqrtq(d);
    g[static_cast<size_t>(j) * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      __float128 s = g[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= g[static_cast<size_t>(i) * n + k] * g[static_cast<size_t>(j) * n + k];
      g[static_cast<size_t>(i) * n + j] = s / ljj;
    }
  }

  // Row i of L^{-1} gives psi_i = sum_j C_ij phi_j. Forward substitution
  // L y = e_i produces column i of L^{-1}; store and transpose on copy-out.
  std::vector<__float128> c(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    std::vector<__float128> y(n, 0);
    for (int j = i; j < n; ++j) {
      __float128 s = (j == i) ? __float128(1) : __float128(0);
      for (int k = i; k < j; ++k) s -= g[static_cast<size_t>(j) * n + k] * y[k];
      y[j] = s / g[static_cast<size_t>(j) * n + j];
    }
    for (int j = 0; j < n; ++j) c[static_cast<size_t>(i) * n + j] = y[j];
  }

  OrthonormalBasis1D out;
  out.lo_ = spec.lo;
  out.hi_ = spec.hi;
  out.n_ = n;
  out.coeff_[0].assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.coeff_[0][static_cast<size_t>(i) * n + j] =
          static_cast<double>(c[static_cast<size_t>(j) * n + i]);

  for (int d = 1; d <= 2; ++d) {
    out.coeff_[d].assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      derive_row(out.coeff_[d - 1].data() + static_cast<size_t>(i) * n,
                 out.coeff_[d].data() + static_cast<size_t>(i) * n, n);
  }
  return out;
}

double OrthonormalBasis1D::eval(int n, double t, int deriv_order) const {
  const double* row = coeff_[deriv_order].data() + static_cast<size_t>(n - 1) * n_;
  double p = 0.0;
  for (int k = n_ - 1; k >= 0; --k) p = p * t + row[k];
  return p * std::exp(t);
}

Mat OrthonormalBasis1D::eval_all(std::span<const double> pts, int deriv_order) const {
  Mat out(n_, static_cast<int>(pts.size()));
  for (int n = 1; n <= n_; ++n)
    for (size_t j = 0; j < pts.size(); ++j) out(n - 1, static_cast<int>(j)) = eval(n, pts[j], deriv_order);
  return out;
}

double eval_tensor_basis(const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
                         TensorBasisIndex idx, double x, double t, TensorEvalMode mode) {
  switch (mode) {
    case TensorEvalMode::Value:
      return bx.eval(idx.n1, x) * bt.eval(idx.nt, t);
    case TensorEvalMode::Dt:
      return bx.eval(idx.n1, x) * bt.eval(idx.nt, t, 1);
    case TensorEvalMode::Dxx:
      return bx.eval(idx.n1, x, 2) * bt.eval(idx.nt, t);
    case TensorEvalMode::ValueAtT0:
      return bx.eval(idx.n1, x) * bt.eval(idx.nt, 0.0);
  }
  return 0.0;
}

}  // namespace pcip
