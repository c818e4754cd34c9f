#include "banded.hpp"

#include <cassert>
#include <cmath>
#include <tuple>
#include <string>

#include "error.hpp"

namespace pcip {

void SymmetricBandMatrix::matvec(std::span<const double> x, std::span<double> y) const {
  assert(static_cast<int>(x.size()) == n_ && static_cast<int>(y.size()) == n_);
  for (int i = 0; i < n_; ++i) y[i] = band_[static_cast<size_t>(0) * n_ + i] * x[i];
  for (int d = 1; d <= kd_; ++d) {
    const double* bd = band_.data() + static_cast<size_t>(d) * n_;
    for (int j = 0; j + d < n_; ++j) {
      const double v = bd[j];
      if (v == 0.0) continue;
      y[j + d] += v * x[j];
      y[j] += v * x[j + d];
    }
  }
}

BandedCholesky::BandedCholesky(const SymmetricBandMatrix& a)
    : n_(a.n()), kd_(a.kd()), l_(a.raw().begin(), a.raw().end()) {
  // right-looking update keeps the inner loops contiguous in the band layout
  auto at = [&](int d, int j) -> double& { return l_[static_cast<size_t>(d) * n_ + j]; };
  for (int j = 0; j < n_; ++j) {
    double d = at(0, j);
    if (!(d > 0.0))
      throw Error(ErrorCode::SingularSystem,
                  "banded factorization failed at column " + std::to_string(j) +
                      " (pivot " + std::to_string(d) + "); regularization too small for conditioning");
    const double ljj = std::sqrt(d);
    at(0, j) = ljj;
    const int reach = std::min(kd_, n_ - 1 - j);
    for (int r = 1; r <= reach; ++r) at(r, j) /= ljj;
    for (int c = 1; c <= reach; ++c) {
      const double ljc = at(c, j);  // L(j+c, j)
      if (ljc == 0.0) continue;
      // A(j+r, j+c) -= L(j+r, j) * L(j+c, j), r = c..reach
      for (int r = c; r <= reach; ++r)
        l_[static_cast<size_t>(r - c) * n_ + (j + c)] -= at(r, j) * ljc;
    }
  }
}

std::vector<double> BandedCholesky::solve(std::span<const double> b) const {
  assert(static_cast<int>(b.size()) == n_);
  std::vector<double> x(b.begin(), b.end());
  // L y = b
  for (int j = 0; j < n_; ++j) {
    const double yj = x[j] / l_[j];
    x[j] = yj;
    const int reach = std::min(kd_, n_ - 1 - j);
    for (int r = 1; r <= reach; ++r) x[j + r] -= l_[static_cast<size_t>(r) * n_ + j] * yj;
  }
  // L^T x = y
  for (int j = n_ - 1; j >= 0; --j) {
    double s = x[j];
    const int reach = std::min(kd_, n_ - 1 - j);
    for (int r = 1; r <= reach; ++r) s -= l_[static_cast<size_t>(r) * n_ + j] * x[j + r];
    x[j] = s / l_[j];
  }
  return x;
}

double QuadraticSystem::evaluate(std::span<const double> x) const {
  std::vector<double> ax(x.size());
  A.matvec(x, ax);
  double xax = 0.0, bx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    xax += x[i] * ax[i];
    bx += b[i] * x[i];
  }
  return xax - 2.0 * bx + constant;
}

std::vector<double> minimize(const QuadraticSystem& system) {
  BandedCholesky fac(system.A);
  std::vector<double> x = fac.solve(system.b);
  const int n = system.A.n();
  std::vector<double> r(n);

  auto residual_norms = [&]() {
    system.A.matvec(x, r);
    double rn = 0.0, bn = 0.0;
    for (int i = 0; i < n; ++i) {
      r[i] = system.b[i] - r[i];
      rn += r[i] * r[i];
      bn += system.b[i] * system.b[i];
    }
    return std::pair{std::sqrt(rn), std::sqrt(bn)};
  };

  auto [rn, bn] = residual_norms();
  if (bn == 0.0) return x;
  for (int round = 0; round < 3 && rn > 1e-10 * bn; ++round) {
    std::vector<double> e = fac.solve(r);
    for (int i = 0; i < n; ++i) x[i] += e[i];
    std::tie(rn, bn) = residual_norms();
  }
  if (!(rn <= 1e-8 * bn))
    throw Error(ErrorCode::SingularSystem,
                "banded solve residual " + std::to_string(rn / bn) +
                    " exceeds 1e-8; system too ill-conditioned at working precision");
  return x;
}

}  // namespace pcip
