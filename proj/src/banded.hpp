#ifndef PCIP_BANDED_HPP
#define PCIP_BANDED_HPP

#include <span>
#include <vector>

namespace pcip {

// Symmetric banded matrix, lower band storage: band(d, j) = A(j + d, j),
// d = 0..kd. Only the lower triangle is stored; add() folds (i, j) with
// i < j onto its mirror image.
class SymmetricBandMatrix {
 public:
  SymmetricBandMatrix() = default;
  SymmetricBandMatrix(int n, int kd)
      : n_(n), kd_(kd), band_(static_cast<size_t>(kd + 1) * n, 0.0) {}

  int n() const { return n_; }
  int kd() const { return kd_; }

  double at(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i - j > kd_) return 0.0;
    return band_[static_cast<size_t>(i - j) * n_ + j];
  }
  void add(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    band_[static_cast<size_t>(i - j) * n_ + j] += v;
  }

  std::span<const double> raw() const { return band_; }
  std::span<double> raw() { return band_; }

  // y = A x
  void matvec(std::span<const double> x, std::span<double> y) const;

 private:
  int n_ = 0, kd_ = 0;
  std::vector<double> band_;
};

// In-band right-looking Cholesky A = L L^T. Deterministic, single-threaded.
class BandedCholesky {
 public:
  /// Throws Error(SingularSystem) if a pivot is not strictly positive.
  explicit BandedCholesky(const SymmetricBandMatrix& a);

  std::vector<double> solve(std::span<const double> b) const;

 private:
  int n_ = 0, kd_ = 0;
  std::vector<double> l_;  // same layout as SymmetricBandMatrix
};

// Normal equations of a quadratic functional J(x) = x^T A x - 2 b^T x + c0,
// gradient 2(A x - b).
struct QuadraticSystem {
  SymmetricBandMatrix A;
  std::vector<double> b;
  double constant = 0.0;

  double evaluate(std::span<const double> x) const;  // J(x)
};

/// Minimizer of the quadratic system via banded Cholesky plus one round of
/// iterative refinement; enforces relative residual ||Ax-b||/||b|| <= 1e-8.
std::vector<double> minimize(const QuadraticSystem& system);

}  // namespace pcip

#endif
