#ifndef PCIP_LINALG_HPP
#define PCIP_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace pcip {

// Dense row-major matrix, just enough for this project.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  std::span<double> row(int r) { return {a.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
  std::span<const double> row(int r) const { return {a.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
};

Mat matmul(const Mat& x, const Mat& y);
Mat transpose(const Mat& x);

// In-place Cholesky solve for a small dense SPD system, one RHS per column.
// Returns false if a pivot is not strictly positive.
bool dense_spd_solve(Mat a, Mat& b);

// Gauss-Legendre nodes/weights on [lo, hi].
void gauss_legendre(int n, double lo, double hi,
                    std::vector<double>& nodes, std::vector<double>& weights);

// Composite Simpson weights on a uniform grid with 2*panels+1 points.
std::vector<double> simpson_weights(double lo, double hi, int panels);

// Trapezoid weights on a uniform grid (h/2 at the ends).
std::vector<double> trapezoid_weights(double lo, double hi, int npoints);

double dot(std::span<const double> x, std::span<const double> y);

}  // namespace pcip

#endif
