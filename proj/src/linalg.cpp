#include "linalg.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace pcip {

Mat matmul(const Mat& x, const Mat& y) {
  assert(x.cols == y.rows);
  Mat out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) out(i, j) += xik * y(k, j);
    }
  }
  return out;
}

Mat transpose(const Mat& x) {
  Mat out(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
  return out;
}

bool dense_spd_solve(Mat a, Mat& b) {
  assert(a.rows == a.cols && a.rows == b.rows);
  const int n = a.rows;
  // lower Cholesky in place
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  for (int c = 0; c < b.cols; ++c) {
    for (int i = 0; i < n; ++i) {
      double s = b(i, c);
      for (int k = 0; k < i; ++k) s -= a(i, k) * b(k, c);
      b(i, c) = s / a(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = b(i, c);
      for (int k = i + 1; k < n; ++k) s -= a(k, i) * b(k, c);
      b(i, c) = s / a(i, i);
    }
  }
  return true;
}

void gauss_legendre(int n, double lo, double hi,
                    std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton from the Chebyshev-like initial guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nodes[i] = 0.5 * (hi - lo) * (-x) + 0.5 * (hi + lo);
    nodes[n - 1 - i] = 0.5 * (hi - lo) * x + 0.5 * (hi + lo);
    weights[i] = weights[n - 1 - i] = 0.5 * (hi - lo) * w;
  }
}

std::vector<double> simpson_weights(double lo, double hi, int panels) {
  const int n = 2 * panels + 1;
  std::vector<double> w(n, 1.0);
  for (int i = 1; i < n - 1; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
  const double h = (hi - lo) / (2.0 * panels);
  for (double& v : w) v *= h / 3.0;
  return w;
}

std::vector<double> trapezoid_weights(double lo, double hi, int npoints) {
  const double h = (hi - lo) / (npoints - 1);
  std::vector<double> w(npoints, h);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace pcip
