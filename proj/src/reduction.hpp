#ifndef PCIP_REDUCTION_HPP
#define PCIP_REDUCTION_HPP

#include <vector>

#include "basis.hpp"
#include "forward.hpp"
#include "linalg.hpp"

namespace pcip {

struct CutoffSpec {
  int n1 = 15;
  int nt = 10;

  int flat_count() const { return n1 * nt; }
  void validate() const;
};

// Cauchy endpoint data of the mode tensor: v(+-R) and v'(+-R), each indexed
// by the flat tensor index.
struct CauchyData {
  std::vector<double> p_plus, p_minus, q_plus, q_minus;
};

/// Projection machinery on a fixed (x, t) sample grid: Fourier coefficients
/// against the tensor basis, truncation mismatch, and the spectral time
/// derivative (differentiate the truncated expansion, never the samples).
///
/// Coefficients solve the trapezoid-weighted normal equations, so any field
/// inside the truncated span is reproduced exactly on the grid; plain
/// quadrature sums are not a projection at these mode counts (the discrete
/// Gram of the high modes is far from identity on the data grid).
class Projector {
 public:
  Projector(const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
            std::vector<double> xgrid, std::vector<double> tgrid);

  /// Coefficient matrix (n1 x nt) of data sampled as (x major, t minor).
  Mat fourier_coeffs(const Mat& data) const;

  /// Evaluate a coefficient matrix back onto the sample grid.
  Mat reconstruct(const Mat& coeffs, bool time_derivative = false) const;

  /// sup over the grid of |data - truncated expansion|.
  double mismatch_sup(const Mat& data) const;

  /// Time derivative of the truncated expansion, sampled on the grid.
  Mat spectral_time_derivative(const Mat& data) const;

  const std::vector<double>& xgrid() const { return x_; }
  const std::vector<double>& tgrid() const { return t_; }
  int n1() const { return px_.rows; }
  int nt() const { return pt_.rows; }

 private:
  std::vector<double> x_, t_, wx_, wt_;
  Mat px_, pt_, ptd_;      // basis values on the grid
  Mat pxw_, ptw_;          // weighted rows
  Mat gx_, gt_;            // discrete Grams (kept factor-ready)
};

/// Mat view of a boundary record's f or g samples.
Mat record_samples(const BoundaryRecord& rec, bool g_channel, int time_stride);

/// Subsampled time grid of a record (every `stride`-th forward layer).
std::vector<double> subsampled_times(double T, int nt_time, int stride);

/// Cauchy endpoint data of the reduced system: project the spectral time
/// derivative of f (values) and g (fluxes) on both sides.
CauchyData build_cauchy_data(const BoundaryRecord& top, const BoundaryRecord& bottom,
                             const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
                             const std::vector<double>& xgrid, double T, int time_stride);

}  // namespace pcip

#endif
