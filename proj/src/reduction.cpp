#include "reduction.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace pcip {

void CutoffSpec::validate() const {
  if (n1 < 1 || n1 > kMaxBasisCount || nt < 1 || nt > kMaxBasisCount)
    throw Error(ErrorCode::InvalidConfig,
                "cutoff (N1, Nt) must lie in [1, " + std::to_string(kMaxBasisCount) + "]^2, got (" +
                    std::to_string(n1) + ", " + std::to_string(nt) + ")");
}

Projector::Projector(const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
                     std::vector<double> xgrid, std::vector<double> tgrid)
    : x_(std::move(xgrid)), t_(std::move(tgrid)) {
  wx_ = trapezoid_weights(x_.front(), x_.back(), static_cast<int>(x_.size()));
  wt_ = trapezoid_weights(t_.front(), t_.back(), static_cast<int>(t_.size()));
  px_ = bx.eval_all(x_, 0);
  pt_ = bt.eval_all(t_, 0);
  ptd_ = bt.eval_all(t_, 1);
  pxw_ = px_;
  for (int n = 0; n < pxw_.rows; ++n)
    for (size_t j = 0; j < x_.size(); ++j) pxw_(n, static_cast<int>(j)) *= wx_[j];
  ptw_ = pt_;
  for (int n = 0; n < ptw_.rows; ++n)
    for (size_t j = 0; j < t_.size(); ++j) ptw_(n, static_cast<int>(j)) *= wt_[j];
  gx_ = matmul(pxw_, transpose(px_));
  gt_ = matmul(ptw_, transpose(pt_));
}

Mat Projector::fourier_coeffs(const Mat& data) const {
  // q = Px W data W Pt^T, then solve Gx C Gt = q
  Mat q = matmul(matmul(pxw_, data), transpose(ptw_));
  if (!dense_spd_solve(gx_, q))
    throw Error(ErrorCode::NonPositiveDefinite, "discrete x-Gram not positive definite");
  Mat qt = transpose(q);
  if (!dense_spd_solve(gt_, qt))
    throw Error(ErrorCode::NonPositiveDefinite, "discrete t-Gram not positive definite");
  return transpose(qt);
}

Mat Projector::reconstruct(const Mat& coeffs, bool time_derivative) const {
  const Mat& pt = time_derivative ? ptd_ : pt_;
  return matmul(matmul(transpose(px_), coeffs), pt);
}

double Projector::mismatch_sup(const Mat& data) const {
  Mat rec = reconstruct(fourier_coeffs(data));
  double sup = 0.0;
  for (size_t i = 0; i < data.a.size(); ++i) sup = std::max(sup, std::abs(data.a[i] - rec.a[i]));
  return sup;
}

Mat Projector::spectral_time_derivative(const Mat& data) const {
  return reconstruct(fourier_coeffs(data), true);
}

Mat record_samples(const BoundaryRecord& rec, bool g_channel, int time_stride) {
  const int nts = (rec.nt - 1) / time_stride + 1;
  Mat out(rec.nx, nts);
  for (int ix = 0; ix < rec.nx; ++ix)
    for (int it = 0; it < nts; ++it)
      out(ix, it) = g_channel ? rec.gat(ix, it * time_stride) : rec.fat(ix, it * time_stride);
  return out;
}

std::vector<double> subsampled_times(double T, int nt_time, int stride) {
  if ((nt_time - 1) % stride != 0)
    throw Error(ErrorCode::InvalidConfig,
                "reduce_time_stride must divide nt_time - 1, got stride " + std::to_string(stride) +
                    " for " + std::to_string(nt_time) + " layers");
  const double dt = T / (nt_time - 1);
  std::vector<double> t((nt_time - 1) / stride + 1);
  for (size_t l = 0; l < t.size(); ++l) t[l] = static_cast<double>(l * stride) * dt;
  return t;
}

CauchyData build_cauchy_data(const BoundaryRecord& top, const BoundaryRecord& bottom,
                             const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
                             const std::vector<double>& xgrid, double T, int time_stride) {
  if (top.nx != bottom.nx || top.nt != bottom.nt)
    throw Error(ErrorCode::GridMismatch, "top and bottom records must share the sample grid");
  Projector proj(bx, bt, xgrid, subsampled_times(T, top.nt, time_stride));
  auto project_dt = [&](const BoundaryRecord& rec, bool g_channel) {
    Mat samples = record_samples(rec, g_channel, time_stride);
    Mat c = proj.fourier_coeffs(proj.spectral_time_derivative(samples));
    return c.a;  // row-major (n1, nt) == flat tensor ordering
  };
  CauchyData out;
  out.p_plus = project_dt(top, false);
  out.q_plus = project_dt(top, true);
  out.p_minus = project_dt(bottom, false);
  out.q_minus = project_dt(bottom, true);
  return out;
}

}  // namespace pcip
