#include "reconstruction.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace pcip {

Mat synthesize_v(const ModeProfile& profile, const OrthonormalBasis1D& bx,
                 const OrthonormalBasis1D& bt, const CutoffSpec& cutoff,
                 const std::vector<double>& xgrid, double t) {
  const int nz = static_cast<int>(profile.zgrid.size());
  const int nxs = static_cast<int>(xgrid.size());
  // collapse the time factor first: a[n1][z] = sum_nt v_(n1,nt)(z) psi_nt(t)
  Mat a(cutoff.n1, nz);
  for (int n1 = 0; n1 < cutoff.n1; ++n1)
    for (int nt = 0; nt < cutoff.nt; ++nt) {
      const double pt = bt.eval(nt + 1, t);
      if (pt == 0.0) continue;
      for (int i = 0; i < nz; ++i) a(n1, i) += pt * profile.values(n1 * cutoff.nt + nt, i);
    }
  Mat px = bx.eval_all(xgrid, 0);  // n1 x nx
  Mat out(nxs, nz);
  for (int ix = 0; ix < nxs; ++ix)
    for (int n1 = 0; n1 < cutoff.n1; ++n1) {
      const double pv = px(n1, ix);
      for (int i = 0; i < nz; ++i) out(ix, i) += pv * a(n1, i);
    }
  return out;
}

CoefficientField reconstruct_c(const ModeProfile& profile, const OrthonormalBasis1D& bx,
                               const OrthonormalBasis1D& bt, const CutoffSpec& cutoff,
                               double p_value, const std::vector<double>& xgrid) {
  if (!(p_value > 0.0))
    throw Error(ErrorCode::InvalidInitialCondition, "constant initial value p must be positive");
  Mat v0 = synthesize_v(profile, bx, bt, cutoff, xgrid, 0.0);
  CoefficientField field;
  field.xgrid = xgrid;
  field.zgrid = profile.zgrid;
  field.values.assign(v0.a.size(), 0.0);
  for (size_t i = 0; i < v0.a.size(); ++i) field.values[i] = v0.a[i] / p_value;
  return field;
}

ReconstructionReport metrics(const CoefficientField& c_comp, const CoefficientField& c_true,
                             const std::vector<InclusionMask>& masks) {
  if (c_comp.xgrid != c_true.xgrid || c_comp.zgrid != c_true.zgrid)
    throw Error(ErrorCode::GridMismatch, "metrics require both fields on the same grid");
  ReconstructionReport rep;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < c_comp.values.size(); ++i) {
    const double d = c_comp.values[i] - c_true.values[i];
    num += d * d;
    den += c_true.values[i] * c_true.values[i];
  }
  rep.l2_relative_error = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  for (const auto& mask : masks) {
    double mx_comp = -std::numeric_limits<double>::infinity();
    double mx_true = -std::numeric_limits<double>::infinity();
    double sum_comp = 0.0;
    long count = 0;
    for (size_t ix = 0; ix < c_comp.xgrid.size(); ++ix)
      for (size_t iz = 0; iz < c_comp.zgrid.size(); ++iz)
        if (mask.inside(c_comp.xgrid[ix], c_comp.zgrid[iz])) {
          mx_comp = std::max(mx_comp, c_comp.at(static_cast<int>(ix), static_cast<int>(iz)));
          mx_true = std::max(mx_true, c_true.at(static_cast<int>(ix), static_cast<int>(iz)));
          sum_comp += c_comp.at(static_cast<int>(ix), static_cast<int>(iz));
          ++count;
        }
    rep.inclusion_names.push_back(mask.name);
    rep.max_in_inclusion.push_back(mx_comp);
    rep.mean_in_inclusion.push_back(count > 0 ? sum_comp / count : 0.0);
    rep.relative_max_error.push_back(mx_true != 0.0 ? std::abs(mx_comp - mx_true) / std::abs(mx_true)
                                                    : std::abs(mx_comp));
  }
  return rep;
}

CoefficientField sample_phantom(const PhantomSpec& spec, const std::vector<double>& xgrid,
                                const std::vector<double>& zgrid) {
  CoefficientField field;
  field.xgrid = xgrid;
  field.zgrid = zgrid;
  field.values.resize(xgrid.size() * zgrid.size());
  for (size_t ix = 0; ix < xgrid.size(); ++ix)
    for (size_t iz = 0; iz < zgrid.size(); ++iz)
      field.values[ix * zgrid.size() + iz] = eval_phantom(spec, xgrid[ix], zgrid[iz]);
  return field;
}

}  // namespace pcip
