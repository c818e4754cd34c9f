#ifndef PCIP_RECONSTRUCTION_HPP
#define PCIP_RECONSTRUCTION_HPP

#include <string>
#include <vector>

#include "basis.hpp"
#include "galerkin.hpp"
#include "phantoms.hpp"

namespace pcip {

// c sampled on the (x_i, z_j) grid, row-major over x.
struct CoefficientField {
  std::vector<double> xgrid;
  std::vector<double> zgrid;
  std::vector<double> values;

  double at(int ix, int iz) const { return values[static_cast<size_t>(ix) * zgrid.size() + iz]; }
  double& at(int ix, int iz) { return values[static_cast<size_t>(ix) * zgrid.size() + iz]; }
};

struct ReconstructionReport {
  std::vector<std::string> inclusion_names;
  std::vector<double> max_in_inclusion;
  std::vector<double> mean_in_inclusion;
  std::vector<double> relative_max_error;
  double l2_relative_error = 0.0;  // absolute L2 when the true field vanishes
  int iterations = 0;
  double wall_time_seconds = 0.0;
  bool converged = false;
};

/// v(x, z_j, t) = sum_n v_n(z_j) Psi_n1(x) psi_nt(t) on profile z-nodes.
Mat synthesize_v(const ModeProfile& profile, const OrthonormalBasis1D& bx,
                 const OrthonormalBasis1D& bt, const CutoffSpec& cutoff,
                 const std::vector<double>& xgrid, double t);

/// c(x, z) = v(x, z, 0) / p for constant p (Delta p = 0).
CoefficientField reconstruct_c(const ModeProfile& profile, const OrthonormalBasis1D& bx,
                               const OrthonormalBasis1D& bt, const CutoffSpec& cutoff,
                               double p_value, const std::vector<double>& xgrid);

/// Per-inclusion maxima over the analytic masks plus the global L2 error.
ReconstructionReport metrics(const CoefficientField& c_comp, const CoefficientField& c_true,
                             const std::vector<InclusionMask>& masks);

CoefficientField sample_phantom(const PhantomSpec& spec, const std::vector<double>& xgrid,
                                const std::vector<double>& zgrid);

}  // namespace pcip

#endif
