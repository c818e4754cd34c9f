#ifndef PCIP_CARLEMAN_HPP
#define PCIP_CARLEMAN_HPP

#include <functional>
#include <string>
#include <vector>

#include "banded.hpp"
#include "galerkin.hpp"
#include "reduction.hpp"

namespace pcip {

struct CarlemanParams {
  double lambda = 3.0;
  double z0 = -10.0;
  double eps = 3e-2;        // H^2 regularization weight
  double kappa0 = 1e-3;     // L2 stopping threshold
  int max_iters = 30;
  double ball_radius = 1e3; // B_M diagnostic only, never enforced

  void validate(double R) const;
};

/// Carleman weight e^{2 lambda (z - z0)^{-2}}.
double carleman_weight(double z, const CarlemanParams& params);

struct IterationRecord {
  int k = 0;
  double l2_change = 0.0;        // ||v^k - v^{k-1}||_{L2(-R,R)}
  double rel_linf_change = 0.0;  // ||v^k - v^{k-1}||_inf / ||v^k||_inf
  double j_value = 0.0;
  double h2_norm = 0.0;          // discrete H^2 norm of the iterate
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  bool exceeded_ball = false;
};

/// Normal equations of the discrete functional
///   J(v) = sum_i w(z_i) |D2 v + S::v + F|^2 h  (interior nodes)
///        + lambda^4 w(+-R) (|v(+-R) - P(+-R)|^2 + |v'(+-R) - Q(+-R)|^2)
///        + eps (||v||^2 + ||v'||^2 + ||v''||^2)  (trapezoid-discretized)
/// with second-order one-sided endpoint stencils for v' and shifted
/// three-point stencils for the endpoint v'' regularization rows.
/// f_source may be empty (treated as zero).
QuadraticSystem build_normal_equations(const GalerkinOperators& ops, const Mat& f_source,
                                       const CauchyData& cauchy, const CarlemanParams& params,
                                       const std::vector<double>& zgrid);

/// Linear quasi-reversibility solve (nonlinearity excluded).
ModeProfile initial_guess(const GalerkinOperators& ops, const CauchyData& cauchy,
                          const CarlemanParams& params, const std::vector<double>& zgrid);

/// Picard loop: v^0 = initial guess, v^{k+1} minimizes J with
/// F_source = F(v^k), stop when the consecutive L2 change falls to kappa0.
/// Non-convergence is reported through trace.converged, artifacts intact.
std::pair<ModeProfile, IterationTrace> picard_solve(const GalerkinOperators& ops,
                                                    const CauchyData& cauchy,
                                                    const CarlemanParams& params,
                                                    const std::vector<double>& zgrid);

// ---- numerical verification of the Carleman estimate ----

struct CarlemanTestFunction {
  std::string name;
  std::function<double(double)> w, dw, ddw;
};

struct CarlemanEstimateEntry {
  std::string name;
  double lambda = 0.0;
  double lhs = 0.0;       // int W |w''|^2
  double boundary = 0.0;  // boundary group (enters negatively)
  double interior_w = 0.0;    // lambda^3 int W |w|^2
  double interior_dw = 0.0;   // lambda int W |w'|^2
  bool holds = false;     // with the calibrated constant
};

struct CarlemanCalibration {
  double c_star = 0.0;
  std::string binding;    // calibration function that determined c_star
  bool all_hold = false;  // every held-out (function, lambda) pair satisfied
  std::vector<CarlemanEstimateEntry> entries;
};

struct CarlemanSuiteOptions {
  std::vector<CarlemanTestFunction> calibration;
  std::vector<CarlemanTestFunction> heldout;
  std::vector<double> calibration_lambdas;
  std::vector<double> verify_lambdas;
  double R = 1.0;
  double z0 = -3.75;
  int simpson_panels = 10000;
};

/// Calibrates the largest C for which the estimate holds on the calibration
/// set, then verifies the held-out set with that C. Throws
/// Error(CalibrationFailed) if no positive C works at the largest lambda.
CarlemanCalibration verify_carleman_estimate(const CarlemanSuiteOptions& opts);

/// Default function families used by the acceptance suite.
std::vector<CarlemanTestFunction> carleman_calibration_family();
std::vector<CarlemanTestFunction> carleman_heldout_family();

}  // namespace pcip

#endif
