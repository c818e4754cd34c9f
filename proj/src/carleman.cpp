#include "carleman.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

#include "error.hpp"

namespace pcip {

void CarlemanParams::validate(double R) const {
  if (!(z0 < -R))
    throw Error(ErrorCode::InvalidConfig,
                "Carleman point must satisfy z0 < -R, got z0 = " + std::to_string(z0));
  if (!(lambda >= 1.0))
    throw Error(ErrorCode::InvalidConfig, "Carleman parameter requires lambda >= 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "regularization weight eps must be > 0");
  if (!(kappa0 > 0.0)) throw Error(ErrorCode::InvalidConfig, "stopping threshold kappa0 must be > 0");
  if (max_iters < 1) throw Error(ErrorCode::InvalidConfig, "max_iters must be >= 1");
  if (!(ball_radius > 0.0)) throw Error(ErrorCode::InvalidConfig, "ball radius M must be > 0");
}

double carleman_weight(double z, const CarlemanParams& params) {
  const double d = z - params.z0;
  return std::exp(2.0 * params.lambda / (d * d));
}

namespace {

// second-order one-sided first-derivative stencils at the grid ends
struct EndStencil {
  int base;          // first node the stencil touches
  double c[3];
};

EndStencil left_d1(double h) { return {0, {-3.0 / (2 * h), 4.0 / (2 * h), -1.0 / (2 * h)}}; }
EndStencil right_d1(double h, int nz) { return {nz - 3, {1.0 / (2 * h), -4.0 / (2 * h), 3.0 / (2 * h)}}; }

// Adds weight * (stencil x I)^T (stencil x I) restricted to upper block pairs.
void add_scalar_stencil(SymmetricBandMatrix& A, int nb, int base, std::span<const double> st,
                        double weight) {
  for (size_t a = 0; a < st.size(); ++a) {
    if (st[a] == 0.0) continue;
    for (size_t b = a; b < st.size(); ++b) {
      if (st[b] == 0.0) continue;
      const double v = weight * st[a] * st[b];
      const int ia = (base + static_cast<int>(a)) * nb;
      const int ib = (base + static_cast<int>(b)) * nb;
      for (int m = 0; m < nb; ++m) A.add(ia + m, ib + m, v);
    }
  }
}

// Adds weight * M into block (bi, bj); for bi == bj only the lower triangle
// of M is consumed (M must be symmetric there).
void add_block(SymmetricBandMatrix& A, int nb, int bi, int bj, const Mat& M, double weight) {
  if (bi == bj) {
    for (int r = 0; r < nb; ++r)
      for (int c = 0; c <= r; ++c) A.add(bi * nb + r, bj * nb + c, weight * M(r, c));
  } else {
    for (int r = 0; r < nb; ++r)
      for (int c = 0; c < nb; ++c) A.add(bi * nb + r, bj * nb + c, weight * M(r, c));
  }
}

struct AssemblyCache {
  Mat sts;       // S^T S
  Mat s_sym;     // S + S^T
};

}  // namespace

QuadraticSystem build_normal_equations(const GalerkinOperators& ops, const Mat& f_source,
                                       const CauchyData& cauchy, const CarlemanParams& params,
                                       const std::vector<double>& zgrid) {
  const int nb = ops.nb();
  const int nz = static_cast<int>(zgrid.size());
  const double R = zgrid.back();
  params.validate(R);
  if (nz < 5) throw Error(ErrorCode::InvalidConfig, "z-grid needs nz >= 5");
  const double h = zgrid[1] - zgrid[0];
  const double invh2 = 1.0 / (h * h);
  const bool have_f = f_source.rows == nb && f_source.cols == nz;

  const int n = nb * nz;
  const int kd = 2 * nb;
  QuadraticSystem sys;
  sys.A = SymmetricBandMatrix(n, kd);
  sys.b.assign(n, 0.0);

  // ---- interior residual sum_i w_i h |B1 v_{i-1} + B0 v_i + B1 v_{i+1} + F_i|^2
  // with B1 = I/h^2, B0 = S - 2I/h^2. Block products precomputed once.
  Mat sts = matmul(transpose(ops.S), ops.S);
  Mat p00 = sts;  // (S - 2/h^2 I)^T (S - 2/h^2 I)
  for (int r = 0; r < nb; ++r) {
    for (int c = 0; c < nb; ++c) p00(r, c) += -2.0 * invh2 * (ops.S(r, c) + ops.S(c, r));
    p00(r, r) += 4.0 * invh2 * invh2;
  }
  Mat p10(nb, nb);  // B1^T B0 = (S - 2/h^2 I)/h^2
  for (int r = 0; r < nb; ++r) {
    for (int c = 0; c < nb; ++c) p10(r, c) = ops.S(r, c) * invh2;
    p10(r, r) -= 2.0 * invh2 * invh2;
  }
  Mat p10t = transpose(p10);

  std::vector<double> w(nz);
  for (int i = 0; i < nz; ++i) w[i] = carleman_weight(zgrid[i], params);

  for (int i = 1; i < nz - 1; ++i) {
    const double c = w[i] * h;
    // diagonal blocks
    for (int m = 0; m < nb; ++m) {
      sys.A.add((i - 1) * nb + m, (i - 1) * nb + m, c * invh2 * invh2);
      sys.A.add((i + 1) * nb + m, (i + 1) * nb + m, c * invh2 * invh2);
    }
    add_block(sys.A, nb, i, i, p00, c);
    add_block(sys.A, nb, i - 1, i, p10, c);       // B1^T B0
    add_block(sys.A, nb, i, i + 1, p10t, c);      // B0^T B1
    for (int m = 0; m < nb; ++m)
      sys.A.add((i - 1) * nb + m, (i + 1) * nb + m, c * invh2 * invh2);  // B1^T B1

    if (have_f) {
      // b -= c * L_i^T F_i, constant += c |F_i|^2
      double f2 = 0.0;
      for (int m = 0; m < nb; ++m) {
        const double fm = f_source(m, i);
        f2 += fm * fm;
        sys.b[(i - 1) * nb + m] -= c * invh2 * fm;
        sys.b[(i + 1) * nb + m] -= c * invh2 * fm;
      }
      for (int m = 0; m < nb; ++m) {
        // (B0^T F)_m = sum_r S(r, m) F_r - 2/h^2 F_m
        double s = -2.0 * invh2 * f_source(m, i);
        for (int r = 0; r < nb; ++r) s += ops.S(r, m) * f_source(r, i);
        sys.b[i * nb + m] -= c * s;
      }
      sys.constant += c * f2;
    }
  }

  // ---- boundary penalties lambda^4 w(+-R) (value + derivative misfit)
  const double l4 = std::pow(params.lambda, 4);
  const double wr = l4 * carleman_weight(R, params);
  const double wl = l4 * carleman_weight(-R, params);
  const int e = nz - 1;
  for (int m = 0; m < nb; ++m) {
    sys.A.add(e * nb + m, e * nb + m, wr);
    sys.b[e * nb + m] += wr * cauchy.p_plus[m];
    sys.constant += wr * cauchy.p_plus[m] * cauchy.p_plus[m];
    sys.A.add(m, m, wl);
    sys.b[m] += wl * cauchy.p_minus[m];
    sys.constant += wl * cauchy.p_minus[m] * cauchy.p_minus[m];
  }
  const EndStencil dr = right_d1(h, nz), dl = left_d1(h);
  add_scalar_stencil(sys.A, nb, dr.base, std::span<const double>(dr.c, 3), wr);
  add_scalar_stencil(sys.A, nb, dl.base, std::span<const double>(dl.c, 3), wl);
  for (int a = 0; a < 3; ++a) {
    for (int m = 0; m < nb; ++m) {
      sys.b[(dr.base + a) * nb + m] += wr * dr.c[a] * cauchy.q_plus[m];
      sys.b[(dl.base + a) * nb + m] += wl * dl.c[a] * cauchy.q_minus[m];
    }
  }
  for (int m = 0; m < nb; ++m) {
    sys.constant += wr * cauchy.q_plus[m] * cauchy.q_plus[m];
    sys.constant += wl * cauchy.q_minus[m] * cauchy.q_minus[m];
  }

  // ---- eps (||v||^2 + ||v'||^2 + ||v''||^2), trapezoid weights
  for (int i = 0; i < nz; ++i) {
    const double tau = params.eps * ((i == 0 || i == e) ? 0.5 * h : h);
    for (int m = 0; m < nb; ++m) sys.A.add(i * nb + m, i * nb + m, tau);
    // first derivative rows
    if (i == 0) {
      add_scalar_stencil(sys.A, nb, dl.base, std::span<const double>(dl.c, 3), tau);
    } else if (i == e) {
      add_scalar_stencil(sys.A, nb, dr.base, std::span<const double>(dr.c, 3), tau);
    } else {
      const double st[3] = {-1.0 / (2 * h), 0.0, 1.0 / (2 * h)};
      add_scalar_stencil(sys.A, nb, i - 1, std::span<const double>(st, 3), tau);
    }
    // second derivative rows; shifted three-point stencil at the ends keeps
    // the half-bandwidth at 2|N|
    const double st2[3] = {invh2, -2.0 * invh2, invh2};
    const int base2 = (i == 0) ? 0 : (i == e ? e - 2 : i - 1);
    add_scalar_stencil(sys.A, nb, base2, std::span<const double>(st2, 3), tau);
  }

  return sys;
}

namespace {

ModeProfile profile_from_flat(const std::vector<double>& x, const std::vector<double>& zgrid, int nb) {
  const int nz = static_cast<int>(zgrid.size());
  ModeProfile prof;
  prof.zgrid = zgrid;
  prof.values = Mat(nb, nz);
  for (int i = 0; i < nz; ++i)
    for (int m = 0; m < nb; ++m) prof.values(m, i) = x[static_cast<size_t>(i) * nb + m];
  return prof;
}

double l2_profile_norm(const Mat& values, double h) {
  // trapezoid in z of the squared Euclidean mode norm
  double s = 0.0;
  const int nz = values.cols;
  for (int i = 0; i < nz; ++i) {
    double q = 0.0;
    for (int m = 0; m < values.rows; ++m) q += values(m, i) * values(m, i);
    s += ((i == 0 || i == nz - 1) ? 0.5 : 1.0) * q;
  }
  return std::sqrt(s * h);
}

double h2_discrete_norm(const Mat& v, double h) {
  const int nb = v.rows, nz = v.cols;
  double s = 0.0;
  for (int i = 0; i < nz; ++i) {
    const double tau = (i == 0 || i == nz - 1) ? 0.5 * h : h;
    for (int m = 0; m < nb; ++m) {
      const double vi = v(m, i);
      double d1, d2;
      if (i == 0) {
        d1 = (-3 * v(m, 0) + 4 * v(m, 1) - v(m, 2)) / (2 * h);
        d2 = (v(m, 0) - 2 * v(m, 1) + v(m, 2)) / (h * h);
      } else if (i == nz - 1) {
        d1 = (3 * v(m, i) - 4 * v(m, i - 1) + v(m, i - 2)) / (2 * h);
        d2 = (v(m, i) - 2 * v(m, i - 1) + v(m, i - 2)) / (h * h);
      } else {
        d1 = (v(m, i + 1) - v(m, i - 1)) / (2 * h);
        d2 = (v(m, i - 1) - 2 * v(m, i) + v(m, i + 1)) / (h * h);
      }
      s += tau * (vi * vi + d1 * d1 + d2 * d2);
    }
  }
  return std::sqrt(s);
}

Mat eval_F_profile(const GalerkinOperators& ops, const Mat& v) {
  Mat f(v.rows, v.cols);
  std::vector<double> col(v.rows);
  for (int i = 0; i < v.cols; ++i) {
    for (int m = 0; m < v.rows; ++m) col[m] = v(m, i);
    auto fi = eval_F(ops, col);
    for (int m = 0; m < v.rows; ++m) f(m, i) = fi[m];
  }
  return f;
}

}  // namespace

ModeProfile initial_guess(const GalerkinOperators& ops, const CauchyData& cauchy,
                          const CarlemanParams& params, const std::vector<double>& zgrid) {
  QuadraticSystem sys = build_normal_equations(ops, Mat(), cauchy, params, zgrid);
  return profile_from_flat(minimize(sys), zgrid, ops.nb());
}

std::pair<ModeProfile, IterationTrace> picard_solve(const GalerkinOperators& ops,
                                                    const CauchyData& cauchy,
                                                    const CarlemanParams& params,
                                                    const std::vector<double>& zgrid) {
  const int nb = ops.nb();
  const double h = zgrid[1] - zgrid[0];

  // The quadratic form depends only on (S, weights, eps, grid); F_source
  // enters the linear part. Factor once, rebuild b per iteration.
  QuadraticSystem sys = build_normal_equations(ops, Mat(), cauchy, params, zgrid);
  BandedCholesky factor(sys.A);

  auto solve_with = [&](const Mat& f_source) {
    QuadraticSystem s = build_normal_equations(ops, f_source, cauchy, params, zgrid);
    std::vector<double> x = factor.solve(s.b);
    // one refinement round, then enforce the residual contract
    std::vector<double> r(x.size());
    s.A.matvec(x, r);
    double rn = 0.0, bn = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      r[i] = s.b[i] - r[i];
      rn += r[i] * r[i];
      bn += s.b[i] * s.b[i];
    }
    if (bn > 0.0 && rn > 1e-20 * bn) {
      std::vector<double> e = factor.solve(r);
      for (size_t i = 0; i < x.size(); ++i) x[i] += e[i];
      s.A.matvec(x, r);
      rn = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        const double ri = s.b[i] - r[i];
        rn += ri * ri;
      }
      if (!(std::sqrt(rn) <= 1e-8 * std::sqrt(bn)))
        throw Error(ErrorCode::SingularSystem,
                    "banded solve residual exceeds 1e-8 inside the Picard loop");
    }
    return std::pair{profile_from_flat(x, zgrid, nb), s};
  };

  IterationTrace trace;
  ModeProfile v = profile_from_flat(factor.solve(sys.b), zgrid, nb);
  for (int k = 1; k <= params.max_iters; ++k) {
    Mat f = eval_F_profile(ops, v.values);
    auto [vn, s] = solve_with(f);

    IterationRecord rec;
    rec.k = k;
    Mat diff = vn.values;
    double vninf = 0.0, dinf = 0.0;
    for (size_t i = 0; i < diff.a.size(); ++i) {
      diff.a[i] -= v.values.a[i];
      dinf = std::max(dinf, std::abs(diff.a[i]));
      vninf = std::max(vninf, std::abs(vn.values.a[i]));
    }
    rec.l2_change = l2_profile_norm(diff, h);
    rec.rel_linf_change = (vninf > 0.0) ? dinf / vninf : 0.0;
    std::vector<double> flat(static_cast<size_t>(nb) * zgrid.size());
    for (size_t i = 0; i < zgrid.size(); ++i)
      for (int m = 0; m < nb; ++m) flat[i * nb + m] = vn.values(m, static_cast<int>(i));
    rec.j_value = s.evaluate(flat);
    rec.h2_norm = h2_discrete_norm(vn.values, h);
    trace.records.push_back(rec);
    if (rec.h2_norm > params.ball_radius) trace.exceeded_ball = true;

    v = std::move(vn);
    if (!std::isfinite(rec.l2_change))
      throw Error(ErrorCode::NonFiniteField, "Picard iterate diverged (non-finite change)");
    if (rec.l2_change <= params.kappa0) {
      trace.converged = true;
      break;
    }
  }
  return {std::move(v), std::move(trace)};
}

// ---- Carleman estimate verification ----

namespace {

struct EstimateGroups {
  double lhs, boundary, interior_w, interior_dw;
};

EstimateGroups estimate_groups(const CarlemanTestFunction& f, double lambda,
                               const CarlemanSuiteOptions& opts) {
  const double R = opts.R;
  const auto wgt = [&](double z) {
    const double d = z - opts.z0;
    return std::exp(2.0 * lambda / (d * d));
  };
  const int npts = 2 * opts.simpson_panels + 1;
  auto sw = simpson_weights(-R, R, opts.simpson_panels);
  double lhs = 0.0, iw = 0.0, idw = 0.0;
  for (int i = 0; i < npts; ++i) {
    const double z = -R + (2.0 * R * i) / (npts - 1);
    const double W = wgt(z);
    const double w2 = f.ddw(z), w1 = f.dw(z), w0 = f.w(z);
    lhs += sw[i] * W * w2 * w2;
    iw += sw[i] * W * w0 * w0;
    idw += sw[i] * W * w1 * w1;
  }
  const double l3 = lambda * lambda * lambda;
  const double boundary = wgt(R) * (l3 * f.w(R) * f.w(R) + lambda * f.dw(R) * f.dw(R)) +
                          wgt(-R) * (l3 * f.w(-R) * f.w(-R) + lambda * f.dw(-R) * f.dw(-R));
  return {lhs, boundary, l3 * iw, lambda * idw};
}

}  // namespace

CarlemanCalibration verify_carleman_estimate(const CarlemanSuiteOptions& opts) {
  CarlemanCalibration out;
  double c_star = std::numeric_limits<double>::infinity();
  std::string binding = "(unconstrained)";
  double lambda_max = 0.0;
  for (double l : opts.calibration_lambdas) lambda_max = std::max(lambda_max, l);

  bool any_positive_at_max = false;
  for (const auto& f : opts.calibration) {
    for (double lambda : opts.calibration_lambdas) {
      auto g = estimate_groups(f, lambda, opts);
      const double rhs_gain = -g.boundary + g.interior_w + g.interior_dw;
      if (rhs_gain > 0.0) {
        if (lambda == lambda_max) any_positive_at_max = true;
        const double cmax = g.lhs / rhs_gain;
        if (cmax < c_star) {
          c_star = cmax;
          binding = f.name;
        }
        if (!(cmax > 0.0))
          throw Error(ErrorCode::CalibrationFailed,
                      "no positive constant admissible for " + f.name +
                          " at lambda " + std::to_string(lambda) + "; check quadrature or signs");
      }
    }
  }
  if (std::isinf(c_star)) {
    // every calibration pair had non-positive gain: the estimate is vacuous
    // there and any constant works; report a unit constant
    c_star = 1.0;
    binding = "(vacuous)";
  }
  (void)any_positive_at_max;

  out.c_star = c_star;
  out.binding = binding;
  out.all_hold = true;
  for (const auto& f : opts.heldout) {
    for (double lambda : opts.verify_lambdas) {
      auto g = estimate_groups(f, lambda, opts);
      CarlemanEstimateEntry e;
      e.name = f.name;
      e.lambda = lambda;
      e.lhs = g.lhs;
      e.boundary = g.boundary;
      e.interior_w = g.interior_w;
      e.interior_dw = g.interior_dw;
      const double rhs = c_star * (-g.boundary + g.interior_w + g.interior_dw);
      e.holds = g.lhs >= rhs - 1e-12 * std::max(std::abs(g.lhs), std::abs(rhs));
      if (!e.holds) out.all_hold = false;
      out.entries.push_back(e);
    }
  }
  return out;
}

std::vector<CarlemanTestFunction> carleman_calibration_family() {
  using std::numbers::pi;
  std::vector<CarlemanTestFunction> fs;
  fs.push_back({"const", [](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }});
  fs.push_back({"z", [](double z) { return z; }, [](double) { return 1.0; }, [](double) { return 0.0; }});
  fs.push_back({"z^2", [](double z) { return z * z; }, [](double z) { return 2 * z; }, [](double) { return 2.0; }});
  for (int k = 1; k <= 3; ++k) {
    fs.push_back({"sin(" + std::to_string(k) + "pi z)",
                  [k](double z) { return std::sin(k * pi * z); },
                  [k](double z) { return k * pi * std::cos(k * pi * z); },
                  [k](double z) { return -k * pi * k * pi * std::sin(k * pi * z); }});
  }
  return fs;
}

std::vector<CarlemanTestFunction> carleman_heldout_family() {
  using std::numbers::pi;
  std::vector<CarlemanTestFunction> fs;
  fs.push_back({"z^3", [](double z) { return z * z * z; }, [](double z) { return 3 * z * z; },
                [](double z) { return 6 * z; }});
  for (int k = 4; k <= 5; ++k) {
    fs.push_back({"sin(" + std::to_string(k) + "pi z)",
                  [k](double z) { return std::sin(k * pi * z); },
                  [k](double z) { return k * pi * std::cos(k * pi * z); },
                  [k](double z) { return -k * pi * k * pi * std::sin(k * pi * z); }});
  }
  fs.push_back({"e^z", [](double z) { return std::exp(z); }, [](double z) { return std::exp(z); },
                [](double z) { return std::exp(z); }});
  return fs;
}

}  // namespace pcip
