#include "galerkin.hpp"

#include <cassert>

#include "error.hpp"

namespace pcip {

namespace {
constexpr int kQuadNodes = 64;

// 1D factor matrices: out[a][b] = sum_q w_q f_a(x_q) g_b(x_q)
Mat factor_matrix(const Mat& fa, const Mat& gb, std::span<const double> w) {
  Mat out(fa.rows, gb.rows);
  for (int a = 0; a < fa.rows; ++a)
    for (int b = 0; b < gb.rows; ++b) {
      double s = 0.0;
      for (size_t q = 0; q < w.size(); ++q) s += w[q] * fa(a, static_cast<int>(q)) * gb(b, static_cast<int>(q));
      out(a, b) = s;
    }
  return out;
}
}  // namespace

std::vector<double> uniform_zgrid(double R, int nz) {
  if (nz < 5) throw Error(ErrorCode::InvalidConfig, "z-grid needs nz >= 5");
  std::vector<double> z(nz);
  const double h = 2.0 * R / (nz - 1);
  for (int i = 0; i < nz; ++i) z[i] = -R + i * h;
  z.front() = -R;
  z.back() = R;
  return z;
}

Mat assemble_S(const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
               const CutoffSpec& cutoff) {
  cutoff.validate();
  std::vector<double> qx, wx, qt, wt;
  gauss_legendre(kQuadNodes, bx.lo(), bx.hi(), qx, wx);
  gauss_legendre(kQuadNodes, bt.lo(), bt.hi(), qt, wt);
  Mat PX = bx.eval_all(qx, 0), PX2 = bx.eval_all(qx, 2);
  Mat PT = bt.eval_all(qt, 0), PT1 = bt.eval_all(qt, 1);
  Mat d1t = factor_matrix(PT1, PT, wt);   // d1t[a][b] = int psi'_a psi_b
  Mat wxx = factor_matrix(PX2, PX, wx);   // wxx[a][b] = int Psi''_a Psi_b

  const int N1 = cutoff.n1, Nt = cutoff.nt;
  Mat S(N1 * Nt, N1 * Nt);
  for (int m1 = 0; m1 < N1; ++m1)
    for (int mt = 0; mt < Nt; ++mt)
      for (int n1 = 0; n1 < N1; ++n1)
        for (int nt = 0; nt < Nt; ++nt) {
          double s = 0.0;
          if (n1 == m1) s -= d1t(nt, mt);
          if (nt == mt) s += wxx(n1, m1);
          if (s != 0.0) S(m1 * Nt + mt, n1 * Nt + nt) = s;
        }
  return S;
}

void assemble_nonlinearity(const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
                           const CutoffSpec& cutoff, double p_value,
                           GalerkinOperators& ops) {
  if (!(p_value > 0.0))
    throw Error(ErrorCode::InvalidInitialCondition, "constant initial value p must be positive");
  std::vector<double> qx, wx, qt, wt;
  gauss_legendre(kQuadNodes, bx.lo(), bx.hi(), qx, wx);
  gauss_legendre(kQuadNodes, bt.lo(), bt.hi(), qt, wt);
  Mat PX = bx.eval_all(qx, 0);
  Mat PT = bt.eval_all(qt, 0);
  Mat et = factor_matrix(PT, PT, wt);  // int psi_a psi_b, identity up to quadrature error

  const int N1 = cutoff.n1, Nt = cutoff.nt;
  // triple x-products X3[a][b][c] = int Psi_a Psi_b Psi_c dx
  std::vector<double> x3(static_cast<size_t>(N1) * N1 * N1, 0.0);
  for (int a = 0; a < N1; ++a)
    for (int b = 0; b < N1; ++b)
      for (int c = 0; c < N1; ++c) {
        double s = 0.0;
        for (int q = 0; q < kQuadNodes; ++q) s += wx[q] * PX(a, q) * PX(b, q) * PX(c, q);
        x3[(static_cast<size_t>(a) * N1 + b) * N1 + c] = s;
      }
  std::vector<double> psi0(Nt);
  for (int n = 0; n < Nt; ++n) psi0[n] = bt.eval(n + 1, 0.0);

  const int nb = N1 * Nt;
  ops.B.assign(static_cast<size_t>(nb) * nb * nb, 0.0);
  for (int m1 = 0; m1 < N1; ++m1)
    for (int mt = 0; mt < Nt; ++mt) {
      const int m = m1 * Nt + mt;
      for (int n1 = 0; n1 < N1; ++n1)
        for (int nt = 0; nt < Nt; ++nt) {
          const int n = n1 * Nt + nt;
          const double tn0 = psi0[nt];
          for (int np1 = 0; np1 < N1; ++np1)
            for (int npt = 0; npt < Nt; ++npt) {
              const int np = np1 * Nt + npt;
              const double xf = x3[(static_cast<size_t>(n1) * N1 + np1) * N1 + m1];
              const double val = tn0 * et(npt, mt) * xf / p_value;
              ops.B[(static_cast<size_t>(m) * nb + n) * nb + np] = val;
            }
        }
    }
  ops.L = Mat(nb, nb);  // Delta p == 0 for constant p
}

GalerkinOperators assemble_operators(const OrthonormalBasis1D& bx,
                                     const OrthonormalBasis1D& bt,
                                     const CutoffSpec& cutoff, double p_value) {
  GalerkinOperators ops;
  ops.n1 = cutoff.n1;
  ops.nt = cutoff.nt;
  ops.p_value = p_value;
  ops.S = assemble_S(bx, bt, cutoff);
  assemble_nonlinearity(bx, bt, cutoff, p_value, ops);
  return ops;
}

std::vector<double> eval_F(const GalerkinOperators& ops, std::span<const double> v) {
  const int nb = ops.nb();
  assert(static_cast<int>(v.size()) == nb);
  std::vector<double> out(nb, 0.0);
  const double* B = ops.B.data();
  for (int m = 0; m < nb; ++m) {
    double fm = 0.0;
    const double* Bm = B + static_cast<size_t>(m) * nb * nb;
    for (int n = 0; n < nb; ++n) {
      const double vn = v[n];
      if (vn == 0.0) continue;
      const double* Bmn = Bm + static_cast<size_t>(n) * nb;
      double s = 0.0;
      for (int np = 0; np < nb; ++np) s += Bmn[np] * v[np];
      fm += vn * s;
    }
    if (ops.L.rows == nb) {
      for (int np = 0; np < nb; ++np) fm += ops.L(m, np) * v[np];
    }
    out[m] = fm;
  }
  return out;
}

Mat residual(const GalerkinOperators& ops, const ModeProfile& profile, const Mat& f_source) {
  const int nb = ops.nb();
  const int nz = static_cast<int>(profile.zgrid.size());
  assert(profile.values.rows == nb && profile.values.cols == nz);
  assert(f_source.rows == nb && f_source.cols == nz);
  const double invh2 = 1.0 / (profile.h() * profile.h());
  Mat r(nb, nz);
  for (int i = 1; i < nz - 1; ++i) {
    for (int m = 0; m < nb; ++m) {
      double sv = 0.0;
      for (int n = 0; n < nb; ++n) sv += ops.S(m, n) * profile.values(n, i);
      const double d2 = (profile.values(m, i - 1) - 2.0 * profile.values(m, i) +
                         profile.values(m, i + 1)) * invh2;
      r(m, i) = d2 + sv + f_source(m, i);
    }
  }
  return r;
}

}  // namespace pcip
