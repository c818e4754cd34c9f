#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "galerkin.hpp"

using namespace pcip;

namespace {

struct Fixture {
  CutoffSpec cutoff{6, 5};
  OrthonormalBasis1D bx = OrthonormalBasis1D::orthonormalize({-1.0, 1.0, cutoff.n1});
  OrthonormalBasis1D bt = OrthonormalBasis1D::orthonormalize({0.0, 0.5, cutoff.nt});
  GalerkinOperators ops = assemble_operators(bx, bt, cutoff, 2.0);
};

// brute-force 2D quadrature over [-1,1] x [0,0.5]; composite Simpson with
// enough panels to resolve 1e-6 on the oscillatory integrands (a 201-point
// trapezoid rule is only ~1e-3 accurate here)
double quad2(const std::function<double(double, double)>& f, int panels = 600) {
  auto wx = simpson_weights(-1.0, 1.0, panels);
  auto wt = simpson_weights(0.0, 0.5, panels);
  const int npts = 2 * panels + 1;
  double s = 0.0;
  for (int i = 0; i < npts; ++i) {
    const double x = -1.0 + 2.0 * i / (npts - 1);
    double row = 0.0;
    for (int l = 0; l < npts; ++l) {
      const double t = 0.5 * l / (npts - 1);
      row += wt[l] * f(x, t);
    }
    s += wx[i] * row;
  }
  return s;
}

}  // namespace

TEST_CASE("S vanishes when both tensor factors differ") {
  Fixture fx;
  const int Nt = fx.cutoff.nt;
  for (int m1 = 0; m1 < fx.cutoff.n1; ++m1)
    for (int mt = 0; mt < Nt; ++mt)
      for (int n1 = 0; n1 < fx.cutoff.n1; ++n1)
        for (int nt = 0; nt < Nt; ++nt)
          if (m1 != n1 && mt != nt) CHECK(fx.ops.S(m1 * Nt + mt, n1 * Nt + nt) == 0.0);
}

TEST_CASE("time factor satisfies the integration-by-parts identity") {
  Fixture fx;
  // D[a][b] = int psi'_a psi_b obeys D + D^T = psi(T) psi(T)^T - psi(0) psi(0)^T
  const int Nt = fx.cutoff.nt;
  std::vector<double> qt, wt;
  gauss_legendre(64, 0.0, 0.5, qt, wt);
  Mat PT = fx.bt.eval_all(qt, 0), PT1 = fx.bt.eval_all(qt, 1);
  Mat D(Nt, Nt);
  for (int a = 0; a < Nt; ++a)
    for (int b = 0; b < Nt; ++b) {
      double s = 0.0;
      for (int q = 0; q < 64; ++q) s += wt[q] * PT1(a, q) * PT(b, q);
      D(a, b) = s;
    }
  for (int a = 0; a < Nt; ++a)
    for (int b = 0; b < Nt; ++b) {
      const double boundary = fx.bt.eval(a + 1, 0.5) * fx.bt.eval(b + 1, 0.5) -
                              fx.bt.eval(a + 1, 0.0) * fx.bt.eval(b + 1, 0.0);
      CHECK(D(a, b) + D(b, a) == doctest::Approx(boundary).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("Psi_1 is an eigenfunction of the second derivative with unit norm") {
  Fixture fx;
  std::vector<double> qx, wx;
  gauss_legendre(64, -1.0, 1.0, qx, wx);
  double w11 = 0.0, norm = 0.0;
  for (int q = 0; q < 64; ++q) {
    w11 += wx[q] * fx.bx.eval(1, qx[q], 2) * fx.bx.eval(1, qx[q]);
    norm += wx[q] * fx.bx.eval(1, qx[q]) * fx.bx.eval(1, qx[q]);
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w11 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nonlinearity tensor matches brute-force quadrature") {
  Fixture fx;
  const int Nt = fx.cutoff.nt;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick1(0, fx.cutoff.n1 - 1), pickt(0, Nt - 1);
  for (int trial = 0; trial < 10; ++trial) {
    const int m1 = pick1(rng), mt = pickt(rng);
    const int n1 = pick1(rng), nt = pickt(rng);
    const int p1 = pick1(rng), pt = pickt(rng);
    const double oracle = quad2(
        [&](double x, double t) {
          return fx.bx.eval(n1 + 1, x) * fx.bt.eval(nt + 1, 0.0) * fx.bx.eval(p1 + 1, x) *
                 fx.bt.eval(pt + 1, t) * fx.bx.eval(m1 + 1, x) * fx.bt.eval(mt + 1, t) / 2.0;
        },
        600);
    const double val = fx.ops.b_at(m1 * Nt + mt, n1 * Nt + nt, p1 * Nt + pt);
    CHECK(val == doctest::Approx(oracle).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("time slices of B vanish for mismatched second factor") {
  Fixture fx;
  const int Nt = fx.cutoff.nt;
  // B[m][n][n'] = 0 when n't != mt (orthonormality in t)
  for (int m = 0; m < fx.ops.nb(); ++m)
    for (int n = 0; n < fx.ops.nb(); ++n)
      for (int np = 0; np < fx.ops.nb(); ++np)
        if (np % Nt != m % Nt) CHECK(std::abs(fx.ops.b_at(m, n, np)) <= 1e-12);
}

TEST_CASE("L vanishes for constant p and p must be positive") {
  Fixture fx;
  for (double v : fx.ops.L.a) CHECK(v == 0.0);
  GalerkinOperators dummy;
  CHECK_THROWS_AS(assemble_nonlinearity(fx.bx, fx.bt, fx.cutoff, 0.0, dummy), Error);
  CHECK_THROWS_AS(assemble_nonlinearity(fx.bx, fx.bt, fx.cutoff, -2.0, dummy), Error);
}

TEST_CASE("eval_F: zero input, quadratic homogeneity, single-mode oracle") {
  Fixture fx;
  const int nb = fx.ops.nb();
  std::vector<double> zero(nb, 0.0);
  for (double v : eval_F(fx.ops, zero)) CHECK(v == 0.0);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(nb);
  for (double& x : v) x = u(rng);
  auto f1 = eval_F(fx.ops, v);
  std::vector<double> v2(nb);
  for (int i = 0; i < nb; ++i) v2[i] = 2.0 * v[i];
  auto f2 = eval_F(fx.ops, v2);
  for (int i = 0; i < nb; ++i) CHECK(f2[i] == doctest::Approx(4.0 * f1[i]).epsilon(1e-12));

  // single mode: F_m = a^2 B[m][n0][n0], against a direct double loop
  const int n0 = 7;
  const double a = 0.83;
  std::vector<double> single(nb, 0.0);
  single[n0] = a;
  auto fs = eval_F(fx.ops, single);
  for (int m = 0; m < nb; ++m) {
    double direct = 0.0;
    for (int n = 0; n < nb; ++n)
      for (int np = 0; np < nb; ++np) direct += fx.ops.b_at(m, n, np) * single[n] * single[np];
    CHECK(fs[m] == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
    CHECK(fs[m] == doctest::Approx(a * a * fx.ops.b_at(m, n0, n0)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("residual: zero profile, quadratic exactness, h^2 convergence") {
  Fixture fx;
  const int nb = fx.ops.nb();

  {  // zero everything
    ModeProfile prof{uniform_zgrid(1.0, 21), Mat(nb, 21)};
    Mat f(nb, 21);
    Mat r = residual(fx.ops, prof, f);
    for (double v : r.a) CHECK(v == 0.0);
  }

  {  // v_m(z) = z^2 with S and F zeroed out: stencil gives exactly 2
    GalerkinOperators ops0 = fx.ops;
    ops0.S = Mat(nb, nb);
    ModeProfile prof{uniform_zgrid(1.0, 21), Mat(nb, 21)};
    const int mode = 4;
    for (int i = 0; i < 21; ++i) prof.values(mode, i) = prof.zgrid[i] * prof.zgrid[i];
    Mat f(nb, 21);
    Mat r = residual(ops0, prof, f);
    for (int i = 1; i < 20; ++i) CHECK(r(mode, i) == doctest::Approx(2.0).epsilon(1e-11));
  }

  {  // manufactured: F := -(v*'' + S v*) analytic, residual = O(h^2)
    auto run = [&](int nz) {
      ModeProfile prof{uniform_zgrid(1.0, nz), Mat(nb, nz)};
      Mat f(nb, nz);
      for (int i = 0; i < nz; ++i) {
        const double z = prof.zgrid[i];
        for (int m = 0; m < nb; ++m) {
          prof.values(m, i) = std::sin((1.0 + 0.3 * m) * z);
        }
      }
      for (int i = 0; i < nz; ++i) {
        const double z = prof.zgrid[i];
        for (int m = 0; m < nb; ++m) {
          const double w = 1.0 + 0.3 * m;
          double sv = 0.0;
          for (int n = 0; n < nb; ++n)
            sv += fx.ops.S(m, n) * prof.values(n, i);
          f(m, i) = -(-w * w * std::sin(w * z) + sv);
        }
      }
      Mat r = residual(fx.ops, prof, f);
      double mx = 0.0;
      for (int i = 1; i < nz - 1; ++i)
        for (int m = 0; m < nb; ++m) mx = std::max(mx, std::abs(r(m, i)));
      return mx;
    };
    const double r1 = run(41), r2 = run(81);
    CHECK(r1 / r2 >= 3.0);
    CHECK(r1 / r2 <= 5.0);
  }
}

TEST_CASE("assembly is deterministic") {
  Fixture fx;
  auto again = assemble_operators(fx.bx, fx.bt, fx.cutoff, 2.0);
  CHECK(fx.ops.S.a == again.S.a);
  CHECK(fx.ops.B == again.B);
}

TEST_CASE("separability cross-check against full 2D quadrature for S") {
  Fixture fx;
  const int Nt = fx.cutoff.nt;
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> pick1(0, fx.cutoff.n1 - 1), pickt(0, Nt - 1);
  for (int trial = 0; trial < 10; ++trial) {
    const int m1 = pick1(rng), mt = pickt(rng), n1 = pick1(rng), nt = pickt(rng);
    const double oracle = quad2(
        [&](double x, double t) {
          const double pm = fx.bx.eval(m1 + 1, x) * fx.bt.eval(mt + 1, t);
          const double dpn_dt = fx.bx.eval(n1 + 1, x) * fx.bt.eval(nt + 1, t, 1);
          const double lap_pn = fx.bx.eval(n1 + 1, x, 2) * fx.bt.eval(nt + 1, t);
          return -dpn_dt * pm + lap_pn * pm;
        },
        600);
    CHECK(fx.ops.S(m1 * Nt + mt, n1 * Nt + nt) == doctest::Approx(oracle).epsilon(1e-6).scale(1.0));
  }
}
