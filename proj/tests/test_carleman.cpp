#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "carleman.hpp"
#include "error.hpp"

using namespace pcip;

namespace {

CarlemanParams reference_params() {
  CarlemanParams p;
  p.lambda = 10.0;
  p.z0 = -10.0;
  p.eps = std::pow(10.0, -6.5);
  p.kappa0 = 1e-3;
  p.max_iters = 30;
  return p;
}

struct SmallSystem {
  CutoffSpec cutoff{4, 3};
  OrthonormalBasis1D bx = OrthonormalBasis1D::orthonormalize({-1.0, 1.0, cutoff.n1});
  OrthonormalBasis1D bt = OrthonormalBasis1D::orthonormalize({0.0, 0.5, cutoff.nt});
  GalerkinOperators ops = assemble_operators(bx, bt, cutoff, 2.0);
};

CauchyData zero_cauchy(int nb) {
  CauchyData cd;
  cd.p_plus.assign(nb, 0.0);
  cd.p_minus.assign(nb, 0.0);
  cd.q_plus.assign(nb, 0.0);
  cd.q_minus.assign(nb, 0.0);
  return cd;
}

}  // namespace

TEST_CASE("weight values and monotonicity") {
  CarlemanParams p;
  p.lambda = 10.0;
  p.z0 = -10.0;
  CHECK(carleman_weight(1.0, p) == doctest::Approx(std::exp(20.0 / 121.0)).epsilon(1e-14));
  CHECK(carleman_weight(1.0, p) == doctest::Approx(1.1797343148).epsilon(1e-9));
  CHECK(carleman_weight(-1.0, p) > carleman_weight(1.0, p));
  p.lambda = 0.0;  // diagnostic limit only
  for (double z : {-1.0, -0.3, 0.8}) CHECK(carleman_weight(z, p) == 1.0);
}

TEST_CASE("zero data yields the zero minimizer and an immediate Picard stop") {
  SmallSystem s;
  const auto zgrid = uniform_zgrid(1.0, 41);
  CauchyData cd = zero_cauchy(s.ops.nb());
  CarlemanParams params = reference_params();

  ModeProfile guess = initial_guess(s.ops, cd, params, zgrid);
  for (double v : guess.values.a) CHECK(std::abs(v) <= 1e-14);

  auto [profile, trace] = picard_solve(s.ops, cd, params, zgrid);
  CHECK(trace.converged);
  CHECK(trace.records.size() == 1);
  for (double v : profile.values.a) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("manufactured solution is recovered (consistency of the normal equations)") {
  SmallSystem s;
  const int nb = s.ops.nb();
  const int nz = 161;
  const auto zgrid = uniform_zgrid(1.0, nz);
  CarlemanParams params = reference_params();
  params.eps = 1e-10;

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> a1(nb), a2(nb);
  for (int m = 0; m < nb; ++m) {
    const double decay = std::pow(1.0 + m, 1.5);
    a1[m] = gauss(rng) / decay;
    a2[m] = gauss(rng) / decay;
  }
  const double w1 = std::numbers::pi, w2 = 0.5 * std::numbers::pi;
  Mat vstar(nb, nz), vdd(nb, nz), f(nb, nz);
  std::vector<double> dplus(nb), dminus(nb);
  for (int i = 0; i < nz; ++i) {
    const double z = zgrid[i];
    for (int m = 0; m < nb; ++m) {
      vstar(m, i) = a1[m] * std::sin(w1 * z) + a2[m] * std::cos(w2 * z);
      vdd(m, i) = -a1[m] * w1 * w1 * std::sin(w1 * z) - a2[m] * w2 * w2 * std::cos(w2 * z);
    }
  }
  for (int i = 0; i < nz; ++i)
    for (int m = 0; m < nb; ++m) {
      double sv = 0.0;
      for (int n = 0; n < nb; ++n) sv += s.ops.S(m, n) * vstar(n, i);
      f(m, i) = -(vdd(m, i) + sv);
    }
  CauchyData cd;
  cd.p_plus.resize(nb);
  cd.p_minus.resize(nb);
  cd.q_plus.resize(nb);
  cd.q_minus.resize(nb);
  for (int m = 0; m < nb; ++m) {
    cd.p_plus[m] = vstar(m, nz - 1);
    cd.p_minus[m] = vstar(m, 0);
    cd.q_plus[m] = a1[m] * w1 * std::cos(w1) - a2[m] * w2 * std::sin(w2);
    cd.q_minus[m] = a1[m] * w1 * std::cos(-w1) - a2[m] * w2 * std::sin(-w2);
  }

  QuadraticSystem sys = build_normal_equations(s.ops, f, cd, params, zgrid);
  std::vector<double> x = minimize(sys);
  // L2 error of the recovered profile
  double err2 = 0.0, norm2 = 0.0;
  const double h = zgrid[1] - zgrid[0];
  for (int i = 0; i < nz; ++i) {
    const double tau = (i == 0 || i == nz - 1) ? 0.5 * h : h;
    for (int m = 0; m < nb; ++m) {
      const double d = x[static_cast<size_t>(i) * nb + m] - vstar(m, i);
      err2 += tau * d * d;
      norm2 += tau * vstar(m, i) * vstar(m, i);
    }
  }
  CHECK(std::sqrt(err2) <= 1e-3);
  CHECK(std::sqrt(err2 / norm2) <= 1e-3);
}

TEST_CASE("analytic gradient matches finite differences of J") {
  SmallSystem s;
  const int nb = s.ops.nb();
  const auto zgrid = uniform_zgrid(1.0, 17);
  CarlemanParams params = reference_params();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  CauchyData cd = zero_cauchy(nb);
  for (auto* v : {&cd.p_plus, &cd.p_minus, &cd.q_plus, &cd.q_minus})
    for (double& x : *v) x = u(rng);
  Mat f(nb, static_cast<int>(zgrid.size()));
  for (double& x : f.a) x = u(rng);

  QuadraticSystem sys = build_normal_equations(s.ops, f, cd, params, zgrid);
  const int n = sys.A.n();
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  std::vector<double> ax(n);
  sys.A.matvec(x, ax);

  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int i = pick(rng);
    const double grad = 2.0 * (ax[i] - sys.b[i]);
    const double step = 1e-6 * std::max(1.0, std::abs(x[i]));
    std::vector<double> xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    const double fd = (sys.evaluate(xp) - sys.evaluate(xm)) / (2.0 * step);
    CHECK(grad == doctest::Approx(fd).epsilon(1e-5).scale(1e-6));
  }
}

TEST_CASE("J is convex at the minimizer") {
  SmallSystem s;
  const int nb = s.ops.nb();
  const auto zgrid = uniform_zgrid(1.0, 21);
  CarlemanParams params = reference_params();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  CauchyData cd = zero_cauchy(nb);
  for (auto* v : {&cd.p_plus, &cd.p_minus, &cd.q_plus, &cd.q_minus})
    for (double& x : *v) x = u(rng);
  QuadraticSystem sys = build_normal_equations(s.ops, Mat(), cd, params, zgrid);
  std::vector<double> x = minimize(sys);
  const double jmin = sys.evaluate(x);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> xp = x;
    for (double& v : xp) v += 0.01 * u(rng);
    CHECK(sys.evaluate(xp) >= jmin - 1e-12 * std::abs(jmin));
  }
}

TEST_CASE("banded minimize matches a dense oracle on random SPD systems") {
  const int n = 300, kd = 17;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymmetricBandMatrix A(n, kd);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = j; i <= std::min(n - 1, j + kd); ++i) {
      double v = (i == j) ? 2.0 * kd + 4.0 + u(rng) : u(rng);
      A.add(i, j, v);
      D(i, j) = D(j, i) = v;
    }
  QuadraticSystem sys;
  sys.A = A;
  sys.b.resize(n);
  for (double& v : sys.b) v = u(rng);
  std::vector<double> x = minimize(sys);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = sys.b[i];
  Eigen::VectorXd xe = D.ldlt().solve(rhs);
  double dev = 0.0;
  for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(x[i] - xe(i)));
  CHECK(dev <= 1e-10);
}

TEST_CASE("identity-like epsilon-only system with zero data solves to zero") {
  SymmetricBandMatrix A(50, 3);
  for (int i = 0; i < 50; ++i) A.add(i, i, 1.0);
  QuadraticSystem sys;
  sys.A = A;
  sys.b.assign(50, 0.0);
  for (double v : minimize(sys)) CHECK(v == 0.0);
}

TEST_CASE("singular systems are reported") {
  SymmetricBandMatrix A(5, 1);  // all zeros
  QuadraticSystem sys;
  sys.A = A;
  sys.b.assign(5, 1.0);
  CHECK_THROWS_AS((void)minimize(sys), Error);
}

TEST_CASE("parameter validation") {
  CarlemanParams p = reference_params();
  p.z0 = -0.5;
  CHECK_THROWS_AS(p.validate(1.0), Error);
  p = reference_params();
  p.lambda = 0.5;
  CHECK_THROWS_AS(p.validate(1.0), Error);
  p = reference_params();
  p.eps = 0.0;
  CHECK_THROWS_AS(p.validate(1.0), Error);
  CHECK_NOTHROW(reference_params().validate(1.0));
}

TEST_CASE("Carleman estimate: constant functions reduce to weight convexity") {
  // w const: both derivative groups vanish; the inequality holds for every
  // C because the trapezoid value of a strictly convex weight exceeds its
  // integral, making the net gain negative
  CarlemanSuiteOptions opts;
  opts.calibration = {{"const", [](double) { return 1.0; }, [](double) { return 0.0; },
                       [](double) { return 0.0; }}};
  opts.heldout = opts.calibration;
  opts.calibration_lambdas = {10.0};
  opts.verify_lambdas = {10.0, 50.0, 100.0};
  opts.z0 = -3.75;
  opts.simpson_panels = 10000;
  auto rep = verify_carleman_estimate(opts);
  CHECK(rep.all_hold);
  CHECK(rep.binding == "(vacuous)");

  // the underlying convexity fact: trapezoid overestimates int W for any z0 < -R
  for (double z0 : {-1.5, -3.75, -10.0}) {
    CarlemanParams p;
    p.lambda = 10.0;
    p.z0 = z0;
    auto sw = simpson_weights(-1.0, 1.0, 4000);
    double integral = 0.0;
    for (int i = 0; i <= 8000; ++i) integral += sw[i] * carleman_weight(-1.0 + 2.0 * i / 8000.0, p);
    CHECK(integral < carleman_weight(-1.0, p) + carleman_weight(1.0, p));
  }
}

TEST_CASE("Carleman estimate: interior lambda^3 group outpaces the boundary-derivative group") {
  CarlemanSuiteOptions opts;
  opts.z0 = -3.75;
  CarlemanTestFunction f{"sin(3pi z)",
                         [](double z) { return std::sin(3 * std::numbers::pi * z); },
                         [](double z) { return 3 * std::numbers::pi * std::cos(3 * std::numbers::pi * z); },
                         [](double z) {
                           const double w = 3 * std::numbers::pi;
                           return -w * w * std::sin(w * z);
                         }};
  opts.calibration = {f};
  opts.heldout = {f};
  opts.calibration_lambdas = {10.0};
  opts.verify_lambdas = {10.0, 20.0};
  auto r = verify_carleman_estimate(opts);
  REQUIRE(r.entries.size() == 2);
  const auto& e10 = r.entries[0];
  const auto& e20 = r.entries[1];
  // boundary-derivative part scales like lambda * weight, the interior part
  // like lambda^3 * weight: doubling lambda must grow the interior group
  // strictly faster
  CHECK(e20.interior_w / e10.interior_w > e20.boundary / e10.boundary);
}

TEST_CASE("Carleman estimate: held-out family verified across the lambda grid") {
  CarlemanSuiteOptions opts;
  opts.calibration = carleman_calibration_family();
  opts.heldout = carleman_heldout_family();
  opts.calibration_lambdas = {10.0};
  for (int l = 10; l <= 100; l += 10) opts.verify_lambdas.push_back(l);
  opts.z0 = -3.75;
  opts.simpson_panels = 2000;
  auto rep = verify_carleman_estimate(opts);
  CHECK(rep.c_star > 0.0);
  CHECK(rep.all_hold);
}

TEST_CASE("CalibrationFailed guards against inconsistent inputs") {
  // a deliberately broken function (sin with a zeroed second derivative)
  // makes the left side vanish while the gain stays positive
  CarlemanSuiteOptions opts;
  opts.calibration = {{"broken sin", [](double z) { return std::sin(std::numbers::pi * z); },
                       [](double z) { return std::numbers::pi * std::cos(std::numbers::pi * z); },
                       [](double) { return 0.0; }}};
  opts.heldout = {};
  opts.calibration_lambdas = {10.0};
  opts.verify_lambdas = {10.0};
  opts.z0 = -3.75;
  CHECK_THROWS_AS((void)verify_carleman_estimate(opts), Error);
}
