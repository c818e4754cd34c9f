#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "forward.hpp"

using namespace pcip;

namespace {

std::vector<double> constant_grid(int nx1, double value) {
  return std::vector<double>(static_cast<size_t>(nx1) * nx1, value);
}

}  // namespace

TEST_CASE("constant initial data is an exact fixed point when c = 0") {
  ForwardGrid grid{1.5, 31, 0.2, 161};
  auto field = solve_forward(constant_grid(31, 0.0), 2.0, grid, BoundaryRule{});
  double dev = 0.0;
  for (double v : field.values) dev = std::max(dev, std::abs(v - 2.0));
  CHECK(dev == 0.0);
}

TEST_CASE("exponential solution and first-order convergence in time") {
  const double c0 = 0.5;
  BoundaryRule rule{BoundaryRule::Kind::Exact,
                    [c0](double, double, double t) { return 2.0 * std::exp(c0 * t); }};
  auto run = [&](int nt_time) {
    ForwardGrid grid{3.0, 61, 0.5, nt_time};
    auto field = solve_forward(constant_grid(61, c0), 2.0, grid, rule);
    const double exact = 2.0 * std::exp(c0 * 0.5);
    double err = 0.0;
    const size_t layer = static_cast<size_t>(grid.nt_time - 1) * 61 * 61;
    for (size_t i = 0; i < static_cast<size_t>(61) * 61; ++i)
      err = std::max(err, std::abs(field.values[layer + i] - exact) / exact);
    return err;
  };
  const double e1 = run(201), e2 = run(401);
  CHECK(e1 <= 5e-3);
  CHECK(e1 / e2 >= 1.7);
  CHECK(e1 / e2 <= 2.3);
  // the value itself
  CHECK(2.0 * std::exp(0.25) == doctest::Approx(2.5680508).epsilon(1e-7));
}

TEST_CASE("default grid satisfies the stability bound") {
  ForwardGrid grid{3.0, 241, 0.5, 4001};
  CHECK(grid.stability_ratio() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_NOTHROW(grid.validate());
}

TEST_CASE("stability violation is rejected with a named message") {
  ForwardGrid grid{3.0, 241, 0.5, 2001};  // dt/dx^2 = 0.4
  try {
    grid.validate();
    FAIL("expected StabilityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StabilityViolation);
    CHECK(std::string(e.what()).find("dt/dx^2") != std::string::npos);
  }
}

TEST_CASE("boundary extraction on a constant field") {
  ForwardGrid grid{3.0, 61, 0.1, 41};
  auto field = solve_forward(constant_grid(61, 0.0), 2.0, grid, BoundaryRule{});
  auto [top, bottom] = extract_boundary(field, 1.0);
  CHECK(top.nx == 21);  // dx = 0.1, |x| <= 1
  for (int ix = 0; ix < top.nx; ++ix)
    for (int it = 0; it < top.nt; ++it) {
      CHECK(top.fat(ix, it) == 2.0);
      CHECK(top.gat(ix, it) == 0.0);
      CHECK(bottom.fat(ix, it) == 2.0);
      CHECK(bottom.gat(ix, it) == 0.0);
    }
}

TEST_CASE("one-sided g stencil is exact on fields linear in z") {
  // u(x, z, t) = z: fill a field manually and extract
  ForwardGrid grid{3.0, 61, 0.1, 3};
  ForwardField field;
  field.grid = grid;
  field.values.resize(static_cast<size_t>(grid.nt_time) * 61 * 61);
  for (int l = 0; l < grid.nt_time; ++l)
    for (int i = 0; i < 61; ++i)
      for (int j = 0; j < 61; ++j)
        field.values[(static_cast<size_t>(l) * 61 + i) * 61 + j] = grid.x(j);
  auto [top, bottom] = extract_boundary(field, 1.0);
  for (int ix = 0; ix < top.nx; ++ix) {
    CHECK(top.gat(ix, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(bottom.gat(ix, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(top.fat(ix, 0) == doctest::Approx(1.0));
    CHECK(bottom.fat(ix, 0) == doctest::Approx(-1.0));
  }
}

TEST_CASE("extraction requires +-R on grid lines") {
  ForwardGrid grid{3.0, 61, 0.1, 3};
  ForwardField field;
  field.grid = grid;
  field.values.assign(static_cast<size_t>(grid.nt_time) * 61 * 61, 1.0);
  CHECK_THROWS_AS((void)extract_boundary(field, 0.97), Error);
}

TEST_CASE("streaming solver agrees with the stored-field extraction") {
  ForwardGrid grid{3.0, 31, 0.1, 81};
  std::vector<double> c(static_cast<size_t>(31) * 31, 0.0);
  for (int i = 12; i < 19; ++i)
    for (int j = 12; j < 19; ++j) c[static_cast<size_t>(i) * 31 + j] = 0.7;
  auto field = solve_forward(c, 2.0, grid, BoundaryRule{});
  auto [t1, b1] = extract_boundary(field, 1.0);
  auto [t2, b2] = solve_forward_boundary(c, 2.0, grid, 1.0, BoundaryRule{});
  CHECK(t1.f == t2.f);
  CHECK(t1.g == t2.g);
  CHECK(b1.f == b2.f);
  CHECK(b1.g == b2.g);
}

TEST_CASE("noise stream: identity at delta 0, bounded, deterministic") {
  BoundaryRecord rec{BoundaryRecord::Side::Top, 7, 11, {}, {}};
  rec.f.resize(77);
  rec.g.resize(77);
  for (int i = 0; i < 77; ++i) {
    rec.f[i] = 2.0 + 0.01 * i;
    rec.g[i] = -0.3 + 0.002 * i;
  }
  auto same = add_noise(rec, {0.0, 42});
  CHECK(same.f == rec.f);
  CHECK(same.g == rec.g);

  auto noisy = add_noise(rec, {0.05, 42});
  for (int i = 0; i < 77; ++i) {
    CHECK(std::abs(noisy.f[i] - rec.f[i]) <= 0.05 * std::abs(rec.f[i]) * (1 + 1e-12));
    CHECK(std::abs(noisy.g[i] - rec.g[i]) <= 0.05 * std::abs(rec.g[i]) * (1 + 1e-12));
  }
  auto noisy2 = add_noise(rec, {0.05, 42});
  CHECK(noisy.f == noisy2.f);
  CHECK(noisy.g == noisy2.g);
  auto other_seed = add_noise(rec, {0.05, 43});
  CHECK(noisy.f != other_seed.f);
}

TEST_CASE("blow-up is reported as a non-finite field") {
  // stable ratio (dt/dx^2 = 0.25) but the reaction term overflows: the
  // per-step growth factor is 1 + dt c = 9
  ForwardGrid grid{1.0, 11, 8.0, 801};
  try {
    (void)solve_forward(constant_grid(11, 800.0), 2.0, grid, BoundaryRule{});
    FAIL("expected NonFiniteField");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteField);
  }
}
