#include "forward.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "error.hpp"

namespace pcip {

namespace {

// indices of the grid lines z = -R and z = +R
std::pair<int, int> boundary_indices(const ForwardGrid& grid, double R) {
  if (!(R < grid.r1))
    throw Error(ErrorCode::GridMismatch, "R must be strictly inside the forward domain (R < R1)");
  const double steps = (grid.r1 - R) / grid.dx();
  const int jm = static_cast<int>(std::lround(steps));
  if (std::abs(steps - jm) > 1e-9)
    throw Error(ErrorCode::GridMismatch,
                "+-R must lie exactly on forward grid lines: (R1-R)/dx = " + std::to_string(steps));
  const int jp = grid.nx1 - 1 - jm;
  return {jm, jp};
}

struct Extractor {
  int jm, jp, nx1;
  double dx;
  int x_lo, x_hi;  // x-index window for |x| <= R

  void record(std::span<const double> u, int layer, BoundaryRecord& top, BoundaryRecord& bot) const {
    const auto at = [&](int i, int j) { return u[static_cast<size_t>(i) * nx1 + j]; };
    for (int i = x_lo; i <= x_hi; ++i) {
      const int ix = i - x_lo;
      top.fat(ix, layer) = at(i, jp);
      top.gat(ix, layer) = (3.0 * at(i, jp) - 4.0 * at(i, jp - 1) + at(i, jp - 2)) / (2.0 * dx);
      bot.fat(ix, layer) = at(i, jm);
      bot.gat(ix, layer) = (-3.0 * at(i, jm) + 4.0 * at(i, jm + 1) - at(i, jm + 2)) / (2.0 * dx);
    }
  }
};

void step_layer(std::span<const double> u, std::span<double> un,
                std::span<const double> c, const ForwardGrid& grid,
                const BoundaryRule& rule, double p_value, double t_next) {
  const int n = grid.nx1;
  const double lam = grid.stability_ratio();
  const double dt = grid.dt();
  for (int i = 1; i < n - 1; ++i) {
    const size_t row = static_cast<size_t>(i) * n;
    const size_t up = row - n, down = row + n;
    for (int j = 1; j < n - 1; ++j) {
      const double uij = u[row + j];
      un[row + j] = uij + lam * (u[up + j] + u[down + j] + u[row + j - 1] + u[row + j + 1] - 4.0 * uij)
                    + dt * c[row + j] * uij;
    }
  }
  if (rule.kind == BoundaryRule::Kind::FrozenInitial) {
    for (int i = 0; i < n; ++i) {
      un[static_cast<size_t>(i) * n] = p_value;
      un[static_cast<size_t>(i) * n + n - 1] = p_value;
      un[static_cast<size_t>(0) * n + i] = p_value;
      un[static_cast<size_t>(n - 1) * n + i] = p_value;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double xi = grid.x(i);
      un[static_cast<size_t>(i) * n] = rule.value(xi, -grid.r1, t_next);
      un[static_cast<size_t>(i) * n + n - 1] = rule.value(xi, grid.r1, t_next);
      un[static_cast<size_t>(0) * n + i] = rule.value(-grid.r1, xi, t_next);
      un[static_cast<size_t>(n - 1) * n + i] = rule.value(grid.r1, xi, t_next);
    }
  }
}

void check_finite(std::span<const double> u, int layer) {
  for (double v : u)
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFiniteField,
                  "forward field blew up (non-finite value at time layer " + std::to_string(layer) + ")");
}

}  // namespace

void ForwardGrid::validate() const {
  if (nx1 < 3) throw Error(ErrorCode::InvalidConfig, "forward grid needs nx1 >= 3");
  if (nt_time < 2) throw Error(ErrorCode::InvalidConfig, "forward grid needs nt_time >= 2");
  if (!(r1 > 0.0) || !(T > 0.0)) throw Error(ErrorCode::InvalidConfig, "forward grid needs R1 > 0 and T > 0");
  if (stability_ratio() > 0.25 + 1e-12)
    throw Error(ErrorCode::StabilityViolation,
                "explicit scheme stability violated: dt/dx^2 = " + std::to_string(stability_ratio()) +
                    " > 0.25 (nx1=" + std::to_string(nx1) + ", nt_time=" + std::to_string(nt_time) + ")");
}

ForwardField solve_forward(std::span<const double> c_grid, double p_value,
                           const ForwardGrid& grid, const BoundaryRule& rule) {
  grid.validate();
  if (!(p_value > 0.0))
    throw Error(ErrorCode::InvalidInitialCondition, "initial value p must be positive");
  const int n = grid.nx1;
  ForwardField field;
  field.grid = grid;
  field.values.assign(static_cast<size_t>(grid.nt_time) * n * n, 0.0);
  std::span<double> layer0(field.values.data(), static_cast<size_t>(n) * n);
  for (auto& v : layer0) v = p_value;
  if (rule.kind == BoundaryRule::Kind::Exact) {
    // layer 0 of the exact rule is assumed consistent with p; keep p there
  }
  for (int l = 1; l < grid.nt_time; ++l) {
    std::span<const double> u(field.values.data() + static_cast<size_t>(l - 1) * n * n,
                              static_cast<size_t>(n) * n);
    std::span<double> un(field.values.data() + static_cast<size_t>(l) * n * n,
                         static_cast<size_t>(n) * n);
    step_layer(u, un, c_grid, grid, rule, p_value, l * grid.dt());
    check_finite(un, l);
  }
  return field;
}

std::pair<BoundaryRecord, BoundaryRecord> solve_forward_boundary(
    std::span<const double> c_grid, double p_value, const ForwardGrid& grid,
    double R, const BoundaryRule& rule,
    const std::function<void(int, std::span<const double>)>& observer) {
  grid.validate();
  if (!(p_value > 0.0))
    throw Error(ErrorCode::InvalidInitialCondition, "initial value p must be positive");
  auto [jm, jp] = boundary_indices(grid, R);
  Extractor ex{jm, jp, grid.nx1, grid.dx(), jm, jp};

  const int nx_rec = ex.x_hi - ex.x_lo + 1;
  BoundaryRecord top{BoundaryRecord::Side::Top, nx_rec, grid.nt_time, {}, {}};
  BoundaryRecord bot{BoundaryRecord::Side::Bottom, nx_rec, grid.nt_time, {}, {}};
  top.f.assign(static_cast<size_t>(nx_rec) * grid.nt_time, 0.0);
  top.g = top.f;
  bot.f = top.f;
  bot.g = top.f;

  const size_t layer_size = static_cast<size_t>(grid.nx1) * grid.nx1;
  std::vector<double> u(layer_size, p_value), un(layer_size);
  ex.record(u, 0, top, bot);
  if (observer) observer(0, u);
  for (int l = 1; l < grid.nt_time; ++l) {
    step_layer(u, un, c_grid, grid, rule, p_value, l * grid.dt());
    check_finite(un, l);
    std::swap(u, un);
    ex.record(u, l, top, bot);
    if (observer) observer(l, u);
  }
  return {std::move(top), std::move(bot)};
}

std::pair<BoundaryRecord, BoundaryRecord> extract_boundary(const ForwardField& field,
                                                           double R) {
  const ForwardGrid& grid = field.grid;
  auto [jm, jp] = boundary_indices(grid, R);
  Extractor ex{jm, jp, grid.nx1, grid.dx(), jm, jp};
  const int nx_rec = ex.x_hi - ex.x_lo + 1;
  BoundaryRecord top{BoundaryRecord::Side::Top, nx_rec, grid.nt_time, {}, {}};
  BoundaryRecord bot{BoundaryRecord::Side::Bottom, nx_rec, grid.nt_time, {}, {}};
  top.f.assign(static_cast<size_t>(nx_rec) * grid.nt_time, 0.0);
  top.g = top.f;
  bot.f = top.f;
  bot.g = top.f;
  const size_t layer_size = static_cast<size_t>(grid.nx1) * grid.nx1;
  for (int l = 0; l < grid.nt_time; ++l) {
    std::span<const double> u(field.values.data() + static_cast<size_t>(l) * layer_size, layer_size);
    ex.record(u, l, top, bot);
  }
  return {std::move(top), std::move(bot)};
}

double NoiseStream::next_unit() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

void NoiseStream::apply(BoundaryRecord& record, double delta) {
  if (delta == 0.0) return;
  for (double& v : record.f) v *= 1.0 + delta * (2.0 * next_unit() - 1.0);
  for (double& v : record.g) v *= 1.0 + delta * (2.0 * next_unit() - 1.0);
}

BoundaryRecord add_noise(const BoundaryRecord& record, const NoiseSpec& spec) {
  if (!(spec.delta < 1.0))
    throw Error(ErrorCode::InvalidConfig, "noise level delta must be < 1");
  BoundaryRecord out = record;
  NoiseStream stream(spec.seed);
  stream.apply(out, spec.delta);
  return out;
}

}  // namespace pcip
