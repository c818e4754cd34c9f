#ifndef PCIP_FORWARD_HPP
#define PCIP_FORWARD_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace pcip {

// Uniform grid on G = (-r1, r1)^2 x [0, T].
struct ForwardGrid {
  double r1 = 3.0;
  int nx1 = 241;        // points per spatial axis
  double T = 0.5;
  int nt_time = 4001;   // time levels, including t = 0

  double dx() const { return 2.0 * r1 / (nx1 - 1); }
  double dt() const { return T / (nt_time - 1); }
  double stability_ratio() const { return dt() / (dx() * dx()); }
  double x(int i) const { return -r1 + i * dx(); }

  /// Throws Error(StabilityViolation / InvalidConfig) naming the violated bound.
  void validate() const;
};

// Boundary values on the edge of G while stepping.
struct BoundaryRule {
  enum class Kind { FrozenInitial, Exact };
  Kind kind = Kind::FrozenInitial;
  // value(x, z, t), used when kind == Exact
  std::function<double(double, double, double)> value;
};

// u on the full space-time grid; only practical for modest grids
// (the default 241x241x4001 grid would need ~1.9 GB), the pipeline uses the
// streaming entry.
struct ForwardField {
  ForwardGrid grid;
  std::vector<double> values;  // [l][i][j], i: x index, j: z index

  double at(int i, int j, int l) const {
    return values[(static_cast<size_t>(l) * grid.nx1 + i) * grid.nx1 + j];
  }
};

// Cauchy record on one side of Gamma: f = u, g = u_z (raw partial, not
// outward normal), sampled on |x| <= R times the full time grid, row-major
// over (x, t).
struct BoundaryRecord {
  enum class Side { Top, Bottom };
  Side side = Side::Top;
  int nx = 0;
  int nt = 0;
  std::vector<double> f;
  std::vector<double> g;

  double& fat(int ix, int it) { return f[static_cast<size_t>(ix) * nt + it]; }
  double fat(int ix, int it) const { return f[static_cast<size_t>(ix) * nt + it]; }
  double& gat(int ix, int it) { return g[static_cast<size_t>(ix) * nt + it]; }
  double gat(int ix, int it) const { return g[static_cast<size_t>(ix) * nt + it]; }
};

struct NoiseSpec {
  double delta = 0.0;
  uint64_t seed = 1;
};

/// Explicit five-point scheme for u_t = Lap(u) + c u, u(.,0) = p.
/// c_grid is nx1*nx1 row-major over (i, j). Throws on instability or blow-up.
ForwardField solve_forward(std::span<const double> c_grid, double p_value,
                           const ForwardGrid& grid, const BoundaryRule& rule);

/// Same stepping without storing the field: extracts both boundary records
/// at z = +-R on the fly. `observer`, when set, sees every completed layer.
std::pair<BoundaryRecord, BoundaryRecord> solve_forward_boundary(
    std::span<const double> c_grid, double p_value, const ForwardGrid& grid,
    double R, const BoundaryRule& rule,
    const std::function<void(int layer, std::span<const double> u)>& observer = {});

/// Samples f and g on both sides of Gamma from a stored field.
/// g uses second-order one-sided differences oriented into Omega.
/// Throws Error(GridMismatch) if +-R is not a grid line.
std::pair<BoundaryRecord, BoundaryRecord> extract_boundary(const ForwardField& field,
                                                           double R);

/// Multiplicative uniform noise stream: sample *= (1 + eta), eta ~ U[-delta, delta].
/// Traversal order is fixed (f row-major over (x,t), then g) so runs are
/// bit-reproducible; one stream may span several records.
class NoiseStream {
 public:
  explicit NoiseStream(uint64_t seed) : rng_(seed) {}
  void apply(BoundaryRecord& record, double delta);

 private:
  double next_unit();  // U[0, 1)
  std::mt19937_64 rng_;
};

/// Single-record form: fresh stream seeded from spec.seed. delta = 0 returns
/// the input bit-identically.
BoundaryRecord add_noise(const BoundaryRecord& record, const NoiseSpec& spec);

}  // namespace pcip

#endif
