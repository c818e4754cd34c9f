#ifndef PCIP_GALERKIN_HPP
#define PCIP_GALERKIN_HPP

#include <span>
#include <vector>

#include "basis.hpp"
#include "linalg.hpp"
#include "reduction.hpp"

namespace pcip {

// Reduced system operators for v''(z) + S::v(z) + F(v(z)) = 0.
// S couples modes through the time derivative and the transverse Laplacian;
// B is the Galerkin projection of the quadratic nonlinearity; L is the
// linear Delta-p correction (identically zero for constant p).
struct GalerkinOperators {
  int n1 = 0;
  int nt = 0;
  double p_value = 2.0;
  Mat S;                   // |N| x |N|
  std::vector<double> B;   // |N|^3, [m][n][n'] row-major
  Mat L;                   // |N| x |N|

  int nb() const { return n1 * nt; }
  double b_at(int m, int n, int np) const {
    const size_t nbs = static_cast<size_t>(nb());
    return B[(static_cast<size_t>(m) * nbs + n) * nbs + np];
  }
};

// Mode profile v_m(z_i) on a uniform z-grid with endpoints exactly +-R.
struct ModeProfile {
  std::vector<double> zgrid;
  Mat values;  // nb x Nz

  double h() const { return zgrid[1] - zgrid[0]; }
};

std::vector<double> uniform_zgrid(double R, int nz);

/// s_mn = -(int psi'_nt psi_mt) delta_{n1,m1} + (int Psi''_n1 Psi_m1) delta_{nt,mt},
/// 1D factors by 64-node Gauss-Legendre quadrature.
Mat assemble_S(const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
               const CutoffSpec& cutoff);

/// B[m][n][n'] = (1/p) (int Psi_n1 Psi_n'1 Psi_m1 dx) (psi_nt(0) int psi_n't psi_mt dt);
/// L = 0 for constant p. Throws Error(InvalidInitialCondition) if p <= 0.
void assemble_nonlinearity(const OrthonormalBasis1D& bx, const OrthonormalBasis1D& bt,
                           const CutoffSpec& cutoff, double p_value,
                           GalerkinOperators& ops);

GalerkinOperators assemble_operators(const OrthonormalBasis1D& bx,
                                     const OrthonormalBasis1D& bt,
                                     const CutoffSpec& cutoff, double p_value);

/// F_m(v) = sum_{n,n'} B[m][n][n'] v_n v_n' + sum_{n'} L[m][n'] v_n'.
std::vector<double> eval_F(const GalerkinOperators& ops, std::span<const double> v);

/// Discrete residual r_m(z_i) = D2[v_m](z_i) + (S v)_m(z_i) + F_source_m(z_i)
/// at interior nodes (central second difference); boundary columns are zero.
Mat residual(const GalerkinOperators& ops, const ModeProfile& profile, const Mat& f_source);

}  // namespace pcip

#endif
