#pragma once

#include "warpgap/warping.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>

namespace warpgap {

// Index k with t = k h; throws GridError unless t is a multiple of h to 1e-9.
long grid_index(double t, double h);

// Samples phi_i at t_i = (first_index + i) h. With clamped ends the first
// derivative vanishes at both ends through the ghost values phi_(-1) = phi_1,
// phi_(N+1) = phi_(N-1); otherwise one-sided second-order stencils are used.
struct RadialFunction {
  double h = 0.0;
  long first_index = 0;
  Eigen::VectorXd values;
  bool clamped = false;

  Eigen::Index size() const { return values.size(); }
  double t(Eigen::Index i) const { return static_cast<double>(first_index + i) * h; }
  double left() const { return t(0); }
  double right() const { return t(size() - 1); }
  double bc_left() const { return values(0); }
  double bc_right() const { return values(size() - 1); }

  double d1(Eigen::Index i) const;
  double d2(Eigen::Index i) const;

  template <class F>
  static RadialFunction sample(double lo, double hi, double h, F&& f, bool clamped = false) {
    RadialFunction out;
    out.h = h;
    out.first_index = grid_index(lo, h);
    const long last = grid_index(hi, h);
    out.values.resize(last - out.first_index + 1);
    for (Eigen::Index i = 0; i < out.values.size(); ++i) out.values(i) = f(out.t(i));
    out.clamped = clamped;
    out.validate();
    return out;
  }

  void validate() const;
};

enum class ThetaMode { Spectral, CentralDifference };

// Tensor grid F(t_i, theta_j) on [lo, hi] x S^1 with theta_j = 2 pi j / N_theta.
// The periodic copy theta_N = 2 pi is implicit.
struct SurfaceFunction {
  double h = 0.0;
  long first_index = 0;
  Eigen::MatrixXd values;  // rows t, columns theta
  ThetaMode mode = ThetaMode::Spectral;

  double t(Eigen::Index i) const { return static_cast<double>(first_index + i) * h; }
  double theta(Eigen::Index j) const;
  double h_theta() const;

  template <class F>
  static SurfaceFunction sample(double lo, double hi, double h, Eigen::Index n_theta, F&& f,
                                ThetaMode mode = ThetaMode::Spectral) {
    SurfaceFunction out;
    out.h = h;
    out.first_index = grid_index(lo, h);
    const long last = grid_index(hi, h);
    out.values.resize(last - out.first_index + 1, n_theta);
    out.mode = mode;
    for (Eigen::Index i = 0; i < out.values.rows(); ++i)
      for (Eigen::Index j = 0; j < n_theta; ++j) out.values(i, j) = f(out.t(i), out.theta(j));
    out.validate();
    return out;
  }

  void validate() const;
};

// Seeded smooth test data on [-T, T] x S^1: a trigonometric polynomial with
// t_modes frequencies in t and theta_modes in theta (below the Nyquist limit).
SurfaceFunction random_band_limited_surface(double T, double h, Eigen::Index n_theta, int t_modes, int theta_modes,
                                            std::uint64_t seed, ThetaMode mode = ThetaMode::Spectral);

// Fourier differentiation matrices on N equispaced points of S^1 (N even).
Eigen::MatrixXd spectral_d1(Eigen::Index n);
Eigen::MatrixXd spectral_d2(Eigen::Index n);

// All partial derivatives of F up to order two on the whole grid.
struct SurfaceDerivatives {
  Eigen::VectorXd t;
  Eigen::MatrixXd f, f_t, f_tt, f_q, f_qq, f_tq;  // q = theta
};

SurfaceDerivatives surface_derivatives(const SurfaceFunction& F);

// j^(n-1) + (n-1) j^(n-3) j'^2
double hardy_weight(const WarpingProfile& profile, double t);
double hardy_weight(const Jet& j, int n);
// j^(n-1)
double volume_density(const WarpingProfile& profile, double t);

// Components of Hess phi for radial phi in an orthonormal frame (d_t, e_i):
// Hess(d_t, d_t) = phi'', Hess(e_i, e_i) = (j'/j) phi' for each of n-1 e_i.
struct RadialHessian {
  double tt = 0.0;
  double tangential = 0.0;
};

RadialHessian radial_hessian(const RadialFunction& phi, const WarpingProfile& profile, Eigen::Index i);
// (phi'')^2 + (n-1) (j'/j)^2 (phi')^2
double radial_hessian_sq(const RadialFunction& phi, const WarpingProfile& profile, Eigen::Index i);
// phi'' + (n-1) (j'/j) phi'
double radial_laplacian(const RadialFunction& phi, const WarpingProfile& profile, Eigen::Index i);

// n = 2, orthonormal frame (d_t, j^-1 d_theta):
//   |Hess F|^2 = F_tt^2 + 2 [j^-1 (F_tq - (j'/j) F_q)]^2 + [j^-2 (F_qq + j j' F_t)]^2
double hessian_sq_full(const SurfaceDerivatives& d, const WarpingProfile& profile, Eigen::Index i, Eigen::Index j);
double hessian_sq_full(const SurfaceFunction& F, const WarpingProfile& profile, Eigen::Index i, Eigen::Index j);
// F_t^2 + j^-2 F_q^2
double gradient_sq_full(const SurfaceDerivatives& d, const WarpingProfile& profile, Eigen::Index i, Eigen::Index j);
double gradient_sq_full(const SurfaceFunction& F, const WarpingProfile& profile, Eigen::Index i, Eigen::Index j);
// F_tt + (j'/j) F_t + j^-2 F_qq
double laplacian_full(const SurfaceDerivatives& d, const WarpingProfile& profile, Eigen::Index i, Eigen::Index j);

// Spherical average per t-row.
RadialFunction symmetrize(const SurfaceFunction& F);
// Laplacian of F sampled on the grid of F.
SurfaceFunction surface_laplacian(const SurfaceFunction& F, const WarpingProfile& profile);

// Periodic integral over the slice t_i of F_tq F_q + F_qq F_t.
double stokes_defect(const SurfaceFunction& F, Eigen::Index i);
double stokes_defect(const SurfaceDerivatives& d, Eigen::Index i);

struct CurvatureProfile {
  int n = 2;
  Eigen::VectorXd t, K_rad, K_tan, Ric_rr, Ric_tan, ricci_norm;
};

// K_rad = -j''/j, K_tan = (1 - j'^2)/j^2 (NaN for n = 2), Ric_rr = -(n-1) j''/j,
// Ric_tan = -j''/j + (n-2)(1 - j'^2)/j^2, |Ric| = sqrt(Ric_rr^2 + (n-1) Ric_tan^2).
CurvatureProfile curvature_profile(const WarpingProfile& profile, std::span<const double> grid);

void write_curvature_csv(std::ostream& out, const CurvatureProfile& c);

// r prod_(j=1..K) max(ln^[j] r, 1)
double lambda_growth(double r, int K);

struct RicciViolation {
  bool found = false;
  double t = 0.0;
  double ricci_norm = 0.0;
  double r_upper = 0.0;
  double lambda_sq = 0.0;
  double max_abs_K_rad = 0.0;
  double argmax_K_rad = 0.0;
};

// Scans grid points (plus every corner t_m in range for the oscillating kind)
// for |Ric|(t) > lambda(r)^2, where r = |t| + pi j(0) bounds the distance from
// the point over t = 0; lambda is increasing so the comparison is conservative.
RicciViolation find_ricci_violation(const WarpingProfile& profile, std::span<const double> grid, int K);

}  // namespace warpgap
