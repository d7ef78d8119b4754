#pragma once

#include "warpgap/geometry.hpp"
#include "warpgap/numerics.hpp"
#include "warpgap/warping.hpp"

#include <limits>
#include <string>
#include <vector>

namespace warpgap {

// Area of the unit sphere S^(n-1): 2 pi^(n/2) / Gamma(n/2).
double omega_n(int n);

// Squared-sum convention; every part carries the omega_n j^(n-1) volume weight.
struct NormReport {
  double l2 = 0.0;
  double gradient = 0.0;
  double hessian = 0.0;
  double laplacian = 0.0;
  double total = 0.0;
};

// Trapezoid weights of the grid of phi (h/2 at the two ends).
double trapezoid_weight(const RadialFunction& phi, Eigen::Index i);

// omega_n int j^(n-1) [phi'^2 (gradient), (phi'')^2 + (n-1)(j'/j)^2 phi'^2 (hessian), phi^2 (l2)]
NormReport w22_radial_norm_sq(const RadialFunction& phi, const WarpingProfile& profile);
// omega_n int j^(n-1) [phi^2 + phi'^2 + (phi'' + (n-1)(j'/j) phi')^2]
NormReport h22_radial_norm_sq(const RadialFunction& phi, const WarpingProfile& profile);

struct FrakJOptions {
  double tol = 1e-7;
  // Truncation of the quadrature for the full-line value; the remainder is
  // bounded analytically.
  double cut = 1e3;
  // Corner roundings m <= rounded_corners are integrated; later ones below the
  // cut are bounded. Zero selects the profile's m_max.
  long rounded_corners = 0;
  long max_subdivisions = 4000;
  int dominance_samples = 10000;
};

// Itemized full-line integral. The certified interval is
// [quadrature - quadrature_error, quadrature + quadrature_error + bounded + tail].
struct FrakJBreakdown {
  QuadratureResult result;
  double quadrature = 0.0;
  double quadrature_error = 0.0;
  double bounded_corners = 0.0;  // bound on skipped roundings below the cut
  double tail_envelope = 0.0;    // envelope mass beyond the cut
  double tail_corners = 0.0;     // rounding mass beyond the cut
  double cut = 0.0;
  long pieces = 0;
  TailEnvelope envelope;
  DominanceCheck dominance;
};

// int_(-T)^T hardy_weight^-1 dt; T = infinity gives the full-line value.
QuadratureResult frak_J(const WarpingProfile& profile, double T, const FrakJOptions& options = {});
FrakJBreakdown frak_J_breakdown(const WarpingProfile& profile, double T, const FrakJOptions& options = {});

// Envelope 1/w <= C t^(-1-epsilon) off the corner roundings for t >= cut.
TailEnvelope frak_J_envelope(const WarpingProfile& profile, double cut);
// Bound on the integral of 1/w over the rounding of corner m.
double rounding_mass_bound(const WarpingProfile& profile, long m);
// Bound on the sum of rounding_mass_bound over all corners >= m_first.
double rounding_tail_bound(const WarpingProfile& profile, long m_first);

// omega_n / (upper end of the certified full-line frak J); zero when frak J
// diverges.
double gap_lower_bound(const WarpingProfile& profile, const FrakJOptions& options = {});
// Same with the integral truncated to [-T, T].
double gap_lower_bound(const WarpingProfile& profile, double T, const FrakJOptions& options = {});

// omega_n int j^(n-1) over R, certified; infinite for constant profiles.
QuadratureResult certified_volume(const WarpingProfile& profile, double cut = 1e3, double tol = 1e-9);

struct AuditItem {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditItem> items;
  bool pass = false;

  void add(AuditItem item);
  const AuditItem* find(const std::string& check) const;
  // {"items": [{check, lhs, rhs, margin, pass, detail}], "pass": ...}
  std::string to_json() const;
};

// lhs <= rhs with relative slack rel_tol; margin = rhs - lhs.
AuditItem compare_le(std::string check, double lhs, double rhs, double rel_tol = 1e-8);

// Full n = 2 squared W^{2,2} norm of F (trapezoid in t, periodic in theta).
NormReport w22_surface_norm_sq(const SurfaceFunction& F, const WarpingProfile& profile);

// lhs = ||F||^2_{W^{2,2}}, rhs = omega_n int hardy_weight (d_t F^)^2 dt.
AuditItem rearrangement_check(const SurfaceFunction& F, const WarpingProfile& profile, double rel_tol = 1e-10);

// ||u||_2 <= vol^((p-2)/(2p)) ||u||_p for u = phi, |phi'|, |Hess phi|, all
// with the discrete volume measure of the grid.
AuditReport holder_compare(const RadialFunction& phi, const WarpingProfile& profile, double p);

struct AuditOptions {
  double T = 1e3;
  long scan_points = 1000000;
  long derivative_samples = 1000000;
  bool flat_control = false;
  FrakJOptions frak_j;
};

// Runs the inequality chain items in fixed order. For constant profiles only
// the frak J and gap items are meaningful and both are expected to fail.
AuditReport audit_inequality_chain(const WarpingProfile& profile, const AuditOptions& options = {});

}  // namespace warpgap
