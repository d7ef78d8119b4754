#pragma once

#include "warpgap/functionals.hpp"
#include "warpgap/geometry.hpp"
#include "warpgap/warping.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace warpgap {

enum class Functional {
  // omega_n int j^(n-1) [(phi'')^2 + (1 + (n-1)(j'/j)^2) phi'^2 + phi^2]
  SobolevW,
  // omega_n int j^(n-1) [(phi'' + (n-1)(j'/j) phi')^2 + phi'^2 + phi^2]
  LaplacianH,
  // int w phi'^2, w = omega_n hardy_weight unless a weight is given
  FirstOrder,
};

struct MinimizationProblem {
  const WarpingProfile* profile = nullptr;
  Functional functional = Functional::SobolevW;
  double T = 5.0;
  double h = 1e-3;
  // Interval endpoints; default [-T, T].
  std::optional<double> lo, hi;
  double left_value = 0.0;
  double right_value = 1.0;
  // Second-order functionals only: phi' = 0 at both ends via ghost nodes.
  bool clamped = true;
  // Second-order functionals only: add the L^2 mass of the constant
  // extensions beyond the interval (oscillating profiles).
  bool include_tail = true;
  // Far end of the grid-summed tail; the rest uses psi >= 1.
  double tail_far = 1e3;
  // Optional weight for FirstOrder.
  std::function<double(double)> weight;
};

struct MinimizationResult {
  RadialFunction phi;
  double value = 0.0;
  // Derivative terms only (no L^2 part, no tail).
  double derivative_part = 0.0;
  double l2_part = 0.0;
  double tail = 0.0;
  // |A x - b| / (|A| |x| + |b|) of the reduced linear system.
  double residual = 0.0;
  long unknowns = 0;
};

// Exact minimization of the discretized quadratic form over grid functions
// with the prescribed end values. The second-order forms use central
// stencils per node with trapezoid weights and tie the two outermost nodes at
// each end (phi_0 = phi_1, phi_(N-1) = phi_N), so constant extension is exact.
// FirstOrder uses the staggered sum h sum w(t_(i+1/2)) ((phi_(i+1) - phi_i)/h)^2.
MinimizationResult minimize_quadratic(const MinimizationProblem& problem);

// (int_a^b w^-1)^-1 by adaptive quadrature.
QuadratureResult analytic_first_order_min(const std::function<double(double)>& weight, double a, double b,
                                          double tol = 1e-12);
// Full-line version for w = omega_n hardy_weight: omega_n / frak J.
double analytic_first_order_min(const WarpingProfile& profile, const FrakJOptions& options = {});

// L^2 mass omega_n int_T^inf j^(n-1) of the constant 1 beyond T, summed on the
// h-grid to `far` and bounded below by psi >= 1 beyond.
double constant_tail_mass(const WarpingProfile& profile, double T, double h, double far);

struct CertificateRow {
  double T = 0.0;
  double h = 0.0;
  double min_QW = 0.0;
  double min_QH = 0.0;
  double ratio = 0.0;
  double QW_derivative = 0.0;
  double QH_derivative = 0.0;
  double min_QW_half = 0.0;  // at h/2
  double min_QH_half = 0.0;
  double truncated_bound = 0.0;  // omega_n / frak J on [-T, T]
  double tail = 0.0;
};

struct GapCertificate {
  int n = 2;
  double epsilon = 0.0;
  bool flat = false;
  QuadratureResult J;
  double lower_bound = 0.0;
  QuadratureResult volume;
  std::vector<CertificateRow> rows;
  bool bound_holds = false;         // min Q_W >= L (1 - 1e-3) for every T
  bool derivative_bound_holds = false;  // same for the derivative part alone
  bool monotone = false;            // both minima nonincreasing in T
  bool ratio_below_one = false;     // min Q_H / min Q_W < 1 at the last T
  bool ratio_decreasing = false;    // reported trend
  bool stable = false;              // within 1% under h -> h/2
  bool gap_certified = false;
  bool pass = false;

  // {n, epsilon, J, lower_bound, volume, rows: [{T, h, min_QW, min_QH, ratio, ...}], pass, ...}
  std::string to_json() const;
};

struct CertifyOptions {
  FrakJOptions frak_j;
  double tail_far = 1e3;
  bool refine = true;
  double stability = 1e-2;
  double bound_slack = 1e-3;
};

// Throws GridError unless h <= (cell width at the last T) / 4, with the cell
// width 1/s'(T) of the oscillation in s = t^two_plus, and T/h integral.
GapCertificate certify_gap(const WarpingProfile& profile, std::vector<double> T_list, double h,
                           const CertifyOptions& options = {});

void write_minimizer_csv(std::ostream& out, const RadialFunction& phi);

}  // namespace warpgap
