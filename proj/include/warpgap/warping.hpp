#pragma once

#include <Eigen/Core>

#include <cmath>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace warpgap {

struct WarpingParams {
  int n = 2;
  double epsilon = 0.1;
  long m_max = 100000;

  // 2 + epsilon n / 2
  double two_plus() const { return 2.0 + epsilon * n / 2.0; }
  // Exponent of the power factor: j = psi * t^(-decay_exponent()).
  double decay_exponent() const { return 1.0 / (n - 1) + epsilon; }
  // (2/(n-1) + 2 epsilon)^(1/two_plus): start of the |j'| lower bound.
  double t0() const { return std::pow(2.0 / (n - 1) + 2.0 * epsilon, 1.0 / two_plus()); }
  // Exponent of the |j'| lower bound, (n-2)/(n-1) + epsilon (n-2)/2.
  double derivative_exponent() const { return (n - 2.0) / (n - 1.0) + epsilon * (n - 2.0) / 2.0; }

  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double t) const { return t >= lo && t <= hi; }
  double length() const { return hi - lo; }
};

// One corner t_m = m^(1/two_plus) of the triangle wave. rounding_delta is the
// half-width in s = t^two_plus of the corner rounding; the rounding occupies
// [rounding.lo, rounding.hi] in t, inside [t_m - eta_m, t_m + eta_m].
struct SingularPatch {
  long m = 1;
  double t_m = 1.0;
  double eta_m = 1.0;
  double rounding_delta = 0.25;
  Interval rounding;
  Interval merged_extent;
};

// Value and first two derivatives of a scalar function of t.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Triangle wave in s = t^two_plus, values in [1, 2], corners at integer s.
template <class Scalar>
Scalar triangle_psi(Scalar t, Scalar two_plus) {
  using std::floor;
  using std::fmod;
  using std::pow;
  if (!(t >= Scalar(1))) throw std::domain_error("triangle_psi: t must be >= 1");
  const Scalar s = pow(t, two_plus);
  const Scalar whole = floor(s);
  return fmod(whole, Scalar(2)) == Scalar(0) ? s - whole + Scalar(1) : -s + whole + Scalar(2);
}

// C^2 rounding of |x| on [-delta, delta]:
//   h(x) = -x^4/(8 delta^3) + 3 x^2/(4 delta) + 3 delta/8,
// matching |x| to second order at +-delta, with |x| <= h <= |x| + 3 delta/8.
template <class Scalar>
Jet rounded_abs(Scalar x, Scalar delta) {
  using std::abs;
  if (abs(x) >= delta) return {double(abs(x)), x > 0 ? 1.0 : -1.0, 0.0};
  const Scalar d3 = delta * delta * delta;
  const Scalar x2 = x * x;
  return {double(-x2 * x2 / (8 * d3) + 3 * x2 / (4 * delta) + 3 * delta / 8),
          double(-x2 * x / (2 * d3) + 3 * x / (2 * delta)),
          double(-3 * x2 / (2 * d3) + Scalar(3) / (2 * delta))};
}

// Even warping function of the metric dt^2 + j(t)^2 sigma on R x S^(n-1).
// The oscillating kind is the counterexample profile; the analytic kinds are
// reference geometries used by controls and operator tests.
class WarpingProfile {
 public:
  enum class Kind { Oscillating, Constant, Exponential, Hyperbolic };

  static WarpingProfile constant(int n, double value);
  // j = e^t (not even; used only for local operator checks).
  static WarpingProfile exponential(int n);
  // j = cosh t
  static WarpingProfile hyperbolic(int n);

  Kind kind() const { return kind_; }
  int dimension() const { return params_.n; }
  const WarpingParams& params() const { return params_; }
  bool oscillating() const { return kind_ == Kind::Oscillating; }

  // Tracked corners m = 1..m_max.
  std::span<const SingularPatch> patches() const { return patches_; }
  // Merged patch extents [max(1, t_m - eta_m), t_m + eta_m], m <= m_max.
  std::span<const Interval> extents() const { return extents_; }
  // Coefficients c_k of the bridge sum_k c_k t^(2k) on [-1, 1].
  const Eigen::VectorXd& bridge() const { return bridge_; }

  // Corner data for any m >= 1 (tabulated up to m_max, computed beyond).
  SingularPatch corner(long m) const;

  Jet jet(double t) const;
  // psi(t) = j(t) |t|^(1/(n-1)+epsilon) with derivatives, for |t| >= 1.
  Jet psi_jet(double t) const;
  double psi(double t) const { return psi_jet(t).value; }

  // |t| >= 1 and outside every patch [t_m - eta_m, t_m + eta_m].
  bool in_B(double t) const;
  // Inside a corner rounding, where psi differs from the triangle wave.
  bool in_rounding(double t) const;

 private:
  friend WarpingProfile build_profile(const WarpingParams& params);
  WarpingProfile() = default;

  SingularPatch compute_corner(long m) const;
  double rounding_delta(long m) const;

  Kind kind_ = Kind::Oscillating;
  WarpingParams params_;
  double constant_ = 1.0;
  std::vector<SingularPatch> patches_;
  std::vector<Interval> extents_;
  Eigen::VectorXd bridge_;
};

WarpingProfile build_profile(const WarpingParams& params);

// order 0, 1, 2 -> j, j', j''
double eval(const WarpingProfile& profile, double t, int order);

struct DerivativeBoundReport {
  double min_ratio = 0.0;
  double argmin = 0.0;
  long samples_used = 0;
  bool pass = false;
};

// min over B-samples in [t_lo, t_hi] of |j'(t)| t^(-derivative_exponent);
// passes iff >= 1. Requires t_lo >= t0; throws EmptySampleError when no
// sample lies in B.
DerivativeBoundReport verify_derivative_bound(const WarpingProfile& profile, double t_lo, double t_hi,
                                              long samples);

// CSV with header t,j,jp,jpp,psi,in_B and 17 significant digits.
void write_profile_csv(std::ostream& out, const WarpingProfile& profile, std::span<const double> grid);

}  // namespace warpgap
