#include "warpgap/warping.hpp"

#include "warpgap/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace warpgap {

void WarpingParams::validate() const {
  if (n < 2) throw std::invalid_argument("WarpingParams: n must be >= 2");
  if (!(epsilon > 0.0) || !(epsilon <= 1.0)) throw std::invalid_argument("WarpingParams: epsilon must lie in (0, 1]");
  if (m_max < 1) throw std::invalid_argument("WarpingParams: m_max must be >= 1");
}

WarpingProfile WarpingProfile::constant(int n, double value) {
  if (n < 2) throw std::invalid_argument("WarpingProfile::constant: n must be >= 2");
  if (!(value > 0.0)) throw std::invalid_argument("WarpingProfile::constant: value must be positive");
  WarpingProfile p;
  p.kind_ = Kind::Constant;
  p.params_.n = n;
  p.constant_ = value;
  return p;
}

WarpingProfile WarpingProfile::exponential(int n) {
  WarpingProfile p = constant(n, 1.0);
  p.kind_ = Kind::Exponential;
  return p;
}

WarpingProfile WarpingProfile::hyperbolic(int n) {
  WarpingProfile p = constant(n, 1.0);
  p.kind_ = Kind::Hyperbolic;
  return p;
}

SingularPatch WarpingProfile::compute_corner(long m) const {
  const double a = params_.two_plus();
  const double lm = std::log(static_cast<double>(m));
  SingularPatch c;
  c.m = m;
  c.t_m = std::exp(lm / a);
  c.eta_m = std::exp(-(3.0 + params_.n * params_.epsilon) / 2.0 * lm);
  // Largest delta <= 1/4 keeping [m - delta, m + delta] (in s) inside the patch.
  const double rho = c.eta_m / c.t_m;
  const double md = static_cast<double>(m);
  const double up = md * std::expm1(a * std::log1p(rho));
  const double down = rho < 1.0 ? -md * std::expm1(a * std::log1p(-rho)) : std::numeric_limits<double>::infinity();
  c.rounding_delta = std::min({0.25, up, down});
  c.rounding.lo = std::max(1.0, c.t_m * std::exp(std::log1p(-c.rounding_delta / md) / a));
  c.rounding.hi = c.t_m * std::exp(std::log1p(c.rounding_delta / md) / a);
  c.merged_extent = {std::max(1.0, c.t_m - c.eta_m), c.t_m + c.eta_m};
  return c;
}

SingularPatch WarpingProfile::corner(long m) const {
  if (m < 1) throw std::domain_error("WarpingProfile::corner: m must be >= 1");
  if (m <= static_cast<long>(patches_.size())) return patches_[static_cast<std::size_t>(m - 1)];
  return compute_corner(m);
}

double WarpingProfile::rounding_delta(long m) const {
  if (m <= static_cast<long>(patches_.size())) return patches_[static_cast<std::size_t>(m - 1)].rounding_delta;
  return compute_corner(m).rounding_delta;
}

Jet WarpingProfile::psi_jet(double t) const {
  if (kind_ != Kind::Oscillating) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  const double at = std::abs(t);
  if (!(at >= 1.0)) throw std::domain_error("WarpingProfile::psi_jet: |t| must be >= 1");
  const double a = params_.two_plus();
  const double s = std::exp(a * std::log(at));
  const double ds = a * s / at;
  const double d2s = a * (a - 1.0) * s / (at * at);
  const long m = std::max(1L, std::lround(s));
  const double x = s - static_cast<double>(m);
  // Near an even corner psi = 1 + |x|, near an odd corner psi = 2 - |x|.
  const bool even = m % 2 == 0;
  const double base = even ? 1.0 : 2.0;
  const double sign = even ? 1.0 : -1.0;
  Jet g{std::abs(x), x > 0 ? 1.0 : -1.0, 0.0};
  if (std::abs(x) < 0.25) g = rounded_abs(x, rounding_delta(m));
  Jet out{base + sign * g.value, sign * g.d1 * ds, sign * (g.d2 * ds * ds + g.d1 * d2s)};
  if (t < 0) out.d1 = -out.d1;
  return out;
}

Jet WarpingProfile::jet(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return {constant_, 0.0, 0.0};
    case Kind::Exponential: {
      const double e = std::exp(t);
      return {e, e, e};
    }
    case Kind::Hyperbolic:
      return {std::cosh(t), std::sinh(t), std::cosh(t)};
    case Kind::Oscillating:
      break;
  }
  const double at = std::abs(t);
  if (at < 1.0) {
    // Even polynomial sum_k c_k t^(2k).
    double value = 0.0, d1 = 0.0, d2 = 0.0;
    double power = 1.0;  // t^(2k-2)
    for (Eigen::Index k = 0; k < bridge_.size(); ++k) {
      const double c = bridge_(k);
      if (k == 0) {
        value += c;
      } else {
        const double twok = 2.0 * static_cast<double>(k);
        value += c * power * t * t;
        d1 += c * twok * power * t;
        d2 += c * twok * (twok - 1.0) * power;
        power *= t * t;
      }
    }
    return {value, d1, d2};
  }
  const double b = params_.decay_exponent();
  const Jet psi = psi_jet(at);
  const double w = std::exp(-b * std::log(at));
  Jet out{psi.value * w, (psi.d1 - b * psi.value / at) * w,
          (psi.d2 - 2.0 * b * psi.d1 / at + b * (b + 1.0) * psi.value / (at * at)) * w};
  if (t < 0) out.d1 = -out.d1;
  return out;
}

bool WarpingProfile::in_B(double t) const {
  if (kind_ != Kind::Oscillating) return false;
  const double at = std::abs(t);
  if (at < 1.0) return false;
  if (!extents_.empty() && at <= extents_.back().hi) {
    auto it = std::upper_bound(extents_.begin(), extents_.end(), at,
                               [](double v, const Interval& e) { return v < e.lo; });
    if (it == extents_.begin()) return true;
    return !std::prev(it)->contains(at);
  }
  const double s = std::exp(params_.two_plus() * std::log(at));
  const long m0 = std::lround(s);
  for (long m = std::max(1L, m0 - 1); m <= m0 + 1; ++m) {
    if (m <= static_cast<long>(patches_.size())) continue;
    const SingularPatch c = compute_corner(m);
    if (std::abs(at - c.t_m) <= c.eta_m) return false;
  }
  return true;
}

bool WarpingProfile::in_rounding(double t) const {
  if (kind_ != Kind::Oscillating) return false;
  const double at = std::abs(t);
  if (at < 1.0) return false;
  const double s = std::exp(params_.two_plus() * std::log(at));
  const long m = std::max(1L, std::lround(s));
  return std::abs(s - static_cast<double>(m)) < rounding_delta(m);
}

namespace {

double min_on_unit(const Eigen::VectorXd& c) {
  // Scan in u = t^2 on [0, 1]; the bridge has degree <= 3 in u.
  double lo = std::numeric_limits<double>::infinity();
  constexpr int kScan = 10000;
  for (int k = 0; k <= kScan; ++k) {
    const double u = static_cast<double>(k) / kScan;
    double v = 0.0;
    for (Eigen::Index i = c.size() - 1; i >= 0; --i) v = v * u + c(i);
    lo = std::min(lo, v);
  }
  return lo;
}

}  // namespace

WarpingProfile build_profile(const WarpingParams& params) {
  params.validate();
  WarpingProfile p;
  p.kind_ = WarpingProfile::Kind::Oscillating;
  p.params_ = params;

  p.patches_.reserve(static_cast<std::size_t>(params.m_max));
  for (long m = 1; m <= params.m_max; ++m) p.patches_.push_back(p.compute_corner(m));

  for (SingularPatch& c : p.patches_) {
    const Interval e{std::max(1.0, c.t_m - c.eta_m), c.t_m + c.eta_m};
    if (!p.extents_.empty() && e.lo <= p.extents_.back().hi)
      p.extents_.back().hi = std::max(p.extents_.back().hi, e.hi);
    else
      p.extents_.push_back(e);
  }
  // Second pass: record the merged extent on every patch.
  std::size_t k = 0;
  for (SingularPatch& c : p.patches_) {
    while (!p.extents_[k].contains(c.t_m)) ++k;
    c.merged_extent = p.extents_[k];
  }
  if (params.m_max >= 2 && p.extents_.size() == 1)
    throw ConstructionError("build_profile: merged patches cover [1, " + std::to_string(p.extents_.back().hi) +
                            "]; epsilon too large for m_max");
  const SingularPatch last = p.compute_corner(params.m_max);
  const SingularPatch next = p.compute_corner(params.m_max + 1);
  if (!(next.t_m - next.eta_m > last.t_m + last.eta_m))
    throw ConstructionError("build_profile: patches beyond m_max still overlap; increase m_max");

  // Even bridge on [-1, 1] matching j, j', j'' at t = 1.
  const double b = params.decay_exponent();
  const Jet psi = p.psi_jet(1.0);
  const Eigen::Vector3d target(psi.value, psi.d1 - b * psi.value, psi.d2 - 2.0 * b * psi.d1 + b * (b + 1.0) * psi.value);
  constexpr double kFloor = 1e-3;
  Eigen::Matrix3d quartic;
  quartic << 1, 1, 1, 0, 2, 4, 0, 2, 12;
  Eigen::VectorXd c = quartic.fullPivLu().solve(target);
  if (min_on_unit(c) < kFloor) {
    // Re-bridge with one more even power and a raised constant term.
    Eigen::Matrix3d sextic;
    sextic << 1, 1, 1, 2, 4, 6, 2, 12, 30;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(sextic);
    const double start = std::max(c(0), 0.0);
    bool accepted = false;
    for (int step = 1; step <= 64 && !accepted; ++step) {
      const double c0 = start + step * target(0) / 8.0;
      const Eigen::Vector3d rest = lu.solve(Eigen::Vector3d(target(0) - c0, target(1), target(2)));
      Eigen::VectorXd candidate(4);
      candidate << c0, rest;
      if (min_on_unit(candidate) >= kFloor) {
        c = candidate;
        accepted = true;
      }
    }
    if (!accepted) throw ConstructionError("build_profile: no positive central bridge found");
  }
  p.bridge_ = c;
  return p;
}

double eval(const WarpingProfile& profile, double t, int order) {
  const Jet j = profile.jet(t);
  switch (order) {
    case 0:
      return j.value;
    case 1:
      return j.d1;
    case 2:
      return j.d2;
    default:
      throw std::invalid_argument("eval: order must be 0, 1 or 2");
  }
}

DerivativeBoundReport verify_derivative_bound(const WarpingProfile& profile, double t_lo, double t_hi,
                                              long samples) {
  if (!profile.oscillating()) throw std::invalid_argument("verify_derivative_bound: oscillating profile required");
  const WarpingParams& params = profile.params();
  if (t_lo < params.t0()) throw std::domain_error("verify_derivative_bound: t_lo must be >= t0");
  if (!(t_hi >= t_lo) || samples < 1) throw std::invalid_argument("verify_derivative_bound: bad sampling range");
  const double e = params.derivative_exponent();
  DerivativeBoundReport r;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (long k = 0; k < samples; ++k) {
    const double t = samples == 1 ? t_lo : t_lo + (t_hi - t_lo) * static_cast<double>(k) / (samples - 1);
    if (!profile.in_B(t)) continue;
    const double ratio = std::abs(profile.jet(t).d1) * std::pow(t, -e);
    ++r.samples_used;
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.argmin = t;
    }
  }
  if (r.samples_used == 0) throw EmptySampleError("verify_derivative_bound: no sample of the interval lies in B");
  r.pass = r.min_ratio >= 1.0;
  return r;
}

void write_profile_csv(std::ostream& out, const WarpingProfile& profile, std::span<const double> grid) {
  out << "t,j,jp,jpp,psi,in_B\n";
  const double b = profile.params().decay_exponent();
  char line[256];
  for (double t : grid) {
    const Jet j = profile.jet(t);
    const double psi = profile.oscillating() ? j.value * std::pow(std::abs(t), b)
                                             : std::numeric_limits<double>::quiet_NaN();
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", t, j.value, j.d1, j.d2, psi,
                  profile.in_B(t) ? 1 : 0);
    out << line;
  }
}

}  // namespace warpgap
