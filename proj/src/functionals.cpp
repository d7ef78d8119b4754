#include "warpgap/functionals.hpp"

#include "warpgap/error.hpp"

#include <json.hpp>

#include <array>
#include <future>
#include <numbers>

namespace warpgap {

double omega_n(int n) {
  if (n < 1) throw std::invalid_argument("omega_n: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double trapezoid_weight(const RadialFunction& phi, Eigen::Index i) {
  return (i == 0 || i == phi.size() - 1) ? 0.5 * phi.h : phi.h;
}

NormReport w22_radial_norm_sq(const RadialFunction& phi, const WarpingProfile& profile) {
  phi.validate();
  const int n = profile.dimension();
  PairwiseSum l2, grad, hess, lap;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const Jet j = profile.jet(phi.t(i));
    const double w = trapezoid_weight(phi, i) * std::pow(j.value, n - 1);
    const double d1 = phi.d1(i), d2 = phi.d2(i);
    const double beta = j.d1 / j.value;
    l2.add(w * phi.values(i) * phi.values(i));
    grad.add(w * d1 * d1);
    hess.add(w * (d2 * d2 + (n - 1) * beta * beta * d1 * d1));
    const double delta = d2 + (n - 1) * beta * d1;
    lap.add(w * delta * delta);
  }
  const double on = omega_n(n);
  NormReport r{on * l2.total(), on * grad.total(), on * hess.total(), on * lap.total(), 0.0};
  r.total = r.l2 + r.gradient + r.hessian;
  return r;
}

NormReport h22_radial_norm_sq(const RadialFunction& phi, const WarpingProfile& profile) {
  NormReport r = w22_radial_norm_sq(phi, profile);
  r.total = r.l2 + r.gradient + r.laplacian;
  return r;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kappa(int n) { return n == 2 ? 2.0 : 1.0; }

struct Accumulator {
  PairwiseSum value, error;
  double bounded = 0.0;
  long pieces = 0;
  long subdivisions = 0;
  bool converged = true;
};

// 1/w on the linear stretch of psi that follows corner m.
double inverse_weight_cell(const WarpingParams& p, long m, double t) {
  const double a = p.two_plus(), b = p.decay_exponent();
  const double lt = std::log(t);
  const double s = std::exp(a * lt);
  const double x = s - static_cast<double>(m);
  const bool even = m % 2 == 0;
  const double psi = even ? 1.0 + x : 2.0 - x;
  const double dpsi = (even ? 1.0 : -1.0) * a * s / t;
  const double w = std::exp(-b * lt);
  return 1.0 / hardy_weight(Jet{psi * w, (dpsi - b * psi / t) * w, 0.0}, p.n);
}

// psi inside the rounding of corner c, as a function of tau = t - t_m. Working
// in tau keeps the zone resolved when it is far narrower than ulp(t) * 1e4.
Jet zone_psi(const WarpingParams& p, const SingularPatch& c, double tau, double& t) {
  const double a = p.two_plus();
  t = c.t_m + tau;
  const double x = static_cast<double>(c.m) * std::expm1(a * std::log1p(tau / c.t_m));
  const double s = static_cast<double>(c.m) + x;
  const bool even = c.m % 2 == 0;
  const double sign = even ? 1.0 : -1.0;
  const Jet g = rounded_abs(x, c.rounding_delta);
  return {(even ? 1.0 : 2.0) + sign * g.value, sign * g.d1 * a * s / t, 0.0};
}

double inverse_weight_zone(const WarpingParams& p, const SingularPatch& c, double tau) {
  double t = 0.0;
  const Jet psi = zone_psi(p, c, tau, t);
  const double b = p.decay_exponent();
  const double w = std::exp(-b * std::log(t));
  return 1.0 / hardy_weight(Jet{psi.value * w, (psi.d1 - b * psi.value / t) * w, 0.0}, p.n);
}

double density_zone(const WarpingParams& p, const SingularPatch& c, double tau) {
  double t = 0.0;
  const Jet psi = zone_psi(p, c, tau, t);
  return std::pow(psi.value * std::exp(-p.decay_exponent() * std::log(t)), p.n - 1);
}

// j^(n-1) on the same stretch.
double density_cell(const WarpingParams& p, long m, double t) {
  const double a = p.two_plus(), b = p.decay_exponent();
  const double lt = std::log(t);
  const double x = std::exp(a * lt) - static_cast<double>(m);
  const double psi = m % 2 == 0 ? 1.0 + x : 2.0 - x;
  return std::pow(psi * std::exp(-b * lt), p.n - 1);
}

// Walks [1, upper] corner by corner: the two halves of each rounding, then the
// linear stretch to the next rounding. Roundings of corners above `rounded`
// are replaced by bound(m). stop_corner > 0 ends the walk at the lower edge of
// that corner's rounding.
template <class Zone, class Cell, class Bound>
void walk_corners(const WarpingProfile& profile, double upper, long stop_corner, long rounded, Zone&& zone,
                  Cell&& cell, Bound&& bound, double tol, long max_sub, Accumulator& acc) {
  const double a = profile.params().two_plus();
  const double total_length = upper - 1.0;
  const double corners = std::ceil(std::pow(upper, a)) + 1.0;
  const double total_pieces = 3.0 * corners;
  const WarpingParams& p = profile.params();
  auto piece = [&](auto&& f, double lo, double hi, double shift) {
    hi = std::min(hi, upper);
    if (!(hi > lo)) return;
    lo -= shift;
    hi -= shift;
    const double share = tol * (0.5 * (hi - lo) / total_length + 0.5 / total_pieces);
    const QuadratureResult q = integrate(f, lo, hi, share, max_sub);
    acc.value.add(q.value);
    acc.error.add(q.error_bound);
    acc.subdivisions += q.subdivisions;
    acc.converged = acc.converged && q.converged;
    ++acc.pieces;
  };
  SingularPatch here = profile.corner(1);
  for (long m = 1;; ++m) {
    if (stop_corner > 0 && m >= stop_corner) break;
    if (here.rounding.lo >= upper) break;
    if (m <= rounded) {
      auto f = [&](double tau) { return zone(p, here, tau); };
      piece(f, here.rounding.lo, here.t_m, here.t_m);
      piece(f, here.t_m, here.rounding.hi, here.t_m);
    } else {
      acc.bounded += bound(m);
    }
    const SingularPatch next = profile.corner(m + 1);
    piece([&](double t) { return cell(m, t); }, here.rounding.hi, next.rounding.lo, 0.0);
    here = next;
  }
}

TailEnvelope volume_envelope(const WarpingProfile& profile, double cut) {
  const WarpingParams& p = profile.params();
  return {std::pow(2.0, p.n - 1), p.epsilon * (p.n - 1), cut};
}

double inverse_weight(const WarpingProfile& profile, double t) { return 1.0 / hardy_weight(profile, t); }

}  // namespace

TailEnvelope frak_J_envelope(const WarpingProfile& profile, double cut) {
  const WarpingParams& p = profile.params();
  const double a = p.two_plus(), c = p.decay_exponent();
  const double slope = a - 2.0 * c * std::pow(cut, -a);
  if (!(cut >= 1.0) || !(slope > 0.0)) throw EnvelopeError("frak_J_envelope: cut below the monotone range");
  return {kappa(p.n) / ((p.n - 1) * slope * slope), p.epsilon, cut};
}

double rounding_mass_bound(const WarpingProfile& profile, long m) {
  const WarpingParams& p = profile.params();
  const SingularPatch c = profile.corner(m);
  const double a = p.two_plus(), b = p.decay_exponent();
  const double tl = c.rounding.lo, tr = c.rounding.hi;
  const double slope = a * std::pow(tl, a - 1.0);
  const double beta = 2.0 * b / tl;
  const double front = std::pow(tr, 1.0 + p.epsilon * (p.n - 1)) / slope;
  return kappa(p.n) * front * 2.0 * (c.rounding_delta / slope) *
         (beta + std::numbers::pi / (2.0 * std::sqrt(p.n - 1.0)));
}

double rounding_tail_bound(const WarpingProfile& profile, long m_first) {
  const WarpingParams& p = profile.params();
  if (m_first < 2) throw std::invalid_argument("rounding_tail_bound: m_first must be >= 2");
  const double a = p.two_plus(), b = p.decay_exponent(), q = 1.0 + p.epsilon * (p.n - 1);
  const SingularPatch c = profile.corner(m_first);
  const double rho = c.eta_m / c.t_m;
  const double beta = 2.0 * b / (c.t_m * (1.0 - rho));
  const double gamma = p.epsilon * (0.5 * p.n - 1.0);
  const double r = 0.5 * (3.0 + p.n * p.epsilon) - gamma / a;
  const double K = kappa(p.n) * 2.0 * std::pow(1.0 + rho, q + a - 1.0) / (a * std::pow(1.0 - rho, 2.0 * (a - 1.0))) *
                   (beta + std::numbers::pi / (2.0 * std::sqrt(p.n - 1.0)));
  const double M = static_cast<double>(m_first);
  return K * (std::pow(M, -r) + std::pow(M, 1.0 - r) / (r - 1.0));
}

FrakJBreakdown frak_J_breakdown(const WarpingProfile& profile, double T, const FrakJOptions& options) {
  if (!(T > 0.0)) throw std::invalid_argument("frak_J: T must be positive");
  if (!(options.tol > 0.0)) throw std::invalid_argument("frak_J: tol must be positive");
  FrakJBreakdown out;
  const int n = profile.dimension();
  const bool infinite = std::isinf(T);
  switch (profile.kind()) {
    case WarpingProfile::Kind::Constant: {
      const double w = std::pow(profile.jet(0.0).value, n - 1);
      out.result = infinite ? QuadratureResult{kInf, kInf, 0, false} : QuadratureResult{2.0 * T / w, 0.0, 0, true};
      out.quadrature = out.result.value;
      return out;
    }
    case WarpingProfile::Kind::Exponential: {
      // 1/w grows like e^((n-1)|t|) as t -> -infinity.
      if (infinite) {
        out.result = {kInf, kInf, 0, false};
      } else {
        out.result = integrate([&](double t) { return inverse_weight(profile, t); }, -T, T, options.tol,
                               options.max_subdivisions);
      }
      out.quadrature = out.result.value;
      return out;
    }
    case WarpingProfile::Kind::Hyperbolic: {
      if (infinite) throw EnvelopeError("frak_J: no tail envelope for this profile kind");
      const QuadratureResult half = integrate([&](double t) { return inverse_weight(profile, t); }, 0.0, T,
                                              0.5 * options.tol, options.max_subdivisions);
      out.result = {2.0 * half.value, 2.0 * half.error_bound, half.subdivisions, half.converged};
      out.quadrature = out.result.value;
      return out;
    }
    case WarpingProfile::Kind::Oscillating:
      break;
  }

  const WarpingParams& p = profile.params();
  const double half_tol = 0.5 * options.tol;
  auto general = [&](double t) { return inverse_weight(profile, t); };
  auto cell = [&](long m, double t) { return inverse_weight_cell(p, m, t); };
  auto bound = [&](long m) { return rounding_mass_bound(profile, m); };
  Accumulator acc;

  const double upper = infinite ? options.cut : T;
  const double central = std::min(1.0, upper);
  {
    const QuadratureResult q = integrate(general, 0.0, central, 0.5 * half_tol, options.max_subdivisions);
    acc.value.add(q.value);
    acc.error.add(q.error_bound);
    acc.subdivisions += q.subdivisions;
    acc.converged = q.converged;
    ++acc.pieces;
  }
  long stop_corner = 0;
  if (infinite) {
    if (!(options.cut > p.t0()) || options.cut <= 1.0)
      throw std::invalid_argument("frak_J: cut must exceed max(1, t0)");
    stop_corner = static_cast<long>(std::ceil(std::pow(options.cut, p.two_plus())));
    out.cut = profile.corner(stop_corner).rounding.lo;
  }
  if (upper > 1.0) {
    const long rounded = infinite ? (options.rounded_corners > 0 ? options.rounded_corners : p.m_max)
                                  : std::numeric_limits<long>::max();
    walk_corners(profile, infinite ? out.cut : upper, stop_corner, rounded, inverse_weight_zone, cell, bound, 0.5 * half_tol,
                 options.max_subdivisions, acc);
  }
  out.quadrature = 2.0 * acc.value.total();
  out.quadrature_error = 2.0 * acc.error.total();
  out.bounded_corners = 2.0 * acc.bounded;
  out.pieces = acc.pieces;

  double value = out.quadrature + 0.5 * out.bounded_corners;
  double error = out.quadrature_error + 0.5 * out.bounded_corners;
  bool converged = acc.converged;
  if (infinite) {
    out.envelope = frak_J_envelope(profile, out.cut);
    const double t_hi = 10.0 * out.cut;
    // Samples inside a rounding are moved to the middle of the next stretch.
    auto admit = [&](double t) {
      if (!profile.in_rounding(t)) return t;
      const long m = std::lround(std::pow(t, p.two_plus()));
      return 0.5 * (profile.corner(m).rounding.hi + profile.corner(m + 1).rounding.lo);
    };
    out.dominance = check_dominance(out.envelope, general, t_hi, options.dominance_samples, admit);
    if (!out.dominance.pass)
      throw EnvelopeError("frak_J: envelope dominance fails at t = " + std::to_string(out.dominance.worst_t));
    out.tail_envelope = 2.0 * integrate_tail(out.envelope);
    out.tail_corners = 2.0 * rounding_tail_bound(profile, stop_corner);
    value += 0.5 * (out.tail_envelope + out.tail_corners);
    error += 0.5 * (out.tail_envelope + out.tail_corners);
  }
  out.result = {value, error, acc.subdivisions, converged && std::isfinite(value)};
  return out;
}

QuadratureResult frak_J(const WarpingProfile& profile, double T, const FrakJOptions& options) {
  return frak_J_breakdown(profile, T, options).result;
}

double gap_lower_bound(const WarpingProfile& profile, const FrakJOptions& options) {
  return gap_lower_bound(profile, kInf, options);
}

double gap_lower_bound(const WarpingProfile& profile, double T, const FrakJOptions& options) {
  const QuadratureResult J = frak_J(profile, T, options);
  if (!std::isfinite(J.upper())) return 0.0;
  return omega_n(profile.dimension()) / J.upper();
}

QuadratureResult certified_volume(const WarpingProfile& profile, double cut, double tol) {
  const int n = profile.dimension();
  if (!profile.oscillating()) return {kInf, kInf, 0, false};
  const WarpingParams& p = profile.params();
  auto general = [&](double t) { return std::pow(profile.jet(t).value, n - 1); };
  auto cell = [&](long m, double t) { return density_cell(p, m, t); };
  auto none = [](long) { return 0.0; };
  Accumulator acc;
  const QuadratureResult q = integrate(general, 0.0, 1.0, 0.25 * tol);
  acc.value.add(q.value);
  acc.error.add(q.error_bound);
  acc.converged = q.converged;
  walk_corners(profile, cut, 0, std::numeric_limits<long>::max(), density_zone, cell, none, 0.25 * tol, 4000, acc);
  // psi in [1, 2] brackets the remainder between the two power tails.
  const TailEnvelope upper_env = volume_envelope(profile, cut);
  const double tail_hi = integrate_tail(upper_env);
  const double tail_lo = tail_hi / upper_env.constant;
  const double on = omega_n(n);
  const double mid = acc.value.total() + 0.5 * (tail_lo + tail_hi);
  const double err = acc.error.total() + 0.5 * (tail_hi - tail_lo);
  return {2.0 * on * mid, 2.0 * on * err, acc.subdivisions, acc.converged};
}

void AuditReport::add(AuditItem item) {
  items.push_back(std::move(item));
  pass = true;
  for (const AuditItem& it : items) pass = pass && it.pass;
}

const AuditItem* AuditReport::find(const std::string& check) const {
  for (const AuditItem& it : items)
    if (it.check == check) return &it;
  return nullptr;
}

std::string AuditReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["items"] = nlohmann::ordered_json::array();
  for (const AuditItem& it : items) {
    nlohmann::ordered_json j;
    j["check"] = it.check;
    j["lhs"] = it.lhs;
    j["rhs"] = it.rhs;
    j["margin"] = it.margin;
    j["pass"] = it.pass;
    if (!it.detail.empty()) j["detail"] = it.detail;
    doc["items"].push_back(j);
  }
  doc["pass"] = pass;
  return doc.dump(2);
}

AuditItem compare_le(std::string check, double lhs, double rhs, double rel_tol) {
  AuditItem it;
  it.check = std::move(check);
  it.lhs = lhs;
  it.rhs = rhs;
  it.margin = rhs - lhs;
  it.pass = std::isfinite(lhs) && lhs <= rhs + rel_tol * std::max(std::abs(lhs), std::abs(rhs));
  return it;
}

NormReport w22_surface_norm_sq(const SurfaceFunction& F, const WarpingProfile& profile) {
  const SurfaceDerivatives d = surface_derivatives(F);
  const Eigen::Index rows = F.values.rows(), cols = F.values.cols();
  PairwiseSum l2, grad, hess, lap;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double w = ((i == 0 || i == rows - 1) ? 0.5 * F.h : F.h) * profile.jet(d.t(i)).value;
    Eigen::VectorXd a(cols), g(cols), hs(cols), lp(cols);
    for (Eigen::Index k = 0; k < cols; ++k) {
      a(k) = d.f(i, k) * d.f(i, k);
      g(k) = gradient_sq_full(d, profile, i, k);
      hs(k) = hessian_sq_full(d, profile, i, k);
      const double delta = laplacian_full(d, profile, i, k);
      lp(k) = delta * delta;
    }
    l2.add(w * periodic_integrate(a));
    grad.add(w * periodic_integrate(g));
    hess.add(w * periodic_integrate(hs));
    lap.add(w * periodic_integrate(lp));
  }
  NormReport r{l2.total(), grad.total(), hess.total(), lap.total(), 0.0};
  r.total = r.l2 + r.gradient + r.hessian;
  return r;
}

AuditItem rearrangement_check(const SurfaceFunction& F, const WarpingProfile& profile, double rel_tol) {
  const double lhs = w22_surface_norm_sq(F, profile).total;
  const RadialFunction hat = symmetrize(F);
  PairwiseSum rhs;
  for (Eigen::Index i = 0; i < hat.size(); ++i)
    rhs.add(trapezoid_weight(hat, i) * hardy_weight(profile, hat.t(i)) * hat.d1(i) * hat.d1(i));
  // Stated as rhs <= lhs.
  return compare_le("rearrangement", omega_n(2) * rhs.total(), lhs, rel_tol);
}

AuditReport holder_compare(const RadialFunction& phi, const WarpingProfile& profile, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("holder_compare: p must be >= 2");
  const int n = profile.dimension();
  const double on = omega_n(n);
  PairwiseSum vol;
  std::vector<double> weights(static_cast<std::size_t>(phi.size()));
  std::array<std::vector<double>, 3> u;
  for (auto& v : u) v.resize(weights.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    weights[k] = on * trapezoid_weight(phi, i) * volume_density(profile, phi.t(i));
    vol.add(weights[k]);
    u[0][k] = std::abs(phi.values(i));
    u[1][k] = std::abs(phi.d1(i));
    u[2][k] = std::sqrt(radial_hessian_sq(phi, profile, i));
  }
  const double volume = vol.total();
  const std::array<const char*, 3> names = {"holder_value", "holder_gradient", "holder_hessian"};
  AuditReport report;
  for (std::size_t c = 0; c < 3; ++c) {
    PairwiseSum two, pth;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      two.add(weights[k] * u[c][k] * u[c][k]);
      pth.add(weights[k] * std::pow(u[c][k], p));
    }
    const double l2 = std::sqrt(two.total());
    const double lp = std::pow(pth.total(), 1.0 / p);
    report.add(compare_le(names[c], l2, std::pow(volume, (p - 2.0) / (2.0 * p)) * lp, 1e-12));
  }
  return report;
}

AuditReport audit_inequality_chain(const WarpingProfile& profile, const AuditOptions& options) {
  AuditReport report;
  const int n = profile.dimension();

  if (!profile.oscillating()) {
    const QuadratureResult J = frak_J(profile, kInf, options.frak_j);
    AuditItem finite = compare_le("frak_J_finite", J.upper(), std::numeric_limits<double>::max(), 0.0);
    finite.detail = std::isfinite(J.value) ? "" : "frak J diverges";
    report.add(finite);
    AuditItem gap = compare_le("gap_lower_bound", 0.0, gap_lower_bound(profile, options.frak_j), 0.0);
    gap.pass = gap.rhs > 0.0;
    if (!gap.pass) gap.detail = "no gap";
    report.add(gap);
    return report;
  }

  const WarpingParams& p = profile.params();
  const double T = options.T;
  if (!(T > p.t0()) || !(T > 1.0)) throw std::invalid_argument("audit: T must exceed max(1, t0)");

  // The full-line integral is the slow item; it runs while the scans proceed.
  auto frak_future = std::async(std::launch::async, [&] { return frak_J_breakdown(profile, kInf, options.frak_j); });

  // Volume envelope and psi range on one scan of [1, T].
  {
    const double q = 1.0 + p.epsilon * (n - 1);
    const double b = p.decay_exponent();
    double worst = 0.0, worst_t = 1.0, lo = kInf, hi = -kInf, lo_t = 1.0, hi_t = 1.0;
    for (long k = 0; k < options.scan_points; ++k) {
      const double t = 1.0 + (T - 1.0) * static_cast<double>(k) / static_cast<double>(options.scan_points - 1);
      const double j = profile.jet(t).value;
      const double ratio = std::pow(j, n - 1) * std::pow(t, q) / std::pow(2.0, n - 1);
      if (ratio > worst) {
        worst = ratio;
        worst_t = t;
      }
      const double psi = j * std::pow(t, b);
      if (psi < lo) {
        lo = psi;
        lo_t = t;
      }
      if (psi > hi) {
        hi = psi;
        hi_t = t;
      }
    }
    AuditItem env = compare_le("volume_envelope", worst, 1.0);
    env.detail = "max of j^(n-1) t^(1+eps(n-1)) / 2^(n-1) at t = " + std::to_string(worst_t);
    report.add(env);
    AuditItem psi_lo = compare_le("psi_lower", 1.0, lo, 1e-12);
    psi_lo.detail = "min psi at t = " + std::to_string(lo_t);
    report.add(psi_lo);
    AuditItem psi_hi = compare_le("psi_upper", hi, 2.0, 1e-12);
    psi_hi.detail = "max psi at t = " + std::to_string(hi_t);
    report.add(psi_hi);
  }

  {
    const DerivativeBoundReport d = verify_derivative_bound(profile, p.t0(), T, options.derivative_samples);
    AuditItem it = compare_le("derivative_bound", 1.0, d.min_ratio, 0.0);
    it.detail = "min |j'| t^-e at t = " + std::to_string(d.argmin) + " over " + std::to_string(d.samples_used) +
                " samples in B";
    report.add(it);
  }

  {
    const double q = 1.0 + p.epsilon * (n - 1);
    const double e = (8.0 + 3.0 * p.epsilon * n) / (8.0 + 2.0 * p.epsilon * n);
    const double c = std::pow(2.0, 2.0 + p.epsilon * (n - 1));
    double worst = 0.0;
    long worst_m = 2;
    for (long m = 2; m <= p.m_max; ++m) {
      const SingularPatch s = profile.corner(m);
      const double lhs = 2.0 * s.eta_m * std::pow(s.t_m + s.eta_m, q);
      const double rhs = c * std::pow(static_cast<double>(m), -e);
      if (lhs / rhs > worst) {
        worst = lhs / rhs;
        worst_m = m;
      }
    }
    AuditItem it = compare_le("patch_sum_termwise", worst, 1.0);
    it.detail = "worst ratio at m = " + std::to_string(worst_m);
    report.add(it);
  }

  {
    const double e = (8.0 + 3.0 * p.epsilon * n) / (8.0 + 2.0 * p.epsilon * n);
    AuditItem it = compare_le("comparison_series", 1.0, e, 0.0);
    it.pass = e > 1.0;
    report.add(it);
  }

  const FrakJBreakdown J = frak_future.get();
  {
    AuditItem it = compare_le("frak_J_finite", J.result.upper(), std::numeric_limits<double>::max(), 0.0);
    it.pass = J.result.converged && std::isfinite(J.result.upper());
    it.detail = "certified interval [" + std::to_string(J.result.lower()) + ", " + std::to_string(J.result.upper()) +
                "]";
    report.add(it);
  }
  {
    const double L = omega_n(n) / J.result.upper();
    AuditItem it = compare_le("gap_lower_bound", 0.0, L, 0.0);
    it.pass = L > 0.0 && std::isfinite(L);
    report.add(it);
  }
  return report;
}

}  // namespace warpgap
