#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "warpgap/error.hpp"
#include "warpgap/functionals.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace warpgap;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

const WarpingProfile& osc2() {
  static const WarpingProfile p = build_profile(WarpingParams{2, 0.1, 100000});
  return p;
}

const WarpingProfile& osc3() {
  static const WarpingProfile p = build_profile(WarpingParams{3, 0.1, 100000});
  return p;
}

const FrakJBreakdown& full_line_2() {
  static const FrakJBreakdown b = frak_J_breakdown(osc2(), kInf);
  return b;
}

// Smooth transition 0 -> 1 on [-r, r], constant outside.
double transition(double t, double r) {
  if (t <= -r) return 0.0;
  if (t >= r) return 1.0;
  const double x = 0.5 * (t / r + 1.0);
  return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

}  // namespace

TEST_CASE("omega_n") {
  CHECK(omega_n(2) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(omega_n(3) == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(omega_n(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-15));
}

TEST_CASE("radial norms: zero, constants, and a polynomial bump") {
  const WarpingProfile flat = WarpingProfile::constant(2, 1.0);
  const RadialFunction zero = RadialFunction::sample(-2.0, 2.0, 1e-2, [](double) { return 0.0; });
  CHECK(w22_radial_norm_sq(zero, osc2()).total == 0.0);
  CHECK(h22_radial_norm_sq(zero, osc2()).total == 0.0);

  const RadialFunction one = RadialFunction::sample(-2.0, 2.0, 1e-2, [](double) { return 1.0; });
  const WarpingProfile c3 = WarpingProfile::constant(3, 2.0);
  const NormReport r = w22_radial_norm_sq(one, c3);
  CHECK(r.l2 == doctest::Approx(omega_n(3) * 4.0 * 4.0).epsilon(1e-13));
  CHECK(r.total == r.l2);
  const RadialFunction three = RadialFunction::sample(-2.0, 2.0, 1e-2, [](double) { return 3.0; });
  CHECK(h22_radial_norm_sq(three, c3).total == doctest::Approx(9.0 * omega_n(3) * 16.0).epsilon(1e-13));

  // phi = (1 - t^2)^2 on [-1, 1]: int phi^2 = 256/315, int phi'^2 = 256/105,
  // int phi''^2 = 128/5
  const double exact_l2 = 256.0 / 315, exact_g = 256.0 / 105, exact_h = 128.0 / 5;
  double prev = 0.0;
  for (double h : {1e-2, 5e-3}) {
    const RadialFunction b = RadialFunction::sample(-1.0, 1.0, h, [](double t) { return (1 - t * t) * (1 - t * t); });
    const NormReport n = w22_radial_norm_sq(b, flat);
    CHECK(n.l2 == doctest::Approx(2 * kPi * exact_l2).epsilon(1e-4));
    CHECK(n.gradient == doctest::Approx(2 * kPi * exact_g).epsilon(1e-3));
    CHECK(n.hessian == doctest::Approx(2 * kPi * exact_h).epsilon(1e-3));
    const double err = std::abs(n.total - 2 * kPi * (exact_l2 + exact_g + exact_h));
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("Laplacian part is at most n times the Hessian part") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const WarpingProfile* p : {&osc2(), &osc3()}) {
    const int n = p->dimension();
    for (int trial = 0; trial < 100; ++trial) {
      const double a = g(rng), b = g(rng), c = g(rng);
      const RadialFunction phi = RadialFunction::sample(
          -4.0, 4.0, 1e-2, [&](double t) { return a * std::sin(b * t) + c * t * t + std::cos(t); });
      const NormReport w = w22_radial_norm_sq(phi, *p);
      const NormReport hh = h22_radial_norm_sq(phi, *p);
      CHECK(w.laplacian <= n * w.hessian * (1 + 1e-12));
      CHECK(hh.total <= (n + 1) * w.total);
    }
  }
}

TEST_CASE("frak J on constant profiles") {
  CHECK(frak_J(WarpingProfile::constant(2, 1.0), 7.0).value == doctest::Approx(14.0).epsilon(1e-15));
  CHECK(frak_J(WarpingProfile::constant(3, 2.0), 7.0).value == doctest::Approx(14.0 / 4).epsilon(1e-15));
  const QuadratureResult inf = frak_J(WarpingProfile::constant(2, 1.0), kInf);
  CHECK(std::isinf(inf.value));
  CHECK_FALSE(inf.converged);
  CHECK(gap_lower_bound(WarpingProfile::constant(2, 1.0)) == 0.0);
  for (double T : {1.0, 5.0, 40.0})
    CHECK(gap_lower_bound(WarpingProfile::constant(2, 1.0), T) == doctest::Approx(kPi / T).epsilon(1e-14));
  CHECK_THROWS_AS(frak_J(WarpingProfile::hyperbolic(2), kInf), EnvelopeError);
  // j = cosh, n = 2: w = cosh 2t / cosh t and int cosh t / cosh 2t over R is pi / sqrt 2
  CHECK(frak_J(WarpingProfile::hyperbolic(2), 40.0).value == doctest::Approx(kPi / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("frak J is finite on the full line and the truncations increase toward it") {
  const FrakJBreakdown& b = full_line_2();
  CHECK(b.result.converged);
  CHECK(std::isfinite(b.result.upper()));
  CHECK(b.dominance.pass);
  CHECK(b.result.error_bound >= b.quadrature_error);
  double prev = 0.0;
  for (double T : {2.0, 5.0, 10.0, 20.0, 40.0, 100.0}) {
    const QuadratureResult q = frak_J(osc2(), T);
    CHECK(q.converged);
    CHECK(q.value > prev);
    CHECK(q.upper() <= b.result.upper());
    prev = q.value;
  }
  CHECK(gap_lower_bound(osc2()) == doctest::Approx(2 * kPi / b.result.upper()).epsilon(1e-15));
  CHECK(gap_lower_bound(osc2()) > 0.0);
}

TEST_CASE("frak J against a coarse Riemann sum plus envelope tail") {
  // midpoint sum of 1/w on [0, 1e4], step 1e-3; the roundings are below the
  // step so the oracle only resolves the linear stretches
  const WarpingProfile& p = osc2();
  const double h = 1e-3, R = 1e4;
  PairwiseSum s;
  const long N = static_cast<long>(R / h);
  for (long k = 0; k < N; ++k) s.add(1.0 / hardy_weight(p, (k + 0.5) * h));
  const double riemann = 2.0 * h * s.total();
  const TailEnvelope env = frak_J_envelope(p, R);
  const double tail = 2.0 * integrate_tail(env);
  const FrakJBreakdown& b = full_line_2();
  CHECK(riemann <= b.result.upper());
  CHECK(riemann + tail >= b.result.lower());
  // the sum does not resolve roundings narrower than h, so single corners are
  // checked against Simpson on a grid fine enough to resolve them
  for (long m : {100L, 500L, 2000L}) {
    const SingularPatch c = p.corner(m);
    const double lo = c.rounding.lo - 3 * c.rounding.length(), hi = c.rounding.hi + 3 * c.rounding.length();
    const long M = 200000;
    const double step = (hi - lo) / M;
    PairwiseSum z;
    for (long k = 0; k <= M; ++k)
      z.add(((k == 0 || k == M) ? 1.0 : (k % 2 ? 4.0 : 2.0)) / hardy_weight(p, lo + k * step));
    const double simpson = z.total() * step / 3.0;
    const double diff = 0.5 * (frak_J(p, hi).value - frak_J(p, lo).value);
    CHECK(diff == doctest::Approx(simpson).epsilon(1e-8));
  }
}

TEST_CASE("frak J bounds: envelope, rounding masses and their tail") {
  const WarpingProfile& p = osc2();
  CHECK_THROWS_AS(frak_J_envelope(p, 0.5), EnvelopeError);
  const TailEnvelope env = frak_J_envelope(p, 50.0);
  CHECK(env.exponent == doctest::Approx(0.1));
  // rounding_mass_bound dominates the integral over each rounding
  for (long m : {2L, 3L, 10L, 57L, 400L, 2000L}) {
    const SingularPatch c = p.corner(m);
    const QuadratureResult q =
        integrate([&](double t) { return 1.0 / hardy_weight(p, t); }, c.rounding.lo, c.rounding.hi, 1e-14);
    CHECK(q.upper() <= rounding_mass_bound(p, m));
  }
  for (long M : {2L, 50L, 5000L}) {
    double partial = 0.0;
    for (long m = M; m < M + 20000; ++m) partial += rounding_mass_bound(p, m);
    CHECK(partial <= rounding_tail_bound(p, M));
  }
  CHECK_THROWS_AS(rounding_tail_bound(p, 1), std::invalid_argument);
}

TEST_CASE("certified volume") {
  const QuadratureResult v30 = certified_volume(osc2(), 30.0);
  const QuadratureResult v100 = certified_volume(osc2(), 100.0);
  CHECK(v30.converged);
  CHECK(std::isfinite(v30.value));
  CHECK(v100.error_bound < v30.error_bound);
  CHECK(v100.lower() <= v30.upper());
  CHECK(v30.lower() <= v100.upper());
  CHECK(std::isinf(certified_volume(WarpingProfile::constant(2, 1.0)).value));
}

TEST_CASE("rearrangement check") {
  const WarpingProfile& p = osc2();
  const SurfaceFunction radial =
      SurfaceFunction::sample(-5.0, 5.0, 1e-2, 16, [](double t, double) { return std::tanh(t) + 0.1 * t * t; });
  const AuditItem r = rearrangement_check(radial, p);
  CHECK(r.pass);
  CHECK(r.margin >= 0.0);
  const SurfaceFunction s = SurfaceFunction::sample(-5.0, 5.0, 1e-2, 16, [](double, double q) { return std::sin(q); });
  const AuditItem z = rearrangement_check(s, p);
  CHECK(z.lhs == 0.0);  // lhs of the item is the radial side
  CHECK(z.rhs > 0.0);
  CHECK(z.pass);
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    CHECK(rearrangement_check(random_band_limited_surface(5.0, 1e-2, 64, 4, 6, seed), p).pass);
}

TEST_CASE("Holder comparison") {
  const WarpingProfile& p = osc2();
  const RadialFunction phi =
      RadialFunction::sample(-5.0, 5.0, 1e-2, [](double t) { return std::sin(t) + 0.3 * t; });
  const AuditReport two = holder_compare(phi, p, 2.0);
  CHECK(two.pass);
  for (const AuditItem& it : two.items) CHECK(it.lhs == doctest::Approx(it.rhs).epsilon(1e-12));
  const RadialFunction one = RadialFunction::sample(-5.0, 5.0, 1e-2, [](double) { return 1.0; });
  const AuditItem* v = holder_compare(one, p, 4.0).find("holder_value");
  REQUIRE(v != nullptr);
  CHECK(v->lhs == doctest::Approx(v->rhs).epsilon(1e-12));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = g(rng), b = g(rng);
    const RadialFunction f = RadialFunction::sample(-5.0, 5.0, 1e-2, [&](double t) { return a * std::cos(b * t) + t; });
    CHECK(holder_compare(f, p, 4.0).pass);
  }
  CHECK_THROWS_AS(holder_compare(phi, p, 1.5), std::invalid_argument);
}

TEST_CASE("eventually constant functions: only the L2 part sees the extension") {
  const WarpingProfile& p = osc2();
  const double h = 1e-3;
  auto f = [](double t) { return transition(t, 3.0); };
  const RadialFunction small = RadialFunction::sample(-4.0, 4.0, h, f, true);
  const RadialFunction big = RadialFunction::sample(-4.0, 6.0, h, f, true);
  const NormReport a = w22_radial_norm_sq(small, p), b = w22_radial_norm_sq(big, p);
  CHECK(b.gradient == doctest::Approx(a.gradient).epsilon(1e-12));
  CHECK(b.hessian == doctest::Approx(a.hessian).epsilon(1e-12));
  const RadialFunction ext = RadialFunction::sample(4.0, 6.0, h, [](double) { return 1.0; });
  CHECK(b.l2 == doctest::Approx(a.l2 + w22_radial_norm_sq(ext, p).l2).epsilon(1e-12));
}

TEST_CASE("Cauchy-Schwarz bound holds for sampled transitions") {
  const WarpingProfile& p = osc2();
  const double L = gap_lower_bound(p);
  for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const RadialFunction phi = RadialFunction::sample(-10.0, 10.0, 1e-3, [&](double t) { return transition(t, r); }, true);
    CHECK(w22_radial_norm_sq(phi, p).total >= L);
    CHECK(w22_radial_norm_sq(phi, p).gradient + w22_radial_norm_sq(phi, p).hessian >= L);
  }
}

TEST_CASE("patch-sum termwise example") {
  const WarpingProfile p = build_profile(WarpingParams{2, 0.2, 1000});
  const SingularPatch c = p.corner(2);
  const double lhs = 2.0 * c.eta_m * std::pow(c.t_m + c.eta_m, 1.2);
  const double rhs = std::pow(2.0, 2.2) * std::pow(2.0, -(8.0 + 1.2) / (8.0 + 0.8));
  CHECK(lhs <= rhs);
  CHECK((8.0 + 3 * 0.2 * 2) / (8.0 + 2 * 0.2 * 2) > 1.0);
}

TEST_CASE("inequality audit on the oscillating profile") {
  AuditOptions o;
  o.T = 200.0;
  o.scan_points = 200000;
  o.derivative_samples = 200000;
  o.frak_j.cut = 100.0;
  const AuditReport r = audit_inequality_chain(osc2(), o);
  const std::vector<std::string> order = {"volume_envelope", "psi_lower", "psi_upper", "derivative_bound",
                                          "patch_sum_termwise", "comparison_series", "frak_J_finite",
                                          "gap_lower_bound"};
  REQUIRE(r.items.size() == order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    CHECK(r.items[k].check == order[k]);
    CHECK(r.items[k].pass);
  }
  CHECK(r.pass);
  const nlohmann::json j = nlohmann::json::parse(r.to_json());
  CHECK(j["pass"] == true);
  for (const auto& it : j["items"]) {
    CHECK(it.contains("check"));
    CHECK(it.contains("lhs"));
    CHECK(it.contains("rhs"));
    CHECK(it.contains("margin"));
    CHECK(it.contains("pass"));
  }
  CHECK(audit_inequality_chain(osc2(), o).to_json() == r.to_json());
}

TEST_CASE("flat control audit reports no gap") {
  AuditOptions o;
  o.flat_control = true;
  const AuditReport r = audit_inequality_chain(WarpingProfile::constant(2, 1.0), o);
  CHECK_FALSE(r.pass);
  const AuditItem* gap = r.find("gap_lower_bound");
  REQUIRE(gap != nullptr);
  CHECK_FALSE(gap->pass);
  CHECK(gap->detail == "no gap");
  CHECK_FALSE(r.find("frak_J_finite")->pass);
}

TEST_CASE("compare_le") {
  CHECK(compare_le("x", 1.0, 1.0).pass);
  CHECK(compare_le("x", 1.0 + 1e-10, 1.0).pass);
  CHECK_FALSE(compare_le("x", 1.0 + 1e-6, 1.0).pass);
  CHECK_FALSE(compare_le("x", std::nan(""), 1.0).pass);
  CHECK(compare_le("x", 0.5, 1.0).margin == 0.5);
}
