#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "warpgap/error.hpp"
#include "warpgap/warping.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace warpgap;

namespace {

const WarpingProfile& profile_2_01() {
  static const WarpingProfile p = build_profile(WarpingParams{2, 0.1, 100000});
  return p;
}

const WarpingProfile& profile_3_01() {
  static const WarpingProfile p = build_profile(WarpingParams{3, 0.1, 100000});
  return p;
}

const WarpingProfile& profile_2_02() {
  static const WarpingProfile p = build_profile(WarpingParams{2, 0.2, 100000});
  return p;
}

}  // namespace

TEST_CASE("triangle_psi branches") {
  const double a = 2.1;
  CHECK(triangle_psi(std::pow(2.5, 1.0 / a), a) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(triangle_psi(1.0, a) == 2.0);
  CHECK(triangle_psi(std::pow(3.25, 1.0 / a), a) == doctest::Approx(1.75).epsilon(1e-12));
  CHECK_THROWS_AS(triangle_psi(0.999, a), std::domain_error);
}

TEST_CASE("rounded_abs matches |x| to second order at the edge") {
  const double d = 0.125;
  const Jet in = rounded_abs(d * (1 - 1e-12), d);
  CHECK(in.value == doctest::Approx(d).epsilon(1e-10));
  CHECK(in.d1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(in.d2) <= 1e-9);
  const Jet mid = rounded_abs(0.0, d);
  CHECK(mid.value == doctest::Approx(3 * d / 8));
  for (double x = -d; x <= d; x += d / 64) {
    const Jet h = rounded_abs(x, d);
    CHECK(h.value >= std::abs(x) - 1e-15);
    CHECK(h.value <= std::abs(x) + 3 * d / 8 + 1e-15);
  }
}

TEST_CASE("corner data for n = 2, epsilon = 0.2") {
  const WarpingProfile& p = profile_2_02();
  CHECK(p.corner(1).t_m == 1.0);
  CHECK(p.corner(1).eta_m == 1.0);
  // long double oracle
  const long double t4 = std::pow(4.0L, 1.0L / 2.2L), e4 = std::pow(4.0L, -1.7L);
  CHECK(p.corner(4).t_m == doctest::Approx(static_cast<double>(t4)).epsilon(1e-14));
  CHECK(p.corner(4).eta_m == doctest::Approx(static_cast<double>(e4)).epsilon(1e-14));
  CHECK(p.corner(4).t_m == doctest::Approx(1.8778).epsilon(1e-4));
  CHECK(p.corner(4).eta_m == doctest::Approx(0.0947).epsilon(1e-3));
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(build_profile(WarpingParams{1, 0.1, 100}), std::invalid_argument);
  CHECK_THROWS_AS(build_profile(WarpingParams{2, 0.0, 100}), std::invalid_argument);
  CHECK_THROWS_AS(build_profile(WarpingParams{2, 1.5, 100}), std::invalid_argument);
  // a single tracked corner leaves one merged extent covering everything tracked
  CHECK_THROWS_AS(build_profile(WarpingParams{2, 0.1, 1}), ConstructionError);
  CHECK(WarpingParams{3, 0.1, 10}.two_plus() == doctest::Approx(2.15).epsilon(1e-15));
}

TEST_CASE("1 <= psi <= 2 on a fine scan") {
  for (const WarpingProfile* p : {&profile_2_01(), &profile_3_01()}) {
    const double hi = p == &profile_3_01() ? 100.0 : 1e3;
    const long N = 1000000;
    double lo_psi = 3.0, hi_psi = 0.0;
    for (long k = 0; k <= N; ++k) {
      const double psi = p->psi(1.0 + (hi - 1.0) * k / N);
      lo_psi = std::min(lo_psi, psi);
      hi_psi = std::max(hi_psi, psi);
    }
    CHECK(lo_psi >= 1.0);
    CHECK(hi_psi <= 2.0);
  }
}

TEST_CASE("psi equals the triangle wave on B") {
  const WarpingProfile& p = profile_3_01();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1.0, 60.0);
  int checked = 0;
  for (int k = 0; k < 20000; ++k) {
    const double t = u(rng);
    if (!p.in_B(t)) continue;
    ++checked;
    CHECK(p.psi(t) == doctest::Approx(triangle_psi(t, p.params().two_plus())).epsilon(1e-9));
  }
  CHECK(checked > 10000);
}

TEST_CASE("eval on a B stretch, symmetry and j'(0)") {
  const WarpingProfile& p = profile_2_01();
  const double a = p.params().two_plus(), b = p.params().decay_exponent();
  // middle of the even stretch between corners 10 and 11
  const double t = std::pow(10.5, 1.0 / a);
  REQUIRE(p.in_B(t));
  const double s = std::pow(t, a);
  CHECK(eval(p, t, 0) == doctest::Approx((s - 10.0 + 1.0) * std::pow(t, -b)).epsilon(1e-13));
  CHECK(eval(p, 0.0, 1) == 0.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-200.0, 200.0);
  for (int k = 0; k < 10000; ++k) {
    const double x = u(rng);
    const Jet l = p.jet(x), r = p.jet(-x);
    CHECK(l.value == r.value);
    CHECK(std::abs(l.d1 + r.d1) <= 1e-12 * std::max(1.0, std::abs(l.d1)));
    CHECK(l.d2 == r.d2);
    CHECK(l.value > 0.0);
  }
}

TEST_CASE("C2 across the bridge and the rounding edges") {
  for (const WarpingProfile* p : {&profile_2_01(), &profile_3_01(), &profile_2_02()}) {
    const Jet in = p->jet(std::nextafter(1.0, 0.0)), out = p->jet(1.0);
    CHECK(in.value == doctest::Approx(out.value).epsilon(1e-12));
    CHECK(in.d1 == doctest::Approx(out.d1).epsilon(1e-10));
    CHECK(in.d2 == doctest::Approx(out.d2).epsilon(1e-8));
    for (long m = 2; m <= 300; ++m) {
      const SingularPatch c = p->corner(m);
      for (double edge : {c.rounding.lo, c.rounding.hi}) {
        if (edge <= 1.0) continue;
        const double tau = 1e-10 * edge;
        const Jet l = p->jet(edge - tau), r = p->jet(edge + tau);
        // j''' inside a rounding is O(j' / width^2) so d2 moves by that much over tau
        const double width = c.rounding.length();
        const double scale = std::abs(l.d1) / width;
        // jumps would show up after removing the trapezoid step over 2 tau
        CHECK(std::abs(r.value - l.value - (l.d1 + r.d1) * tau) <= 1e-12 * l.value);
        CHECK(std::abs(r.d1 - l.d1 - (l.d2 + r.d2) * tau) <= 1e-6 * std::max(1.0, std::abs(l.d1)));
        CHECK(std::abs(l.d2 - r.d2) <= 1e-3 * scale);
      }
    }
  }
}

TEST_CASE("finite differences agree with exact derivatives on B at h = 1e-4") {
  const WarpingProfile& p = profile_2_01();
  const double h = 1e-4;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(1.01, 30.0);
  int checked = 0;
  while (checked < 2000) {
    const double t = u(rng);
    bool clear = true;
    for (int k = -2; k <= 2; ++k) clear = clear && p.in_B(t + k * h) && !p.in_rounding(t + k * h);
    // roundings can be narrower than h, so also ask for no corner in the stencil
    const double a = p.params().two_plus();
    clear = clear && std::floor(std::pow(t - 2 * h, a)) == std::floor(std::pow(t + 2 * h, a));
    if (!clear) continue;
    ++checked;
    const Jet j = p.jet(t);
    const double d1 = (eval(p, t + h, 0) - eval(p, t - h, 0)) / (2 * h);
    const double d2 = (eval(p, t + h, 1) - eval(p, t - h, 1)) / (2 * h);
    CHECK(std::abs(d1 - j.d1) <= 1e-6 * std::abs(j.d1) + 1e-12);
    CHECK(std::abs(d2 - j.d2) <= 1e-6 * std::abs(j.d2) + 1e-6);
  }
}

TEST_CASE("volume envelope j^(n-1) <= 2^(n-1) t^(-1-eps(n-1))") {
  for (const WarpingProfile* p : {&profile_2_01(), &profile_3_01()}) {
    const int n = p->dimension();
    const double eps = p->params().epsilon;
    for (double t = 1.0; t < 1e4; t *= 1.0007) {
      const double lhs = std::pow(eval(*p, t, 0), n - 1);
      const double rhs = std::pow(2.0, n - 1) * std::pow(t, -1.0 - eps * (n - 1));
      CHECK(lhs <= rhs * (1.0 + 1e-13));
    }
  }
}

TEST_CASE("corner ordering and merged extents") {
  const WarpingProfile& p = profile_2_01();
  const auto patches = p.patches();
  REQUIRE(patches.size() == 100000);
  for (std::size_t k = 1; k < patches.size(); ++k) {
    CHECK(patches[k].t_m > patches[k - 1].t_m);
    CHECK(patches[k].eta_m < patches[k - 1].eta_m);
  }
  const auto ext = p.extents();
  double total = 0.0;
  for (std::size_t k = 0; k < ext.size(); ++k) {
    total += ext[k].length();
    if (k > 0) CHECK(ext[k].lo > ext[k - 1].hi);
  }
  double bound = 0.0;
  for (const SingularPatch& s : patches) bound += 2.0 * s.eta_m;
  CHECK(total <= bound);
  // each extent contains its patch
  for (const SingularPatch& s : patches) {
    CHECK(s.merged_extent.lo <= std::max(1.0, s.t_m - s.eta_m));
    CHECK(s.merged_extent.hi >= s.t_m + s.eta_m);
    CHECK(s.rounding.lo >= s.merged_extent.lo * (1 - 1e-14));
    CHECK(s.rounding.hi <= s.merged_extent.hi * (1 + 1e-14));
  }
}

TEST_CASE("bridge stays positive") {
  for (const WarpingProfile* p : {&profile_2_01(), &profile_3_01(), &profile_2_02()}) {
    double lo = 1e9;
    for (double t = -1.0; t <= 1.0; t += 1e-4) lo = std::min(lo, eval(*p, t, 0));
    CHECK(lo >= 1e-3);
  }
}

TEST_CASE("derivative lower bound on B") {
  const WarpingProfile& p3 = profile_3_01();
  const DerivativeBoundReport r3 = verify_derivative_bound(p3, p3.params().t0(), 50.0, 100000);
  CHECK(r3.pass);
  CHECK(r3.min_ratio >= 1.0);

  const WarpingProfile& p2 = profile_2_02();
  const DerivativeBoundReport r2 = verify_derivative_bound(p2, p2.params().t0(), 20.0, 100000);
  CHECK(r2.pass);
  // at n = 2 the exponent vanishes and |j'| >= 1 itself
  CHECK(p2.params().derivative_exponent() == 0.0);
  for (double t = p2.params().t0(); t < 20.0; t += 1e-3)
    if (p2.in_B(t)) CHECK(std::abs(eval(p2, t, 1)) >= 1.0);

  // an interval strictly inside one merged extent
  long m = 2;
  while (p2.corner(m).merged_extent.lo <= p2.params().t0()) ++m;
  const SingularPatch c = p2.corner(m);
  CHECK_THROWS_AS(verify_derivative_bound(p2, c.t_m - 0.5 * c.eta_m, c.t_m + 0.5 * c.eta_m, 1000),
                  EmptySampleError);
  CHECK_THROWS_AS(verify_derivative_bound(p2, 0.5 * p2.params().t0(), 20.0, 1000), std::domain_error);
}

TEST_CASE("profile CSV") {
  const WarpingProfile& p = profile_2_01();
  const std::vector<double> grid{-1.5, 0.0, 1.25};
  std::ostringstream out;
  write_profile_csv(out, p, grid);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,j,jp,jpp,psi,in_B");
  std::getline(in, line);
  double t = 0, j = 0;
  CHECK(std::sscanf(line.c_str(), "%lf,%lf", &t, &j) == 2);
  CHECK(t == -1.5);
  CHECK(j == eval(p, -1.5, 0));
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
