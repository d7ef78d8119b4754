#include "warpgap/geometry.hpp"

#include "warpgap/error.hpp"
#include "warpgap/numerics.hpp"

#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace warpgap {

long grid_index(double t, double h) {
  if (!(h > 0.0)) throw GridError("grid step must be positive");
  const double k = t / h;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(k)))
    throw GridError("point " + std::to_string(t) + " is not a multiple of h = " + std::to_string(h));
  return static_cast<long>(r);
}

void RadialFunction::validate() const {
  if (values.size() < 3) throw GridError("RadialFunction: need at least three nodes");
  if (!values.allFinite()) throw std::invalid_argument("RadialFunction: non-finite value");
}

double RadialFunction::d1(Eigen::Index i) const {
  const Eigen::Index last = size() - 1;
  const Eigen::VectorXd& v = values;
  if (i > 0 && i < last) return (v(i + 1) - v(i - 1)) / (2.0 * h);
  if (clamped) return 0.0;
  if (i == 0) return (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
  return (3.0 * v(last) - 4.0 * v(last - 1) + v(last - 2)) / (2.0 * h);
}

double RadialFunction::d2(Eigen::Index i) const {
  const Eigen::Index last = size() - 1;
  const Eigen::VectorXd& v = values;
  if (i > 0 && i < last) return (v(i + 1) - 2.0 * v(i) + v(i - 1)) / (h * h);
  if (clamped) return i == 0 ? 2.0 * (v(1) - v(0)) / (h * h) : 2.0 * (v(last - 1) - v(last)) / (h * h);
  if (size() < 4) throw GridError("RadialFunction: one-sided second derivative needs four nodes");
  if (i == 0) return (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) / (h * h);
  return (2.0 * v(last) - 5.0 * v(last - 1) + 4.0 * v(last - 2) - v(last - 3)) / (h * h);
}

double SurfaceFunction::theta(Eigen::Index j) const {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(values.cols());
}

double SurfaceFunction::h_theta() const { return 2.0 * std::numbers::pi / static_cast<double>(values.cols()); }

void SurfaceFunction::validate() const {
  if (values.rows() < 4) throw GridError("SurfaceFunction: need at least four t nodes");
  if (values.cols() < 4) throw GridError("SurfaceFunction: need at least four theta nodes");
  if (mode == ThetaMode::Spectral && values.cols() % 2 != 0)
    throw GridError("SurfaceFunction: spectral mode needs an even theta count");
  if (!values.allFinite()) throw std::invalid_argument("SurfaceFunction: non-finite value");
}

SurfaceFunction random_band_limited_surface(double T, double h, Eigen::Index n_theta, int t_modes, int theta_modes,
                                            std::uint64_t seed, ThetaMode mode) {
  if (2 * theta_modes >= n_theta) throw GridError("random_band_limited_surface: theta modes above Nyquist");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const int rows = t_modes + 1, cols = 2 * theta_modes + 1;
  Eigen::MatrixXd amp(rows, cols), shift(rows, cols);
  for (int k = 0; k < rows; ++k)
    for (int l = 0; l < cols; ++l) {
      amp(k, l) = normal(rng) / (1.0 + k * k + l * l);
      shift(k, l) = phase(rng);
    }
  return SurfaceFunction::sample(
      -T, T, h, n_theta,
      [&](double t, double q) {
        double v = 0.0;
        for (int k = 0; k < rows; ++k) {
          const double wt = 0.5 * std::numbers::pi * k / T;
          for (int l = 0; l <= theta_modes; ++l) {
            v += amp(k, 2 * l) * std::cos(wt * t + shift(k, 2 * l)) * std::cos(l * q);
            if (l > 0) v += amp(k, 2 * l - 1) * std::cos(wt * t + shift(k, 2 * l - 1)) * std::sin(l * q);
          }
        }
        return v;
      },
      mode);
}

Eigen::MatrixXd spectral_d1(Eigen::Index n) {
  if (n < 4 || n % 2 != 0) throw GridError("spectral_d1: need an even size >= 4");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double sign = (i - j) % 2 == 0 ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(0.5 * static_cast<double>(i - j) * step);
    }
  return d;
}

Eigen::MatrixXd spectral_d2(Eigen::Index n) {
  if (n < 4 || n % 2 != 0) throw GridError("spectral_d2: need an even size >= 4");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        d(i, j) = -std::numbers::pi * std::numbers::pi / (3.0 * step * step) - 1.0 / 6.0;
        continue;
      }
      const double sign = (i - j) % 2 == 0 ? 1.0 : -1.0;
      const double s = std::sin(0.5 * static_cast<double>(i - j) * step);
      d(i, j) = -0.5 * sign / (s * s);
    }
  return d;
}

namespace {

Eigen::MatrixXd periodic_d1(Eigen::Index n) {
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, (i + 1) % n) += 0.5 / step;
    d(i, (i + n - 1) % n) -= 0.5 / step;
  }
  return d;
}

Eigen::MatrixXd periodic_d2(Eigen::Index n) {
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) -= 2.0 / (step * step);
    d(i, (i + 1) % n) += 1.0 / (step * step);
    d(i, (i + n - 1) % n) += 1.0 / (step * step);
  }
  return d;
}

// Column-wise t-derivatives; interior central, ends one-sided second order.
Eigen::MatrixXd t_derivative(const Eigen::MatrixXd& f, double h, int order) {
  const Eigen::Index last = f.rows() - 1;
  Eigen::MatrixXd out(f.rows(), f.cols());
  if (order == 1) {
    out.middleRows(1, last - 1) = (f.bottomRows(last - 1) - f.topRows(last - 1)) / (2.0 * h);
    out.row(0) = (-3.0 * f.row(0) + 4.0 * f.row(1) - f.row(2)) / (2.0 * h);
    out.row(last) = (3.0 * f.row(last) - 4.0 * f.row(last - 1) + f.row(last - 2)) / (2.0 * h);
  } else {
    out.middleRows(1, last - 1) =
        (f.bottomRows(last - 1) - 2.0 * f.middleRows(1, last - 1) + f.topRows(last - 1)) / (h * h);
    out.row(0) = (2.0 * f.row(0) - 5.0 * f.row(1) + 4.0 * f.row(2) - f.row(3)) / (h * h);
    out.row(last) =
        (2.0 * f.row(last) - 5.0 * f.row(last - 1) + 4.0 * f.row(last - 2) - f.row(last - 3)) / (h * h);
  }
  return out;
}

}  // namespace

SurfaceDerivatives surface_derivatives(const SurfaceFunction& F) {
  F.validate();
  const Eigen::Index nq = F.values.cols();
  const bool spectral = F.mode == ThetaMode::Spectral;
  const Eigen::MatrixXd d1 = spectral ? spectral_d1(nq) : periodic_d1(nq);
  const Eigen::MatrixXd d2 = spectral ? spectral_d2(nq) : periodic_d2(nq);
  SurfaceDerivatives d;
  d.t.resize(F.values.rows());
  for (Eigen::Index i = 0; i < d.t.size(); ++i) d.t(i) = F.t(i);
  d.f = F.values;
  d.f_t = t_derivative(F.values, F.h, 1);
  d.f_tt = t_derivative(F.values, F.h, 2);
  d.f_q = F.values * d1.transpose();
  d.f_qq = F.values * d2.transpose();
  d.f_tq = d.f_t * d1.transpose();
  return d;
}

double hardy_weight(const Jet& j, int n) {
  return std::pow(j.value, n - 1) + (n - 1) * std::pow(j.value, n - 3) * j.d1 * j.d1;
}

double hardy_weight(const WarpingProfile& profile, double t) {
  return hardy_weight(profile.jet(t), profile.dimension());
}

double volume_density(const WarpingProfile& profile, double t) {
  return std::pow(profile.jet(t).value, profile.dimension() - 1);
}

RadialHessian radial_hessian(const RadialFunction& phi, const WarpingProfile& profile, Eigen::Index i) {
  const Jet j = profile.jet(phi.t(i));
  return {phi.d2(i), j.d1 / j.value * phi.d1(i)};
}

double radial_hessian_sq(const RadialFunction& phi, const WarpingProfile& profile, Eigen::Index i) {
  const RadialHessian hs = radial_hessian(phi, profile, i);
  return hs.tt * hs.tt + (profile.dimension() - 1) * hs.tangential * hs.tangential;
}

double radial_laplacian(const RadialFunction& phi, const WarpingProfile& profile, Eigen::Index i) {
  const RadialHessian hs = radial_hessian(phi, profile, i);
  return hs.tt + (profile.dimension() - 1) * hs.tangential;
}

namespace {

void require_surface(const WarpingProfile& profile) {
  if (profile.dimension() != 2) throw std::invalid_argument("surface operators need n = 2");
}

}  // namespace

double hessian_sq_full(const SurfaceDerivatives& d, const WarpingProfile& profile, Eigen::Index i,
                       Eigen::Index k) {
  require_surface(profile);
  const Jet j = profile.jet(d.t(i));
  const double mixed = (d.f_tq(i, k) - j.d1 / j.value * d.f_q(i, k)) / j.value;
  const double tangential = (d.f_qq(i, k) + j.value * j.d1 * d.f_t(i, k)) / (j.value * j.value);
  return d.f_tt(i, k) * d.f_tt(i, k) + 2.0 * mixed * mixed + tangential * tangential;
}

double hessian_sq_full(const SurfaceFunction& F, const WarpingProfile& profile, Eigen::Index i, Eigen::Index k) {
  return hessian_sq_full(surface_derivatives(F), profile, i, k);
}

double gradient_sq_full(const SurfaceDerivatives& d, const WarpingProfile& profile, Eigen::Index i,
                        Eigen::Index k) {
  require_surface(profile);
  const double j = profile.jet(d.t(i)).value;
  return d.f_t(i, k) * d.f_t(i, k) + d.f_q(i, k) * d.f_q(i, k) / (j * j);
}

double gradient_sq_full(const SurfaceFunction& F, const WarpingProfile& profile, Eigen::Index i, Eigen::Index k) {
  return gradient_sq_full(surface_derivatives(F), profile, i, k);
}

double laplacian_full(const SurfaceDerivatives& d, const WarpingProfile& profile, Eigen::Index i,
                      Eigen::Index k) {
  require_surface(profile);
  const Jet j = profile.jet(d.t(i));
  return d.f_tt(i, k) + j.d1 / j.value * d.f_t(i, k) + d.f_qq(i, k) / (j.value * j.value);
}

RadialFunction symmetrize(const SurfaceFunction& F) {
  F.validate();
  RadialFunction out;
  out.h = F.h;
  out.first_index = F.first_index;
  out.values.resize(F.values.rows());
  for (Eigen::Index i = 0; i < F.values.rows(); ++i)
    out.values(i) = periodic_integrate(F.values.row(i).transpose()) / (2.0 * std::numbers::pi);
  return out;
}

SurfaceFunction surface_laplacian(const SurfaceFunction& F, const WarpingProfile& profile) {
  const SurfaceDerivatives d = surface_derivatives(F);
  SurfaceFunction out = F;
  for (Eigen::Index i = 0; i < F.values.rows(); ++i)
    for (Eigen::Index k = 0; k < F.values.cols(); ++k) out.values(i, k) = laplacian_full(d, profile, i, k);
  return out;
}

double stokes_defect(const SurfaceDerivatives& d, Eigen::Index i) {
  const Eigen::VectorXd bracket =
      (d.f_tq.row(i).array() * d.f_q.row(i).array() + d.f_qq.row(i).array() * d.f_t.row(i).array()).transpose();
  return periodic_integrate(bracket);
}

double stokes_defect(const SurfaceFunction& F, Eigen::Index i) { return stokes_defect(surface_derivatives(F), i); }

CurvatureProfile curvature_profile(const WarpingProfile& profile, std::span<const double> grid) {
  const int n = profile.dimension();
  const Eigen::Index m = static_cast<Eigen::Index>(grid.size());
  CurvatureProfile c;
  c.n = n;
  c.t.resize(m);
  c.K_rad.resize(m);
  c.K_tan.resize(m);
  c.Ric_rr.resize(m);
  c.Ric_tan.resize(m);
  c.ricci_norm.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double t = grid[static_cast<std::size_t>(k)];
    const Jet j = profile.jet(t);
    const double radial = -j.d2 / j.value;
    const double tangent = (1.0 - j.d1 * j.d1) / (j.value * j.value);
    c.t(k) = t;
    c.K_rad(k) = radial;
    c.K_tan(k) = n >= 3 ? tangent : std::numeric_limits<double>::quiet_NaN();
    c.Ric_rr(k) = (n - 1) * radial;
    c.Ric_tan(k) = radial + (n - 2) * (n >= 3 ? tangent : 0.0);
    c.ricci_norm(k) = std::sqrt(c.Ric_rr(k) * c.Ric_rr(k) + (n - 1) * c.Ric_tan(k) * c.Ric_tan(k));
  }
  return c;
}

void write_curvature_csv(std::ostream& out, const CurvatureProfile& c) {
  out << "t,K_rad,K_tan,Ric_rr\n";
  char line[160];
  for (Eigen::Index k = 0; k < c.t.size(); ++k) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", c.t(k), c.K_rad(k), c.K_tan(k), c.Ric_rr(k));
    out << line;
  }
}

double lambda_growth(double r, int K) {
  if (K < 0) throw std::invalid_argument("lambda_growth: K must be >= 0");
  double product = r;
  double iterate = r;
  for (int k = 0; k < K; ++k) {
    if (iterate <= std::numbers::e) break;  // this and all later factors clamp to 1
    iterate = std::log(iterate);
    product *= iterate;
  }
  return product;
}

RicciViolation find_ricci_violation(const WarpingProfile& profile, std::span<const double> grid, int K) {
  std::vector<double> points(grid.begin(), grid.end());
  if (profile.oscillating() && !grid.empty()) {
    double hi = 0.0;
    for (double t : grid) hi = std::max(hi, std::abs(t));
    const double a = profile.params().two_plus();
    const long last = static_cast<long>(std::floor(std::pow(hi, a)));
    for (long m = 1; m <= last; ++m) points.push_back(profile.corner(m).t_m);
  }
  const CurvatureProfile c = curvature_profile(profile, points);
  const double offset = std::numbers::pi * profile.jet(0.0).value;
  RicciViolation v;
  for (Eigen::Index k = 0; k < c.t.size(); ++k) {
    if (std::abs(c.K_rad(k)) > v.max_abs_K_rad) {
      v.max_abs_K_rad = std::abs(c.K_rad(k));
      v.argmax_K_rad = c.t(k);
    }
    const double r = std::abs(c.t(k)) + offset;
    const double lam = lambda_growth(r, K);
    const double excess = c.ricci_norm(k) / (lam * lam);
    if (!v.found || excess > v.ricci_norm / v.lambda_sq) {
      v.t = c.t(k);
      v.ricci_norm = c.ricci_norm(k);
      v.r_upper = r;
      v.lambda_sq = lam * lam;
      v.found = true;
    }
  }
  v.found = v.found && v.ricci_norm > v.lambda_sq;
  return v;
}

}  // namespace warpgap
