#include "warpgap/variational.hpp"

#include "warpgap/error.hpp"
#include "warpgap/numerics.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstdio>
#include <future>
#include <ostream>

namespace warpgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Up to four (node, coefficient) terms of a difference stencil.
struct Stencil {
  std::array<Eigen::Index, 4> node{};
  std::array<double, 4> coef{};
  int size = 0;

  void add(Eigen::Index k, double c) {
    for (int q = 0; q < size; ++q)
      if (node[q] == k) {
        coef[q] += c;
        return;
      }
    node[size] = k;
    coef[size] = c;
    ++size;
  }
};

// D2, D1 stencils at node i of a grid 0..N, matching RadialFunction::d2/d1.
void node_stencils(Eigen::Index i, Eigen::Index N, double h, bool clamped, Stencil& d2, Stencil& d1) {
  const double h2 = h * h;
  auto reflect = [&](Eigen::Index k) { return k < 0 ? -k : (k > N ? 2 * N - k : k); };
  if ((i > 0 && i < N) || clamped) {
    d2.add(reflect(i - 1), 1.0 / h2);
    d2.add(i, -2.0 / h2);
    d2.add(reflect(i + 1), 1.0 / h2);
    d1.add(reflect(i + 1), 0.5 / h);
    d1.add(reflect(i - 1), -0.5 / h);
    return;
  }
  const double s = i == 0 ? 1.0 : -1.0;
  auto at = [&](int k) { return i == 0 ? Eigen::Index(k) : N - k; };
  d2.add(at(0), 2.0 / h2);
  d2.add(at(1), -5.0 / h2);
  d2.add(at(2), 4.0 / h2);
  d2.add(at(3), -1.0 / h2);
  d1.add(at(0), -1.5 * s / h);
  d1.add(at(1), 2.0 * s / h);
  d1.add(at(2), -0.5 * s / h);
}

struct Grid {
  long first = 0;
  Eigen::Index N = 0;
  double h = 0.0;
  double t(Eigen::Index i) const { return static_cast<double>(first + i) * h; }
};

Grid make_grid(const MinimizationProblem& pr) {
  if (!(pr.h > 0.0)) throw GridError("minimize_quadratic: h must be positive");
  const double lo = pr.lo.value_or(-pr.T), hi = pr.hi.value_or(pr.T);
  if (!(hi > lo)) throw GridError("minimize_quadratic: empty interval");
  Grid g;
  g.h = pr.h;
  g.first = grid_index(lo, pr.h);
  g.N = grid_index(hi, pr.h) - g.first;
  return g;
}

double residual_ratio(const BandedSystem& s, const Eigen::VectorXd& x) {
  const double r = (s.multiply(x) - s.rhs()).norm();
  return r / (s.norm_inf() * x.norm() + s.rhs().norm());
}

MinimizationResult minimize_first_order(const MinimizationProblem& pr) {
  const Grid g = make_grid(pr);
  if (g.N < 2) throw GridError("minimize_quadratic: need at least three nodes");
  std::function<double(double)> w = pr.weight;
  if (!w) {
    if (pr.profile == nullptr) throw std::invalid_argument("minimize_quadratic: weight or profile required");
    const double on = omega_n(pr.profile->dimension());
    const WarpingProfile* profile = pr.profile;
    w = [on, profile](double t) { return on * hardy_weight(*profile, t); };
  }
  Eigen::VectorXd mid(g.N);
  for (Eigen::Index i = 0; i < g.N; ++i) {
    mid(i) = w(g.t(i) + 0.5 * g.h) / g.h;
    if (!(mid(i) > 0.0) || !std::isfinite(mid(i))) throw std::invalid_argument("minimize_quadratic: weight must be positive");
  }
  const Eigen::Index n_unknown = g.N - 1;
  BandedSystem sys(n_unknown, 1);
  for (Eigen::Index u = 0; u < n_unknown; ++u) {
    sys.add(u, u, mid(u) + mid(u + 1));
    if (u + 1 < n_unknown) sys.add(u, u + 1, -mid(u + 1));
  }
  sys.rhs()(0) += mid(0) * pr.left_value;
  sys.rhs()(n_unknown - 1) += mid(g.N - 1) * pr.right_value;
  const Eigen::VectorXd x = solve_banded(sys);

  MinimizationResult out;
  out.phi.h = g.h;
  out.phi.first_index = g.first;
  out.phi.values.resize(g.N + 1);
  out.phi.values(0) = pr.left_value;
  out.phi.values.segment(1, n_unknown) = x;
  out.phi.values(g.N) = pr.right_value;
  PairwiseSum e;
  for (Eigen::Index i = 0; i < g.N; ++i) {
    const double d = out.phi.values(i + 1) - out.phi.values(i);
    e.add(mid(i) * d * d);
  }
  out.value = e.total();
  out.derivative_part = out.value;
  out.residual = residual_ratio(sys, x);
  out.unknowns = n_unknown;
  return out;
}

// Per-node 3x3 form in (D2 phi, D1 phi, phi), scaled by omega_n j^(n-1).
Eigen::Matrix3d node_form(Functional f, const Jet& j, int n) {
  const double beta = (n - 1) * j.d1 / j.value;
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  if (f == Functional::SobolevW) {
    m(0, 0) = 1.0;
    m(1, 1) = 1.0 + beta * j.d1 / j.value;
    m(2, 2) = 1.0;
  } else {
    m << 1.0, beta, 0.0, beta, beta * beta + 1.0, 0.0, 0.0, 0.0, 1.0;
  }
  return std::pow(j.value, n - 1) * m;
}

MinimizationResult minimize_second_order(const MinimizationProblem& pr) {
  if (pr.profile == nullptr) throw std::invalid_argument("minimize_quadratic: profile required");
  const WarpingProfile& profile = *pr.profile;
  const int n = profile.dimension();
  const double on = omega_n(n);
  const Grid g = make_grid(pr);
  const Eigen::Index N = g.N;
  if (N < 5) throw GridError("minimize_quadratic: need at least six nodes");

  // Node roles: tied ends when clamped, plain Dirichlet ends otherwise.
  const Eigen::Index first_unknown = pr.clamped ? 2 : 1;
  const Eigen::Index last_unknown = pr.clamped ? N - 2 : N - 1;
  const Eigen::Index n_unknown = last_unknown - first_unknown + 1;
  auto fixed_value = [&](Eigen::Index k) { return k < first_unknown ? pr.left_value : pr.right_value; };
  auto unknown = [&](Eigen::Index k) { return k >= first_unknown && k <= last_unknown; };

  BandedSystem sys(n_unknown, 2);
  std::vector<Eigen::Matrix3d> forms(static_cast<std::size_t>(N + 1));
  std::vector<Stencil> d2s(static_cast<std::size_t>(N + 1)), d1s(static_cast<std::size_t>(N + 1));
  for (Eigen::Index i = 0; i <= N; ++i) {
    const double c = (i == 0 || i == N) ? 0.5 * g.h : g.h;
    const std::size_t k = static_cast<std::size_t>(i);
    forms[k] = on * c * node_form(pr.functional, profile.jet(g.t(i)), n);
    node_stencils(i, N, g.h, pr.clamped, d2s[k], d1s[k]);

    // Local map: rows (D2, D1, phi) over the union of stencil nodes.
    Stencil nodes;
    for (int q = 0; q < d2s[k].size; ++q) nodes.add(d2s[k].node[q], 0.0);
    for (int q = 0; q < d1s[k].size; ++q) nodes.add(d1s[k].node[q], 0.0);
    nodes.add(i, 0.0);
    Eigen::Matrix<double, 3, 4> S = Eigen::Matrix<double, 3, 4>::Zero();
    auto column = [&](Eigen::Index node) {
      for (int q = 0; q < nodes.size; ++q)
        if (nodes.node[q] == node) return q;
      return -1;
    };
    for (int q = 0; q < d2s[k].size; ++q) S(0, column(d2s[k].node[q])) += d2s[k].coef[q];
    for (int q = 0; q < d1s[k].size; ++q) S(1, column(d1s[k].node[q])) += d1s[k].coef[q];
    S(2, column(i)) += 1.0;
    const Eigen::Matrix4d Q = S.transpose() * forms[k] * S;
    for (int a = 0; a < nodes.size; ++a) {
      const Eigen::Index ka = nodes.node[a];
      if (!unknown(ka)) continue;
      const Eigen::Index ua = ka - first_unknown;
      for (int b = 0; b < nodes.size; ++b) {
        const Eigen::Index kb = nodes.node[b];
        if (unknown(kb)) {
          if (kb >= ka) sys.add(ua, kb - first_unknown, Q(a, b));
        } else {
          sys.rhs()(ua) -= Q(a, b) * fixed_value(kb);
        }
      }
    }
  }
  const Eigen::VectorXd x = solve_banded(sys);

  MinimizationResult out;
  out.phi.h = g.h;
  out.phi.first_index = g.first;
  out.phi.clamped = pr.clamped;
  out.phi.values.resize(N + 1);
  for (Eigen::Index k = 0; k <= N; ++k) out.phi.values(k) = unknown(k) ? x(k - first_unknown) : fixed_value(k);

  PairwiseSum value, l2;
  for (Eigen::Index i = 0; i <= N; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    double v2 = 0.0, v1 = 0.0;
    for (int q = 0; q < d2s[k].size; ++q) v2 += d2s[k].coef[q] * out.phi.values(d2s[k].node[q]);
    for (int q = 0; q < d1s[k].size; ++q) v1 += d1s[k].coef[q] * out.phi.values(d1s[k].node[q]);
    const Eigen::Vector3d v(v2, v1, out.phi.values(i));
    value.add(v.dot(forms[k] * v));
    l2.add(forms[k](2, 2) * v(2) * v(2));
  }
  out.l2_part = l2.total();
  out.derivative_part = value.total() - out.l2_part;
  out.value = value.total();
  if (pr.include_tail && profile.oscillating()) {
    const double lo = g.t(0), hi = g.t(N);
    out.tail = pr.right_value * pr.right_value * constant_tail_mass(profile, hi, g.h, pr.tail_far) +
               pr.left_value * pr.left_value * constant_tail_mass(profile, -lo, g.h, pr.tail_far);
    out.value += out.tail;
  }
  out.residual = residual_ratio(sys, x);
  out.unknowns = n_unknown;
  return out;
}

}  // namespace

MinimizationResult minimize_quadratic(const MinimizationProblem& problem) {
  MinimizationResult r = problem.functional == Functional::FirstOrder ? minimize_first_order(problem)
                                                                      : minimize_second_order(problem);
  if (!(r.residual <= 1e-8)) throw std::runtime_error("minimize_quadratic: optimality residual above 1e-8");
  return r;
}

QuadratureResult analytic_first_order_min(const std::function<double(double)>& weight, double a, double b,
                                          double tol) {
  const QuadratureResult q = integrate([&](double t) { return 1.0 / weight(t); }, a, b, tol);
  // 1/x is decreasing: the interval [I - e, I + e] maps to [1/(I+e), 1/(I-e)].
  const double value = 1.0 / q.value;
  const double err = q.error_bound < q.value ? 1.0 / (q.value - q.error_bound) - value : kInf;
  return {value, err, q.subdivisions, q.converged};
}

double analytic_first_order_min(const WarpingProfile& profile, const FrakJOptions& options) {
  const QuadratureResult J = frak_J(profile, kInf, options);
  if (!std::isfinite(J.value)) return 0.0;
  return omega_n(profile.dimension()) / J.value;
}

double constant_tail_mass(const WarpingProfile& profile, double T, double h, double far) {
  const WarpingParams& p = profile.params();
  const int n = profile.dimension();
  if (!profile.oscillating()) throw std::invalid_argument("constant_tail_mass: oscillating profile required");
  const double alpha = p.epsilon * (n - 1);
  PairwiseSum s;
  double end = T;
  if (far > T) {
    const long k0 = grid_index(T, h), k1 = grid_index(far, h);
    for (long k = k0; k <= k1; ++k) {
      const double w = (k == k0 || k == k1) ? 0.5 * h : h;
      s.add(w * std::pow(profile.jet(static_cast<double>(k) * h).value, n - 1));
    }
    end = static_cast<double>(k1) * h;
  }
  s.add(std::pow(end, -alpha) / alpha);
  return omega_n(n) * s.total();
}

std::string GapCertificate::to_json() const {
  nlohmann::ordered_json doc;
  doc["n"] = n;
  doc["epsilon"] = epsilon;
  doc["J"] = J.value;
  doc["J_error"] = J.error_bound;
  doc["lower_bound"] = lower_bound;
  doc["volume"] = volume.value;
  doc["volume_error"] = volume.error_bound;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const CertificateRow& r : rows) {
    nlohmann::ordered_json row;
    row["T"] = r.T;
    row["h"] = r.h;
    row["min_QW"] = r.min_QW;
    row["min_QH"] = r.min_QH;
    row["ratio"] = r.ratio;
    row["QW_derivative"] = r.QW_derivative;
    row["QH_derivative"] = r.QH_derivative;
    row["min_QW_half_h"] = r.min_QW_half;
    row["min_QH_half_h"] = r.min_QH_half;
    row["truncated_bound"] = r.truncated_bound;
    row["tail"] = r.tail;
    doc["rows"].push_back(row);
  }
  doc["flat_control"] = flat;
  doc["gap_certified"] = gap_certified;
  doc["bound_holds"] = bound_holds;
  doc["derivative_bound_holds"] = derivative_bound_holds;
  doc["monotone"] = monotone;
  doc["ratio_below_one"] = ratio_below_one;
  doc["ratio_decreasing"] = ratio_decreasing;
  doc["stable"] = stable;
  doc["pass"] = pass;
  return doc.dump(2);
}

namespace {

struct RowJob {
  double T, h;
  bool refine;
};

CertificateRow run_row(const WarpingProfile& profile, const RowJob& job, const CertifyOptions& options) {
  CertificateRow row;
  row.T = job.T;
  row.h = job.h;
  auto solve = [&](Functional f, double h) {
    MinimizationProblem pr;
    pr.profile = &profile;
    pr.functional = f;
    pr.T = job.T;
    pr.h = h;
    pr.include_tail = false;
    return minimize_quadratic(pr);
  };
  auto tail = [&](double h) {
    return profile.oscillating() ? constant_tail_mass(profile, job.T, h, options.tail_far) : 0.0;
  };
  const MinimizationResult qw = solve(Functional::SobolevW, job.h);
  const MinimizationResult qh = solve(Functional::LaplacianH, job.h);
  row.tail = tail(job.h);
  row.min_QW = qw.value + row.tail;
  row.min_QH = qh.value + row.tail;
  row.QW_derivative = qw.derivative_part;
  row.QH_derivative = qh.derivative_part;
  row.ratio = row.min_QH / row.min_QW;
  if (job.refine) {
    const double tail_half = tail(0.5 * job.h);
    row.min_QW_half = solve(Functional::SobolevW, 0.5 * job.h).value + tail_half;
    row.min_QH_half = solve(Functional::LaplacianH, 0.5 * job.h).value + tail_half;
  }
  const QuadratureResult J = frak_J(profile, job.T, options.frak_j);
  row.truncated_bound = omega_n(profile.dimension()) / J.upper();
  return row;
}

}  // namespace

GapCertificate certify_gap(const WarpingProfile& profile, std::vector<double> T_list, double h,
                           const CertifyOptions& options) {
  if (T_list.empty()) throw std::invalid_argument("certify_gap: empty T list");
  if (!std::is_sorted(T_list.begin(), T_list.end()) ||
      std::adjacent_find(T_list.begin(), T_list.end()) != T_list.end())
    throw std::invalid_argument("certify_gap: T list must be strictly increasing");
  for (double T : T_list) {
    grid_index(T, h);
    if (options.refine) grid_index(T, 0.5 * h);
  }
  if (profile.oscillating()) {
    const WarpingParams& p = profile.params();
    const double cell = 1.0 / (p.two_plus() * std::pow(T_list.back(), p.two_plus() - 1.0));
    if (h > 0.25 * cell)
      throw GridError("certify_gap: h = " + std::to_string(h) + " exceeds a quarter oscillation cell " +
                      std::to_string(0.25 * cell) + " at T = " + std::to_string(T_list.back()));
  }

  GapCertificate cert;
  cert.n = profile.dimension();
  cert.epsilon = profile.oscillating() ? profile.params().epsilon : 0.0;
  cert.flat = profile.kind() == WarpingProfile::Kind::Constant;

  auto J_future = std::async(std::launch::async, [&] { return frak_J(profile, kInf, options.frak_j); });
  std::vector<std::future<CertificateRow>> jobs;
  for (double T : T_list)
    jobs.push_back(std::async(std::launch::async, run_row, std::cref(profile), RowJob{T, h, options.refine},
                              std::cref(options)));
  for (auto& f : jobs) cert.rows.push_back(f.get());
  cert.J = J_future.get();
  cert.volume = certified_volume(profile, 100.0);
  cert.lower_bound = std::isfinite(cert.J.upper()) ? omega_n(cert.n) / cert.J.upper() : 0.0;
  cert.gap_certified = cert.lower_bound > 0.0 && std::isfinite(cert.volume.upper()) && cert.J.converged;

  const double L = cert.lower_bound * (1.0 - options.bound_slack);
  cert.bound_holds = cert.derivative_bound_holds = cert.monotone = cert.stable = true;
  cert.ratio_decreasing = true;
  for (std::size_t k = 0; k < cert.rows.size(); ++k) {
    const CertificateRow& r = cert.rows[k];
    cert.bound_holds = cert.bound_holds && r.min_QW >= L;
    cert.derivative_bound_holds = cert.derivative_bound_holds && r.QW_derivative >= L;
    if (options.refine) {
      cert.stable = cert.stable && std::abs(r.min_QW_half - r.min_QW) <= options.stability * r.min_QW &&
                    std::abs(r.min_QH_half - r.min_QH) <= options.stability * r.min_QH;
    }
    if (k > 0) {
      const CertificateRow& prev = cert.rows[k - 1];
      const double slack = 1e-9;
      cert.monotone = cert.monotone && r.min_QW <= prev.min_QW * (1.0 + slack) &&
                      r.min_QH <= prev.min_QH * (1.0 + slack);
      cert.ratio_decreasing = cert.ratio_decreasing && r.ratio < prev.ratio;
    }
  }
  cert.ratio_below_one = cert.rows.back().ratio < 1.0;
  cert.pass = cert.gap_certified && cert.bound_holds && cert.monotone && cert.ratio_below_one && cert.stable;
  return cert;
}

void write_minimizer_csv(std::ostream& out, const RadialFunction& phi) {
  out << "t,phi\n";
  char line[96];
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", phi.t(i), phi.values(i));
    out << line;
  }
}

}  // namespace warpgap
