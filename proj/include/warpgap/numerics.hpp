#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace warpgap {

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  long subdivisions = 0;
  bool converged = false;

  double lower() const { return value - error_bound; }
  double upper() const { return value + error_bound; }
};

// Certifies integrand <= constant * t^(-1-exponent) for t >= cut.
struct TailEnvelope {
  double constant = 1.0;
  double exponent = 1.0;
  double cut = 1.0;

  template <class Scalar>
  Scalar operator()(Scalar t) const {
    using std::pow;
    return Scalar(constant) * pow(t, Scalar(-1.0 - exponent));
  }
};

struct DominanceCheck {
  double max_ratio = 0.0;
  double worst_t = 0.0;
  int samples = 0;
  bool pass = false;
};

// Streaming cascade summation. The reduction tree depends only on the order
// and number of terms, so totals are bit-stable for a fixed term sequence.
class PairwiseSum {
 public:
  void add(double x) {
    std::size_t level = 0;
    double carry = x;
    while (level < occupied_.size() && occupied_[level]) {
      carry = levels_[level] + carry;
      occupied_[level] = false;
      ++level;
    }
    if (level == occupied_.size()) {
      levels_.push_back(0.0);
      occupied_.push_back(false);
    }
    levels_[level] = carry;
    occupied_[level] = true;
    ++count_;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t k = 0; k < levels_.size(); ++k)
      if (occupied_[k]) s = levels_[k] + s;
    return s;
  }

  std::size_t count() const { return count_; }

 private:
  std::vector<double> levels_;
  std::vector<bool> occupied_;
  std::size_t count_ = 0;
};

double pairwise_sum(std::span<const double> values);

namespace detail {

// Kronrod 15-point abscissae and weights with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

// The error is |K15 - G7|, i.e. the error of the lower-order rule, floored by
// the rounding level of the absolute integral.
template <class F>
Segment gauss_kronrod(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double absolute = std::abs(kronrod);
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kXgk[k];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[k] * (f1 + f2);
    absolute += kWgk[k] * (std::abs(f1) + std::abs(f2));
    if (k % 2 == 1) gauss += kWg[k / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  absolute *= std::abs(half);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double error = std::max(std::abs(kronrod - gauss), 50.0 * eps * absolute);
  return {a, b, kronrod, error};
}

}  // namespace detail

// Globally adaptive bisection with the G7/K15 pair. The interval with the
// largest error estimate is split until the summed estimate drops below tol
// or the subdivision budget is spent (converged = false in that case).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double tol, long max_subdivisions = 4000) {
  if (!(a < b)) throw std::invalid_argument("integrate: require a < b");
  if (!(tol > 0)) throw std::invalid_argument("integrate: require tol > 0");
  using detail::Segment;
  Segment first = detail::gauss_kronrod(f, a, b);
  if (!std::isfinite(first.value)) return {first.value, std::numeric_limits<double>::infinity(), 1, false};
  if (first.error <= tol) return {first.value, first.error, 1, true};

  auto by_error = [](const Segment& x, const Segment& y) { return x.error < y.error; };
  std::vector<Segment> heap{first};
  double total_error = first.error;
  long splits = 0;
  while (total_error > tol && splits < max_subdivisions) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    Segment worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    heap.pop_back();
    Segment left = detail::gauss_kronrod(f, worst.a, mid);
    Segment right = detail::gauss_kronrod(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    ++splits;
  }

  std::sort(heap.begin(), heap.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  std::vector<double> values(heap.size()), errors(heap.size());
  for (std::size_t k = 0; k < heap.size(); ++k) {
    values[k] = heap[k].value;
    errors[k] = heap[k].error;
  }
  QuadratureResult r;
  r.value = pairwise_sum(values);
  r.error_bound = pairwise_sum(errors);
  r.subdivisions = static_cast<long>(heap.size());
  r.converged = std::isfinite(r.value) && r.error_bound <= tol;
  return r;
}

// Integrates over consecutive pieces [breaks[k], breaks[k+1]], giving each a
// share of tol (half by length, half uniformly) and reducing in piece order.
template <class F>
QuadratureResult integrate_partition(F&& f, std::span<const double> breaks, double tol,
                                     long max_subdivisions = 4000) {
  if (breaks.size() < 2) throw std::invalid_argument("integrate_partition: need two breakpoints");
  const double length = breaks.back() - breaks.front();
  const double pieces = static_cast<double>(breaks.size() - 1);
  PairwiseSum value, error;
  long subdivisions = 0;
  bool converged = true;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k], hi = breaks[k + 1];
    if (!(hi > lo)) continue;
    const double share = tol * (0.5 * (hi - lo) / length + 0.5 / pieces);
    const QuadratureResult piece = integrate(f, lo, hi, share, max_subdivisions);
    value.add(piece.value);
    error.add(piece.error_bound);
    subdivisions += piece.subdivisions;
    converged = converged && std::isfinite(piece.value);
  }
  QuadratureResult r{value.total(), error.total(), subdivisions, false};
  r.converged = converged && r.error_bound <= tol;
  return r;
}

// Exact mass of the envelope on [cut, inf): C * cut^(-alpha) / alpha.
double integrate_tail(const TailEnvelope& envelope);

// Samples the envelope against f at log-spaced points of [cut, t_hi]. Each
// sample is passed through admit() first, which may move it to an admissible
// point (e.g. out of a region the envelope does not cover).
template <class F, class Admit>
DominanceCheck check_dominance(const TailEnvelope& envelope, F&& f, double t_hi, int samples,
                               Admit&& admit) {
  DominanceCheck out;
  out.samples = samples;
  const double log_lo = std::log(envelope.cut), log_hi = std::log(t_hi);
  for (int k = 0; k < samples; ++k) {
    const double frac = samples > 1 ? static_cast<double>(k) / (samples - 1) : 0.0;
    const double t = admit(std::exp(log_lo + frac * (log_hi - log_lo)));
    const double ratio = f(t) / envelope(t);
    if (!(ratio <= out.max_ratio) || k == 0) {
      out.max_ratio = ratio;
      out.worst_t = t;
    }
  }
  out.pass = std::isfinite(out.max_ratio) && out.max_ratio <= 1.0;
  return out;
}

template <class F>
DominanceCheck check_dominance(const TailEnvelope& envelope, F&& f, double t_hi, int samples) {
  return check_dominance(envelope, f, t_hi, samples, [](double t) { return t; });
}

// Trapezoid rule on an equispaced periodic grid of S^1: (2 pi / N) * sum.
double periodic_integrate(const Eigen::Ref<const Eigen::VectorXd>& samples);

// Symmetric band matrix, upper band stored row-major: band(i, d) = A(i, i + d).
class BandedSystem {
 public:
  using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BandedSystem(Eigen::Index dimension, Eigen::Index bandwidth);

  static BandedSystem from_dense(const Eigen::MatrixXd& a, Eigen::Index bandwidth,
                                 const Eigen::VectorXd& rhs);

  Eigen::Index dimension() const { return band_.rows(); }
  Eigen::Index bandwidth() const { return band_.cols() - 1; }

  double operator()(Eigen::Index i, Eigen::Index j) const;
  // Adds v to A(i, j) and A(j, i).
  void add(Eigen::Index i, Eigen::Index j, double v);

  Eigen::VectorXd& rhs() { return rhs_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }
  const Storage& band() const { return band_; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
  // Max absolute row sum.
  double norm_inf() const;

 private:
  Storage band_;
  Eigen::VectorXd rhs_;
};

// Band Cholesky solve with one step of iterative refinement. Throws
// NotSpdError on a nonpositive pivot and std::runtime_error when the final
// residual exceeds 1e-10 * (|A| |x| + |b|).
Eigen::VectorXd solve_banded(const BandedSystem& system);

}  // namespace warpgap
