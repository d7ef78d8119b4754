#include "warpgap/numerics.hpp"

#include "warpgap/error.hpp"

#include <numbers>
#include <string>

namespace warpgap {

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double integrate_tail(const TailEnvelope& envelope) {
  if (!(envelope.exponent > 0)) throw std::domain_error("integrate_tail: exponent must be positive");
  if (!(envelope.constant > 0) || !(envelope.cut > 0))
    throw std::domain_error("integrate_tail: constant and cut must be positive");
  return envelope.constant * std::pow(envelope.cut, -envelope.exponent) / envelope.exponent;
}

double periodic_integrate(const Eigen::Ref<const Eigen::VectorXd>& samples) {
  if (samples.size() < 4) throw std::invalid_argument("periodic_integrate: need at least 4 samples");
  const std::span<const double> view(samples.data(), static_cast<std::size_t>(samples.size()));
  return 2.0 * std::numbers::pi / static_cast<double>(samples.size()) * pairwise_sum(view);
}

BandedSystem::BandedSystem(Eigen::Index dimension, Eigen::Index bandwidth)
    : band_(Storage::Zero(dimension, bandwidth + 1)), rhs_(Eigen::VectorXd::Zero(dimension)) {
  if (dimension < 1) throw std::invalid_argument("BandedSystem: dimension must be >= 1");
  if (bandwidth < 0) throw std::invalid_argument("BandedSystem: bandwidth must be >= 0");
}

BandedSystem BandedSystem::from_dense(const Eigen::MatrixXd& a, Eigen::Index bandwidth,
                                      const Eigen::VectorXd& rhs) {
  if (a.rows() != a.cols() || a.rows() != rhs.size())
    throw std::invalid_argument("BandedSystem::from_dense: shape mismatch");
  const double scale = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  BandedSystem out(a.rows(), bandwidth);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("BandedSystem::from_dense: matrix is not symmetric");
      if (std::abs(i - j) > bandwidth && a(i, j) != 0.0)
        throw std::invalid_argument("BandedSystem::from_dense: entry outside the band");
    }
    for (Eigen::Index d = 0; d <= bandwidth && i + d < a.rows(); ++d) out.band_(i, d) = a(i, i + d);
  }
  out.rhs_ = rhs;
  return out;
}

double BandedSystem::operator()(Eigen::Index i, Eigen::Index j) const {
  if (i > j) std::swap(i, j);
  const Eigen::Index d = j - i;
  return d > bandwidth() ? 0.0 : band_(i, d);
}

void BandedSystem::add(Eigen::Index i, Eigen::Index j, double v) {
  if (i > j) std::swap(i, j);
  const Eigen::Index d = j - i;
  if (d > bandwidth()) throw std::out_of_range("BandedSystem::add: entry outside the band");
  band_(i, d) += v;
}

Eigen::VectorXd BandedSystem::multiply(const Eigen::VectorXd& x) const {
  const Eigen::Index n = dimension(), w = bandwidth();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) += band_(i, 0) * x(i);
    for (Eigen::Index d = 1; d <= w && i + d < n; ++d) {
      y(i) += band_(i, d) * x(i + d);
      y(i + d) += band_(i, d) * x(i);
    }
  }
  return y;
}

Eigen::MatrixXd BandedSystem::dense() const {
  const Eigen::Index n = dimension();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index d = 0; d <= bandwidth() && i + d < n; ++d) a(i, i + d) = a(i + d, i) = band_(i, d);
  return a;
}

double BandedSystem::norm_inf() const {
  const Eigen::Index n = dimension();
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rows(i) += std::abs(band_(i, 0));
    for (Eigen::Index d = 1; d <= bandwidth() && i + d < n; ++d) {
      rows(i) += std::abs(band_(i, d));
      rows(i + d) += std::abs(band_(i, d));
    }
  }
  return rows.maxCoeff();
}

namespace {

// Lower band factor: factor(i, d) = L(i, i - d).
using Factor = BandedSystem::Storage;

Factor cholesky(const BandedSystem& s) {
  const Eigen::Index n = s.dimension(), w = s.bandwidth();
  Factor l = Factor::Zero(n, w + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = s.band()(j, 0);
    for (Eigen::Index k = std::max<Eigen::Index>(0, j - w); k < j; ++k) pivot -= l(j, j - k) * l(j, j - k);
    if (!(pivot > 0.0) || !std::isfinite(pivot))
      throw NotSpdError("solve_banded: nonpositive pivot at row " + std::to_string(j));
    const double diag = std::sqrt(pivot);
    l(j, 0) = diag;
    for (Eigen::Index i = j + 1; i <= std::min(n - 1, j + w); ++i) {
      double v = s.band()(j, i - j);
      for (Eigen::Index k = std::max<Eigen::Index>(0, i - w); k < j; ++k) v -= l(i, i - k) * l(j, j - k);
      l(i, i - j) = v / diag;
    }
  }
  return l;
}

Eigen::VectorXd substitute(const Factor& l, Eigen::VectorXd b) {
  const Eigen::Index n = l.rows(), w = l.cols() - 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = std::max<Eigen::Index>(0, i - w); k < i; ++k) b(i) -= l(i, i - k) * b(k);
    b(i) /= l(i, 0);
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    for (Eigen::Index k = i + 1; k <= std::min(n - 1, i + w); ++k) b(i) -= l(k, k - i) * b(k);
    b(i) /= l(i, 0);
  }
  return b;
}

}  // namespace

Eigen::VectorXd solve_banded(const BandedSystem& system) {
  const Factor l = cholesky(system);
  Eigen::VectorXd x = substitute(l, system.rhs());
  x += substitute(l, system.rhs() - system.multiply(x));
  const double residual = (system.rhs() - system.multiply(x)).norm();
  const double scale = system.norm_inf() * x.norm() + system.rhs().norm();
  if (!(residual <= 1e-10 * scale))
    throw std::runtime_error("solve_banded: residual " + std::to_string(residual) + " above tolerance");
  return x;
}

}  // namespace warpgap
