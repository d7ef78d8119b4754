#pragma once

#include <optional>
#include <string>
#include <vector>

namespace warpgap {

// c k^e
struct Monomial {
  double coefficient = 0.0;
  double exponent = 0.0;
};

// Generalized polynomial sum_i c_i k^(e_i) giving the log-magnitude of the
// k-th term. Exponents may be large (k^1000); evaluation is only used for
// partial sums over moderate k.
struct LogTerm {
  std::vector<Monomial> terms;
  // Power of the tracked constant C multiplying every term.
  int constant_power = 0;

  LogTerm& add(double coefficient, double exponent);
  // Like terms merged and zero coefficients dropped, exponents descending.
  LogTerm normalized() const;
  long double operator()(long double k) const;
};

LogTerm operator+(const LogTerm& a, const LogTerm& b);

enum class BoundKind { Upper, Lower };
enum class Classification { Convergent, Divergent, Inconclusive };

const char* to_string(Classification c);

struct NormBound {
  std::string norm;
  LogTerm bound;  // log of the p-th power bound for one term
  BoundKind kind = BoundKind::Upper;
};

// Disjoint-support series F = sum_k e^(rate k) u_k. With sharp = true the
// coefficient enters the p-th power norm as e^(p rate k); otherwise as
// e^(rate k), the coarser form.
struct TermBoundSpec {
  double rate = -3.0;
  double p = 2.0;
  long k0 = 0;
  bool sharp = false;
  std::vector<NormBound> norms;

  // L^p: e^(2k) C, Laplacian: e^(-2(p-1)k) C, Hessian: at least e^(k^1000) / C.
  static TermBoundSpec glued(double p, bool sharp = false);
  void validate() const;
};

struct SeriesClassification {
  Classification classification = Classification::Inconclusive;
  double dominant_exponent = 0.0;
  double dominant_coefficient = 0.0;
  // log of sum_(k >= k0) e^(P(k)) when P is affine in k with negative slope.
  std::optional<double> closed_form_log;
  std::string reason;
};

// Decides sum_(k >= k0) exp(P(k)) symbolically from the dominant monomial.
SeriesClassification classify_log_series(const LogTerm& term, long k0);

// log sum_(k=k0..k0+count-1) exp(P(k)) in long double log-sum-exp.
long double log_partial_sum(const LogTerm& term, long k0, long count);

struct NormClassification {
  std::string norm;
  BoundKind kind = BoundKind::Upper;
  LogTerm series_term;  // coefficient power plus the bound
  SeriesClassification series;
  // The conclusion about the norm: an upper bound can only show convergence,
  // a lower bound only divergence.
  Classification classification = Classification::Inconclusive;
  int constant_power = 0;
};

std::vector<NormClassification> glued_series_norms(const TermBoundSpec& spec);

// [{norm, classification, closed_form_log}] (closed_form_log may be null).
std::string series_report_json(const std::vector<NormClassification>& report);

}  // namespace warpgap
