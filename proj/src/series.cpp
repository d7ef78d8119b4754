#include "warpgap/series.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace warpgap {

LogTerm& LogTerm::add(double coefficient, double exponent) {
  terms.push_back({coefficient, exponent});
  return *this;
}

LogTerm LogTerm::normalized() const {
  std::map<double, double, std::greater<>> merged;
  for (const Monomial& m : terms) merged[m.exponent] += m.coefficient;
  LogTerm out;
  out.constant_power = constant_power;
  for (const auto& [e, c] : merged)
    if (c != 0.0) out.terms.push_back({c, e});
  return out;
}

long double LogTerm::operator()(long double k) const {
  long double s = 0.0L;
  for (const Monomial& m : terms) {
    const long double power = m.exponent == 0.0 ? 1.0L : std::pow(k, static_cast<long double>(m.exponent));
    s += static_cast<long double>(m.coefficient) * power;
  }
  return s;
}

LogTerm operator+(const LogTerm& a, const LogTerm& b) {
  LogTerm out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  out.constant_power += b.constant_power;
  return out.normalized();
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Convergent:
      return "convergent";
    case Classification::Divergent:
      return "divergent";
    case Classification::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

TermBoundSpec TermBoundSpec::glued(double p, bool sharp) {
  TermBoundSpec s;
  s.rate = -3.0;
  s.p = p;
  s.k0 = 0;
  s.sharp = sharp;
  LogTerm lp;
  lp.add(2.0, 1.0).constant_power = 1;
  LogTerm lap;
  lap.add(-2.0 * (p - 1.0), 1.0).constant_power = 1;
  LogTerm hess;
  hess.add(1.0, 1000.0).constant_power = -1;
  s.norms = {{"Lp", lp, BoundKind::Upper}, {"laplacian_Lp", lap, BoundKind::Upper}, {"hessian_Lp", hess, BoundKind::Lower}};
  return s;
}

void TermBoundSpec::validate() const {
  if (!(p >= 1.0)) throw std::invalid_argument("TermBoundSpec: p must be >= 1");
  if (!std::isfinite(rate)) throw std::invalid_argument("TermBoundSpec: rate must be finite");
  if (k0 < 0) throw std::invalid_argument("TermBoundSpec: k0 must be >= 0");
  for (const NormBound& nb : norms)
    for (const Monomial& m : nb.bound.terms)
      if (!std::isfinite(m.coefficient) || !std::isfinite(m.exponent) || m.exponent < 0.0)
        throw std::invalid_argument("TermBoundSpec: bound " + nb.norm + " needs finite nonnegative exponents");
}

SeriesClassification classify_log_series(const LogTerm& term, long k0) {
  const LogTerm t = term.normalized();
  SeriesClassification out;
  if (t.terms.empty()) {
    out.classification = Classification::Divergent;
    out.reason = "terms are constant 1";
    return out;
  }
  const Monomial lead = t.terms.front();
  out.dominant_exponent = lead.exponent;
  out.dominant_coefficient = lead.coefficient;
  if (lead.exponent <= 0.0) {
    out.classification = Classification::Divergent;
    out.reason = "terms do not tend to zero";
    return out;
  }
  if (lead.coefficient > 0.0) {
    out.classification = Classification::Divergent;
    out.reason = "terms are unbounded";
    return out;
  }
  if (lead.exponent > 1.0) {
    out.classification = Classification::Convergent;
    out.reason = "log-term differences tend to -infinity";
    return out;
  }
  if (lead.exponent == 1.0) {
    out.classification = Classification::Convergent;
    out.reason = "ratio limit exp(slope) < 1";
    const bool affine = t.terms.size() == 1 || (t.terms.size() == 2 && t.terms[1].exponent == 0.0);
    if (affine) {
      const double c0 = t.terms.size() == 2 ? t.terms[1].coefficient : 0.0;
      const double c1 = lead.coefficient;
      out.closed_form_log = c0 + c1 * static_cast<double>(k0) - std::log1p(-std::exp(c1));
      out.reason = "geometric";
    }
    return out;
  }
  out.classification = Classification::Inconclusive;
  out.reason = "ratio limit 1";
  return out;
}

long double log_partial_sum(const LogTerm& term, long k0, long count) {
  if (count < 1) throw std::invalid_argument("log_partial_sum: count must be >= 1");
  std::vector<long double> logs(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) logs[static_cast<std::size_t>(k)] = term(static_cast<long double>(k0 + k));
  const long double top = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(static_cast<double>(top))) return top;
  long double s = 0.0L;
  for (long double v : logs) s += std::exp(v - top);
  return top + std::log(s);
}

std::vector<NormClassification> glued_series_norms(const TermBoundSpec& spec) {
  spec.validate();
  const double coefficient_rate = spec.sharp ? spec.p * spec.rate : spec.rate;
  std::vector<NormClassification> out;
  for (const NormBound& nb : spec.norms) {
    NormClassification c;
    c.norm = nb.norm;
    c.kind = nb.kind;
    LogTerm coefficient;
    coefficient.add(coefficient_rate, 1.0);
    c.series_term = coefficient + nb.bound;
    c.constant_power = nb.bound.constant_power;
    c.series = classify_log_series(c.series_term, spec.k0);
    const Classification s = c.series.classification;
    if (nb.kind == BoundKind::Upper)
      c.classification = s == Classification::Convergent ? s : Classification::Inconclusive;
    else
      c.classification = s == Classification::Divergent ? s : Classification::Inconclusive;
    if (nb.kind == BoundKind::Lower) c.series.closed_form_log.reset();
    out.push_back(std::move(c));
  }
  return out;
}

std::string series_report_json(const std::vector<NormClassification>& report) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const NormClassification& c : report) {
    nlohmann::ordered_json j;
    j["norm"] = c.norm;
    j["classification"] = to_string(c.classification);
    if (c.series.closed_form_log)
      j["closed_form_log"] = *c.series.closed_form_log;
    else
      j["closed_form_log"] = nullptr;
    j["bound"] = c.kind == BoundKind::Upper ? "upper" : "lower";
    j["constant_power"] = c.constant_power;
    j["dominant_exponent"] = c.series.dominant_exponent;
    j["reason"] = c.series.reason;
    doc.push_back(j);
  }
  return doc.dump(2);
}

}  // namespace warpgap
