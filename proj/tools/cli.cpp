#include "cli.hpp"

#include "warpgap/error.hpp"
#include "warpgap/functionals.hpp"
#include "warpgap/geometry.hpp"
#include "warpgap/series.hpp"
#include "warpgap/variational.hpp"
#include "warpgap/warping.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <cstdio>

namespace warpgap::cli {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (!(epsilon > 0.0) || !(epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (T.empty()) throw ConfigError("T list is empty");
  for (double t : T)
    if (!(t > 0.0)) throw ConfigError("T values must be positive");
  if (!std::is_sorted(T.begin(), T.end())) throw ConfigError("T list must be sorted ascending");
  if (!(h > 0.0)) throw ConfigError("h must be positive");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (m_max < 1) throw ConfigError("m-max must be >= 1");
  if (theta < 4 || theta % 2 != 0) throw ConfigError("theta must be an even count >= 4");
  if (!(audit_T > 1.0) || !(curvature_T > 0.0) || !(cut > 1.0)) throw ConfigError("audit-T, curvature-T, cut out of range");
  if (functional != "W" && functional != "H" && functional != "first") throw ConfigError("functional must be W, H or first");
  if (!(p >= 1.0)) throw ConfigError("p must be >= 1");
  if (surfaces < 0) throw ConfigError("surfaces must be >= 0");
}

namespace {

WarpingProfile make_profile(const RunConfig& c) {
  if (c.flat) return WarpingProfile::constant(c.n, 1.0);
  WarpingParams p;
  p.n = c.n;
  p.epsilon = c.epsilon;
  p.m_max = c.m_max;
  return build_profile(p);
}

FrakJOptions frak_options(const RunConfig& c) {
  FrakJOptions o;
  o.tol = c.tol;
  o.cut = c.cut;
  return o;
}

fs::path output_dir(const RunConfig& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
}

std::vector<double> uniform_grid(double lo, double hi, double h) {
  const long k0 = grid_index(lo, h), k1 = grid_index(hi, h);
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(k1 - k0 + 1));
  for (long k = k0; k <= k1; ++k) g.push_back(static_cast<double>(k) * h);
  return g;
}

int cmd_profile(const RunConfig& c, std::ostream& out) {
  const WarpingProfile profile = make_profile(c);
  const fs::path dir = output_dir(c);
  const double T = c.T.back();
  {
    std::ofstream csv(dir / "profile.csv", std::ios::binary);
    const std::vector<double> grid = uniform_grid(-T, T, c.h);
    write_profile_csv(csv, profile, grid);
  }
  nlohmann::ordered_json meta;
  meta["n"] = profile.dimension();
  meta["flat"] = c.flat;
  if (profile.oscillating()) {
    const WarpingParams& p = profile.params();
    meta["epsilon"] = p.epsilon;
    meta["two_plus"] = p.two_plus();
    meta["t0"] = p.t0();
    meta["m_max"] = p.m_max;
    meta["bridge"] = std::vector<double>(profile.bridge().data(), profile.bridge().data() + profile.bridge().size());
    meta["merged_extents"] = static_cast<long>(profile.extents().size());
    nlohmann::ordered_json patches = nlohmann::ordered_json::array();
    for (const SingularPatch& s : profile.patches()) {
      if (s.t_m > T) break;
      patches.push_back({{"m", s.m},
                         {"t_m", s.t_m},
                         {"eta_m", s.eta_m},
                         {"extent", {s.merged_extent.lo, s.merged_extent.hi}},
                         {"rounding_delta", s.rounding_delta}});
    }
    meta["patches"] = patches;
  }
  write_file(dir / "profile.json", meta.dump(2));
  out << "profile: wrote " << (dir / "profile.csv").string() << " and " << (dir / "profile.json").string() << "\n";
  return kOk;
}

void add_surface_items(const RunConfig& c, const WarpingProfile& profile, AuditReport& report) {
  if (profile.dimension() != 2 || c.surfaces == 0) return;
  int passed = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < c.surfaces; ++k) {
    const SurfaceFunction F = random_band_limited_surface(5.0, 1e-2, c.theta, 4, 6, c.seed + static_cast<std::uint64_t>(k));
    const AuditItem it = rearrangement_check(F, profile);
    passed += it.pass ? 1 : 0;
    worst = std::min(worst, it.margin);
  }
  AuditItem summary = compare_le("rearrangement_random", static_cast<double>(c.surfaces), passed, 0.0);
  summary.detail = "seeded surfaces passing; smallest margin " + std::to_string(worst);
  report.add(summary);
}

int cmd_audit(const RunConfig& c, std::ostream& out) {
  const WarpingProfile profile = make_profile(c);
  AuditOptions o;
  o.T = c.audit_T;
  o.flat_control = c.flat;
  o.frak_j = frak_options(c);
  AuditReport report = audit_inequality_chain(profile, o);
  if (!c.flat) add_surface_items(c, profile, report);
  const fs::path dir = output_dir(c);
  write_file(dir / "audit.json", report.to_json());
  for (const AuditItem& it : report.items)
    out << (it.pass ? "PASS " : "FAIL ") << it.check << (it.detail.empty() ? "" : "  " + it.detail) << "\n";
  if (c.flat) {
    const AuditItem* gap = report.find("gap_lower_bound");
    const bool detected = gap != nullptr && !gap->pass;
    out << "flat control: " << (detected ? "no gap (frak J diverges), as expected" : "gap reported on flat cylinder")
        << "\n";
    return detected ? kOk : kFailure;
  }
  out << "audit: " << (report.pass ? "pass" : "fail") << "\n";
  return report.pass ? kOk : kFailure;
}

int cmd_certificate(const RunConfig& c, std::ostream& out) {
  const WarpingProfile profile = make_profile(c);
  CertifyOptions o;
  o.frak_j = frak_options(c);
  const GapCertificate cert = certify_gap(profile, c.T, c.h, o);
  const fs::path dir = output_dir(c);
  write_file(dir / "certificate.json", cert.to_json());
  char line[256];
  std::snprintf(line, sizeof line, "J = %.10g +- %.3g, L = %.10g\n", cert.J.value, cert.J.error_bound,
                cert.lower_bound);
  out << line;
  for (const CertificateRow& r : cert.rows) {
    std::snprintf(line, sizeof line, "T = %g  min_QW = %.10g  min_QH = %.10g  ratio = %.6g\n", r.T, r.min_QW,
                  r.min_QH, r.ratio);
    out << line;
  }
  if (c.flat) {
    out << "flat control: " << (cert.gap_certified ? "gap reported" : "no gap certified") << "\n";
    return cert.gap_certified ? kFailure : kOk;
  }
  out << "certificate: " << (cert.pass ? "pass" : "fail") << "\n";
  return cert.pass ? kOk : kFailure;
}

int cmd_minimize(const RunConfig& c, std::ostream& out) {
  const WarpingProfile profile = make_profile(c);
  MinimizationProblem pr;
  pr.profile = &profile;
  pr.T = c.T.back();
  pr.h = c.h;
  pr.functional = c.functional == "W" ? Functional::SobolevW
                  : c.functional == "H" ? Functional::LaplacianH
                                        : Functional::FirstOrder;
  const MinimizationResult r = minimize_quadratic(pr);
  const fs::path dir = output_dir(c);
  {
    std::ofstream csv(dir / "minimizer.csv", std::ios::binary);
    write_minimizer_csv(csv, r.phi);
  }
  nlohmann::ordered_json j;
  j["functional"] = c.functional;
  j["T"] = pr.T;
  j["h"] = pr.h;
  j["value"] = r.value;
  j["derivative_part"] = r.derivative_part;
  j["l2_part"] = r.l2_part;
  j["tail"] = r.tail;
  j["residual"] = r.residual;
  write_file(dir / "minimize.json", j.dump(2));
  out << "minimize: value " << r.value << "\n";
  return kOk;
}

int cmd_curvature(const RunConfig& c, std::ostream& out) {
  const WarpingProfile profile = make_profile(c);
  const std::vector<double> grid = uniform_grid(0.0, c.curvature_T, 1e-2);
  const CurvatureProfile curv = curvature_profile(profile, grid);
  const fs::path dir = output_dir(c);
  {
    std::ofstream csv(dir / "curvature.csv", std::ios::binary);
    write_curvature_csv(csv, curv);
  }
  const RicciViolation v = find_ricci_violation(profile, grid, 1);
  nlohmann::ordered_json j;
  j["T"] = c.curvature_T;
  j["max_abs_K_rad"] = v.max_abs_K_rad;
  j["argmax_K_rad"] = v.argmax_K_rad;
  j["violation_found"] = v.found;
  j["violation_t"] = v.t;
  j["ricci_norm"] = v.ricci_norm;
  j["r_upper"] = v.r_upper;
  j["lambda_sq"] = v.lambda_sq;
  write_file(dir / "curvature.json", j.dump(2));
  out << "curvature: max |K_rad| = " << v.max_abs_K_rad << ", |Ric| > lambda^2: " << (v.found ? "yes" : "no")
      << "\n";
  return kOk;
}

int cmd_series(const RunConfig& c, std::ostream& out) {
  TermBoundSpec spec = TermBoundSpec::glued(c.p, false);
  spec.rate = c.rate;
  TermBoundSpec sharp = spec;
  sharp.sharp = true;
  const auto coarse = glued_series_norms(spec);
  const auto fine = glued_series_norms(sharp);
  nlohmann::ordered_json doc;
  doc["p"] = c.p;
  doc["rate"] = c.rate;
  doc["coarse"] = nlohmann::ordered_json::parse(series_report_json(coarse));
  doc["sharp"] = nlohmann::ordered_json::parse(series_report_json(fine));
  bool sharp_below = true;
  for (std::size_t k = 0; k < coarse.size(); ++k)
    if (coarse[k].series.closed_form_log && fine[k].series.closed_form_log)
      sharp_below = sharp_below && *fine[k].series.closed_form_log <= *coarse[k].series.closed_form_log;
  doc["sharp_below_coarse"] = sharp_below;
  const fs::path dir = output_dir(c);
  write_file(dir / "series.json", doc.dump(2));
  for (const NormClassification& n : coarse) {
    out << n.norm << ": " << to_string(n.classification);
    if (n.series.closed_form_log) out << " (sum = " << std::exp(*n.series.closed_form_log) << " C)";
    out << "\n";
  }
  return sharp_below ? kOk : kFailure;
}

int cmd_export(const RunConfig& c, std::ostream& out) {
  int code = cmd_profile(c, out);
  code = std::max(code, cmd_curvature(c, out));
  code = std::max(code, cmd_minimize(c, out));
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Warped-product Sobolev gap toolkit"};
  app.set_help_flag("--help", "print help");
  app.set_config("--config", "", "key=value configuration file");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  app.fallthrough();
  std::string T_text;
  app.add_option("--n", c.n, "dimension");
  app.add_option("--epsilon", c.epsilon, "decay parameter");
  app.add_option("--T", T_text, "comma-separated half-widths");
  app.add_option("--h", c.h, "grid step");
  app.add_option("--tol", c.tol, "quadrature tolerance");
  app.add_option("--m-max", c.m_max, "tracked corners");
  app.add_option("--theta", c.theta, "theta grid size");
  app.add_option("--out", c.out, "output directory");
  app.add_flag("--flat", c.flat, "flat cylinder control (j = 1)");
  app.add_option("--seed", c.seed, "seed for generated test data");
  app.add_option("--audit-T", c.audit_T, "audit range");
  app.add_option("--curvature-T", c.curvature_T, "curvature scan range");
  app.add_option("--cut", c.cut, "quadrature cut for the full-line integral");
  app.add_option("--functional", c.functional, "W, H or first");
  app.add_option("--p", c.p, "Lebesgue exponent for series");
  app.add_option("--rate", c.rate, "log coefficient rate for series");
  app.add_option("--surfaces", c.surfaces, "random surfaces in the audit");
  const std::vector<std::string> names = {"profile", "audit", "certificate", "minimize", "curvature", "series", "export"};
  for (const std::string& name : names) app.add_subcommand(name, name + " command");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    if (!T_text.empty()) {
      c.T.clear();
      std::string item;
      std::stringstream ss(T_text);
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        c.T.push_back(std::stod(item, &used));
        if (used != item.size()) throw ConfigError("malformed T entry '" + item + "'");
      }
    }
    c.validate();
  } catch (const std::invalid_argument&) {
    err << "config error: malformed T list\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "profile") return cmd_profile(c, out);
    if (cmd == "audit") return cmd_audit(c, out);
    if (cmd == "certificate") return cmd_certificate(c, out);
    if (cmd == "minimize") return cmd_minimize(c, out);
    if (cmd == "curvature") return cmd_curvature(c, out);
    if (cmd == "series") return cmd_series(c, out);
    return cmd_export(c, out);
  } catch (const GridError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << cmd << " failed: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace warpgap::cli
