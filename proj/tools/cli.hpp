#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace warpgap::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Defaults reproduce the headline runs.
struct RunConfig {
  int n = 2;
  double epsilon = 0.1;
  std::vector<double> T{5.0, 10.0, 20.0, 40.0};
  double h = 1e-3;
  double tol = 1e-7;
  long m_max = 100000;
  int theta = 64;
  std::string out = ".";
  bool flat = false;
  std::uint64_t seed = 20240611;
  double audit_T = 1e3;
  double curvature_T = 200.0;
  double cut = 1e3;
  std::string functional = "W";
  double p = 2.0;
  double rate = -3.0;
  int surfaces = 10;

  // Throws ConfigError on any out-of-range field.
  void validate() const;
};

// Runs one subcommand: profile, audit, certificate, minimize, curvature,
// series, export. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace warpgap::cli
