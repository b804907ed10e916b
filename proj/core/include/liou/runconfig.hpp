#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liou/domain.hpp"

namespace liou {

/// One experiment: flat key-value text, diff-able and hash-able. Unknown keys
/// are rejected; every output file carries the config hash and seed.
struct RunConfig {
  IntervalUnion domain{{{-1.0, 1.0}}};
  KappaField kappa = KappaField::constant(1.0);
  std::vector<double> eps_list{0.05};
  int m = 1;
  double sigma = 0.25;
  double delta0 = 0.3;
  double grid_hx = 2e-3;
  double grid_hy = 0.0625;
  double rbar = 10.0;
  double tol_fp = 1e-10;
  double tol_c = 1e-6;
  double landscape_delta = 0.0;  // Q_delta margin; 0 -> 2*grid_hx
  int landscape_points = 33;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::vector<std::string> checks;  // empty -> all
  int audit_m = 6;
  double audit_b = 5.0;
  double audit_delta = 0.1;
  int parallel = 1;
  int green_modes = 96;

  static RunConfig parse(const std::string& text);
  static RunConfig parse_file(const std::string& path);

  void validate() const;
  /// Canonical text form (sorted keys) used for hashing and file headers.
  std::string canonical() const;
  std::uint64_t hash() const;

  double qdelta() const { return landscape_delta > 0.0 ? landscape_delta : 2.0 * grid_hx; }
};

/// FNV-1a over the canonical text.
std::uint64_t fnv1a(const std::string& text);

std::string tool_version();

/// "# liou <version>\n# config_hash: ...\n# seed: ...\n" prefix for every output.
std::string output_header(const RunConfig& cfg);

}  // namespace liou
