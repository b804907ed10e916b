#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liou/ansatz.hpp"
#include "liou/reduced.hpp"
#include "liou/reduction.hpp"
#include "liou/runconfig.hpp"
#include "liou/verify.hpp"

namespace liou {

/// Shared construction pipeline: Green table, component assignment, reduced
/// minimizer, and the per-eps reduction runs.
class Pipeline {
public:
  explicit Pipeline(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  const GreenTable& greens() const { return *greens_; }
  const XiLandscape& landscape() const { return *landscape_; }
  const std::vector<double>& xi_hat() const { return xi_hat_; }

  struct EpsRun {
    double eps = 0.0;
    std::optional<AnsatzBundle> bundle;
    ReductionState state;
    std::vector<double> xi;
    double mass_value = 0.0;
    double energy = 0.0;
    bool converged = false;
    std::string note;
  };

  /// Full run at one eps: bundle at the reduced minimizer, Picard fixed point,
  /// outer loop driving c to zero. Failures are recorded, not thrown.
  EpsRun run_eps(double eps) const;

private:
  RunConfig cfg_;
  std::shared_ptr<GreenTable> greens_;
  std::optional<XiLandscape> landscape_;
  std::vector<double> xi_hat_;
};

/// Exit codes: 0 success, 1 numerical failure, 2 config/IO error.
int cmd_greens(const RunConfig& cfg, const std::string& out_dir);
int cmd_construct(const RunConfig& cfg, const std::string& out_dir);
int cmd_verify(const RunConfig& cfg, const std::string& out_dir,
               std::vector<std::string> checks = {});
int cmd_landscape(const RunConfig& cfg, const std::string& out_dir);
int cmd_audit(const RunConfig& cfg, const std::string& out_dir);

}  // namespace liou
