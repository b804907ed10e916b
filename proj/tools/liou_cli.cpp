#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liou/commands.hpp"
#include "liou/runconfig.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Blow-up construction and verification for the nonlocal Liouville problem "
               "(-Delta)^{1/2} u = eps kappa e^u on interval unions"};
  app.require_subcommand(1);
  app.fallthrough(true);  // allow global flags after the subcommand

  std::string config_path, out_override, checks_csv;
  int parallel_override = 0;
  app.add_option("--config", config_path, "experiment config file")->required();
  app.add_option("--out", out_override, "output directory (overrides config)");
  app.add_option("--checks", checks_csv, "comma-separated check list (verify)");
  app.add_option("--parallel", parallel_override, "concurrent eps instances");

  auto* greens = app.add_subcommand("greens", "build the Green table");
  auto* construct = app.add_subcommand("construct", "run the blow-up construction sweep");
  auto* verify = app.add_subcommand("verify", "run verification checks on a construct run");
  auto* landscape = app.add_subcommand("landscape", "export the reduced-energy landscape");
  auto* audit = app.add_subcommand("audit", "run the non-existence audit");

  CLI11_PARSE(app, argc, argv);

  liou::RunConfig cfg;
  try {
    cfg = liou::RunConfig::parse_file(config_path);
    if (parallel_override > 0) cfg.parallel = parallel_override;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  const std::string out = out_override.empty() ? cfg.out_dir : out_override;

  if (greens->parsed()) return liou::cmd_greens(cfg, out);
  if (construct->parsed()) return liou::cmd_construct(cfg, out);
  if (verify->parsed()) {
    std::vector<std::string> checks;
    std::size_t pos = 0;
    while (pos != std::string::npos && !checks_csv.empty()) {
      const auto next = checks_csv.find(',', pos);
      checks.push_back(checks_csv.substr(pos, next == std::string::npos ? next : next - pos));
      pos = next == std::string::npos ? next : next + 1;
    }
    return liou::cmd_verify(cfg, out, checks);
  }
  if (landscape->parsed()) return liou::cmd_landscape(cfg, out);
  if (audit->parsed()) return liou::cmd_audit(cfg, out);
  return 2;
}
