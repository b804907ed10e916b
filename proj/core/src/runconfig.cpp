#include "liou/runconfig.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace liou {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!trim(tok).empty()) out.push_back(std::stod(trim(tok)));
  return out;
}

KappaField parse_kappa(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "constant") return KappaField::constant(std::stod(rest));
  if (kind == "poly") return KappaField::polynomial(parse_list(rest));
  if (kind == "table") {
    std::vector<double> xs, vs;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto sep = tok.find(':');
      if (sep == std::string::npos) throw std::invalid_argument("kappa table entries are x:v");
      xs.push_back(std::stod(tok.substr(0, sep)));
      vs.push_back(std::stod(tok.substr(sep + 1)));
    }
    return KappaField::tabulated(std::move(xs), std::move(vs));
  }
  throw std::invalid_argument("kappa spec must be constant:|poly:|table:");
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line missing '=': " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const auto& [key, val] : kv) {
    if (key == "domain") cfg.domain = IntervalUnion::from_string(val);
    else if (key == "kappa") cfg.kappa = parse_kappa(val);
    else if (key == "eps") cfg.eps_list = parse_list(val);
    else if (key == "m") cfg.m = std::stoi(val);
    else if (key == "sigma") cfg.sigma = std::stod(val);
    else if (key == "delta0") cfg.delta0 = std::stod(val);
    else if (key == "grid_hx") cfg.grid_hx = std::stod(val);
    else if (key == "grid_hy") cfg.grid_hy = std::stod(val);
    else if (key == "rbar") cfg.rbar = std::stod(val);
    else if (key == "tol_fp") cfg.tol_fp = std::stod(val);
    else if (key == "tol_c") cfg.tol_c = std::stod(val);
    else if (key == "landscape_delta") cfg.landscape_delta = std::stod(val);
    else if (key == "landscape_points") cfg.landscape_points = std::stoi(val);
    else if (key == "out") cfg.out_dir = val;
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "checks") {
      std::stringstream cs(val);
      std::string tok;
      while (std::getline(cs, tok, ','))
        if (!trim(tok).empty()) cfg.checks.push_back(trim(tok));
    } else if (key == "audit_m") cfg.audit_m = std::stoi(val);
    else if (key == "audit_b") cfg.audit_b = std::stod(val);
    else if (key == "audit_delta") cfg.audit_delta = std::stod(val);
    else if (key == "parallel") cfg.parallel = std::stoi(val);
    else if (key == "green_modes") cfg.green_modes = std::stoi(val);
    else throw std::invalid_argument("unknown config key: " + key);
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void RunConfig::validate() const {
  if (eps_list.empty()) throw std::invalid_argument("eps list must not be empty");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw std::invalid_argument("eps list must be strictly decreasing");
  for (double e : eps_list)
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("eps values must lie in (0,1)");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0,1)");
  for (double t : {delta0, grid_hx, grid_hy, rbar, tol_fp, tol_c})
    if (!(t > 0.0)) throw std::invalid_argument("all tolerances and grid steps must be positive");
  if (parallel < 1) throw std::invalid_argument("parallel must be >= 1");
  kappa.validate_positive(domain);
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "audit_b=" << audit_b << "\naudit_delta=" << audit_delta << "\naudit_m=" << audit_m
     << "\nchecks=";
  for (std::size_t i = 0; i < checks.size(); ++i) os << (i ? "," : "") << checks[i];
  os << "\ndelta0=" << delta0 << "\ndomain=" << domain.to_string() << "\neps=";
  for (std::size_t i = 0; i < eps_list.size(); ++i) os << (i ? "," : "") << eps_list[i];
  os << "\ngreen_modes=" << green_modes << "\ngrid_hx=" << grid_hx << "\ngrid_hy=" << grid_hy
     << "\nkappa=" << kappa.describe() << "\nlandscape_delta=" << landscape_delta
     << "\nlandscape_points=" << landscape_points << "\nm=" << m << "\nparallel=" << parallel
     << "\nrbar=" << rbar << "\nseed=" << seed << "\nsigma=" << sigma << "\ntol_c=" << tol_c
     << "\ntol_fp=" << tol_fp << "\n";
  return os.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

std::string tool_version() { return "liou 0.3.0"; }

std::string output_header(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# " << tool_version() << "\n# config_hash: " << std::hex << cfg.hash() << std::dec
     << "\n# seed: " << cfg.seed << "\n";
  return os.str();
}

}  // namespace liou
