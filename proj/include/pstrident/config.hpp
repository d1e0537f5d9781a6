#pragma once

// Flat key=value run configuration. Blank lines and lines starting with '#'
// are ignored; every other line must be `key = value` with a known key.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pstrident/errors.hpp"
#include "pstrident/gamma_solver.hpp"
#include "pstrident/real_expr.hpp"

namespace pstrident {

struct RunConfig {
  std::vector<std::pair<std::string, std::string>> entries;  // in file order
  ProblemSpec spec;
  std::int64_t q0 = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline constexpr const char* kConfigKeys[] = {"lambda1", "lambda2", "lambda3", "eta",
                                              "gamma",   "theta",   "lambda0", "q0"};

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = detail::trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    require(eq != std::string::npos, ErrorKind::Config,
            "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    bool known = false;
    for (const char* k : detail::kConfigKeys) known = known || key == k;
    require(known, ErrorKind::Config, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    for (const auto& [k, v] : cfg.entries) {
      require(k != key, ErrorKind::Config, "duplicate key '" + key + "'");
    }
    require(!value.empty(), ErrorKind::Config, "empty value for '" + key + "'");
    cfg.entries.emplace_back(key, value);
  }
  const auto get = [&](const char* key) -> const std::string& {
    for (const auto& [k, v] : cfg.entries) {
      if (k == key) return v;
    }
    throw Error(ErrorKind::Config, std::string("missing key '") + key + "'");
  };
  cfg.spec.lambda1 = RealExpr::parse(get("lambda1"));
  cfg.spec.lambda2 = RealExpr::parse(get("lambda2"));
  cfg.spec.lambda3 = RealExpr::parse(get("lambda3"));
  cfg.spec.eta = RealExpr::parse(get("eta"));
  cfg.spec.gamma = GammaType(RealExpr::parse(get("gamma")).to_double());
  cfg.spec.theta_exp = RealExpr::parse(get("theta")).to_double();
  cfg.spec.lambda0 = RealExpr::parse(get("lambda0")).to_double();
  const BigInt q0 = detail::parse_int(get("q0"));
  require(q0 >= 2 && q0 <= BigInt(1) << 40, ErrorKind::Config, "q0 must lie in [2, 2^40]");
  cfg.q0 = static_cast<std::int64_t>(q0);
  cfg.spec.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), ErrorKind::Config, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pstrident
