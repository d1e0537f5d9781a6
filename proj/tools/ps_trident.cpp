// ps-trident: command-line front end.
//
// Exit codes: 0 success, 1 verify found a failing criterion, 2 bad usage,
// 3 configuration error, 4 size limit or budget exceeded, 5 internal error.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pstrident/config.hpp"
#include "pstrident/continued_fraction.hpp"
#include "pstrident/errors.hpp"
#include "pstrident/expsums.hpp"
#include "pstrident/gamma_solver.hpp"
#include "pstrident/json_out.hpp"
#include "pstrident/moments.hpp"
#include "pstrident/ps_primes.hpp"
#include "pstrident/smoothing.hpp"
#include "pstrident/verify.hpp"

using namespace pstrident;

namespace {

constexpr const char* kVersion = "ps-trident 0.1.0";

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::RangeEmpty:
    case ErrorKind::ZeroArgument:
    case ErrorKind::InadmissibleLambda0:
      return 3;
    case ErrorKind::SizeLimit:
    case ErrorKind::BudgetExceeded:
      return 4;
    default:
      return 5;
  }
}

/// Run metadata. The echo and the results are deterministic; timings go to
/// stderr only.
struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> echo;
  std::vector<std::pair<std::string, double>> timings;
  std::chrono::steady_clock::time_point phase_start = std::chrono::steady_clock::now();

  void add(const std::string& key, const std::string& value) { echo.emplace_back(key, value); }
  void phase(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    timings.emplace_back(name, std::chrono::duration<double>(now - phase_start).count());
    phase_start = now;
  }
  Json json() const {
    Json j;
    j["command"] = command;
    Json cfg = Json::object();
    for (const auto& [k, v] : echo) cfg[k] = v;
    j["config"] = cfg;
    j["version"] = kVersion;
    j["seed_free"] = true;
    return j;
  }
  void emit_stderr() const {
    Json j = json();
    Json t = Json::object();
    for (const auto& [k, v] : timings) t[k] = v;
    j["timings"] = t;
    std::cerr << "manifest: " << j.dump() << "\n";
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path);
  require(f.good(), ErrorKind::Config, "cannot write '" + path + "'");
  f << text;
}

std::string g17(double v) { return format_double(v); }

/// Shortest text that reads back as v; used to echo numeric options.
std::string shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(RealExpr::parse(item).to_double());
  require(!out.empty(), ErrorKind::Config, "empty list");
  return out;
}

Json params_json(const RunParams& p) {
  Json j;
  j["q0"] = p.q0;
  j["X"] = p.X;
  j["Delta"] = p.Delta;
  j["eps"] = p.eps;
  j["H"] = p.H;
  j["smoothing_k"] = p.smoothing_k;
  return j;
}

struct Options {
  unsigned threads = 1;
  std::string out = "-";
};

// --- subcommands -----------------------------------------------------------

struct PrimesArgs {
  double gamma = 0.0;
  double x = 0.0;
  double lambda0 = 0.0;
  int k = 1;
  std::string density;
};

std::string run_primes(const PrimesArgs& a, const Options& o, Manifest& m) {
  const GammaType g(a.gamma);
  const Exec exec{o.threads};
  std::string out;
  if (!a.density.empty()) {
    const auto rows = density_report(parse_list(a.density), g, exec);
    out = "X,count,ratio\n";
    for (const auto& r : rows) out += g17(r.X) + "," + std::to_string(r.count) + "," + g17(r.ratio) + "\n";
  } else {
    require(a.x >= 2.0, ErrorKind::Config, "--x must be at least 2");
    out = "p,weight\n";
    if (a.lambda0 > 0.0) {
      const auto t = sieve_ps_table(a.x, a.lambda0, a.k, g, exec);
      for (std::size_t i = 0; i < t.size(); ++i) {
        out += std::to_string(t.primes[i]) + "," + g17(t.weights[i]) + "\n";
      }
    } else {
      for (auto p : ps_primes_upto(a.x, g, exec)) out += std::to_string(p) + "," + g17(ps_weight(p, g)) + "\n";
    }
  }
  m.phase("primes");
  return out;
}

struct KernelArgs {
  double eps = 1.0;
  int k = 1;
  std::string mode = "theta";
  double from = -1.25, to = 1.25;
  std::size_t n = 11;
};

std::string run_kernel(const KernelArgs& a, Manifest& m) {
  const SmoothingKernel kernel(a.eps, a.k);
  require(a.n >= 1, ErrorKind::Config, "--n must be positive");
  std::string out = a.mode == "theta" ? "y,theta\n" : "x,Theta,bound\n";
  for (std::size_t i = 0; i < a.n; ++i) {
    const double v = a.n == 1 ? a.from : a.from + (a.to - a.from) * static_cast<double>(i) / static_cast<double>(a.n - 1);
    if (a.mode == "theta") {
      out += g17(v) + "," + g17(theta(v, kernel)) + "\n";
    } else {
      out += g17(v) + "," + g17(theta_fourier(v, kernel)) + "," + g17(theta_fourier_bound(v, kernel)) + "\n";
    }
  }
  m.phase("kernel");
  return out;
}

struct SumsArgs {
  std::string kind = "S";
  int k = 4;
  double x = 0.0;
  double lambda0 = 0.5;
  double gamma = 0.0;
  std::string t;
  bool decompose = false;
};

std::string run_sums(const SumsArgs& a, const Options& o, Manifest& m) {
  const Exec exec{o.threads};
  const auto ts = parse_list(a.t);
  std::string out;
  if (a.decompose) {
    const GammaType g(a.gamma);
    out = "t,s4_re,s4_im,mainterm_re,mainterm_im,omega_re,omega_im,residual_abs,taylor_gap_abs\n";
    for (double t : ts) {
      const auto d = decompose_S4(t, a.x, a.lambda0, g, exec);
      out += g17(t) + "," + g17(d.s4.real()) + "," + g17(d.s4.imag()) + "," + g17(d.mainterm.real()) +
             "," + g17(d.mainterm.imag()) + "," + g17(d.omega.real()) + "," + g17(d.omega.imag()) +
             "," + g17(std::abs(d.residual)) + "," + g17(std::abs(d.taylor_gap)) + "\n";
    }
  } else {
    ExpSumSpec spec;
    if (a.kind == "S") spec.kind = SumKind::S;
    else if (a.kind == "Sigma") spec.kind = SumKind::Sigma;
    else if (a.kind == "U") spec.kind = SumKind::U;
    else if (a.kind == "Omega") spec.kind = SumKind::Omega;
    else throw Error(ErrorKind::Config, "--kind must be S, Sigma, U or Omega");
    spec.k = a.k;
    spec.X = a.x;
    spec.lambda0 = a.lambda0;
    if (a.gamma > 0.0) spec.gamma = GammaType(a.gamma);
    const auto table = build_sum_table(spec, exec);
    out = "t,re,im\n";
    for (double t : ts) {
      const cplx v = eval_sum(table, t, exec);
      out += g17(t) + "," + g17(v.real()) + "," + g17(v.imag()) + "\n";
    }
  }
  m.phase("sums");
  return out;
}

struct MomentsArgs {
  double gamma = 0.0;
  double x = 0.0;
  std::size_t size = 0;
  int m = 2;
  bool quadrature = false;
  bool spectra = false;
};

std::string run_moments(const MomentsArgs& a, const Options& o, Manifest& m) {
  const Exec exec{o.threads};
  const GammaType g(a.gamma);
  require((a.x > 0.0) != (a.size > 0), ErrorKind::Config, "give exactly one of --x and --size");
  const PrimeSet P = a.size > 0 ? prime_set_of_size(a.size, g, exec) : prime_set_upto(a.x, g, exec);
  m.phase("primes");
  Json j;
  j["manifest"] = m.json();
  j["set_size"] = P.size();
  j["largest_prime"] = P.primes.empty() ? 0 : P.primes.back();
  j["m"] = a.m;
  j["moment"] = exact_moment(P, a.m, exec);
  m.phase("moment");
  if (a.quadrature) {
    j["quadrature"] = quadrature_moment(P, a.m, 0, exec);
    m.phase("quadrature");
  }
  if (a.spectra) {
    Json s;
    const auto b = spectrum_b(P, 1, exec);
    const auto c = spectrum_c(P, exec);
    s["b_total"] = static_cast<std::uint64_t>(b.total());
    s["b0"] = b.at(0);
    s["b_keys"] = b.size();
    s["c_keys"] = c.size();
    s["sum_bc"] = static_cast<std::uint64_t>(spectrum_dot(b, c));
    const auto cs = spectrum_c_star(P, exec);
    s["c_star_keys"] = cs.size();
    s["c_star_0"] = cs.at(0);
    if (P.size() <= kMaxCBarSize) {
      const auto cb = spectrum_c_bar(P, exec);
      s["c_bar_keys"] = cb.size();
      s["c_bar_0"] = cb.at(0);
    }
    j["spectra"] = s;
    m.phase("spectra");
  }
  return to_json_text(j);
}

struct GammaArgs {
  std::string config;
  double x = 0.0;
  std::size_t budget = kDefaultQuadBudget;
  bool skip_integral = false;
};

RunParams params_from(const RunConfig& cfg, double x) {
  return x > 0.0 ? params_for_x(x, cfg.spec) : derive_params(cfg.q0, cfg.spec);
}

void echo_config(const RunConfig& cfg, Manifest& m) {
  for (const auto& [k, v] : cfg.entries) m.add(k, v);
}

std::string run_gamma(const GammaArgs& a, const Options& o, Manifest& m) {
  const Exec exec{o.threads};
  const RunConfig cfg = load_config(a.config);
  echo_config(cfg, m);
  if (a.x > 0.0) m.add("x", shortest(a.x));
  const RunParams p = params_from(cfg, a.x);
  Json j;
  j["manifest"] = m.json();
  j["params"] = params_json(p);
  j["ratio_irrational"] = cfg.spec.ratio_irrational();
  const auto d = gamma_direct(cfg.spec, p, exec);
  m.phase("direct");
  j["direct"] = {{"value", d.value}, {"support", d.support}, {"range_empty", d.range_empty}};
  if (!a.skip_integral) {
    const auto gi = gamma_via_integral(cfg.spec, p, a.budget, exec);
    m.phase("integral");
    j["integral"] = {{"gamma1_re", gi.gamma1.real()}, {"gamma1_im", gi.gamma1.imag()},
                     {"gamma2_re", gi.gamma2.real()}, {"gamma2_im", gi.gamma2.imag()},
                     {"gamma3_bound", gi.gamma3_bound}, {"total", gi.total},
                     {"lower", gi.lower()}, {"upper", gi.upper()},
                     {"imag", gi.imag}, {"evaluations", gi.evaluations},
                     {"range_empty", gi.range_empty}};
  }
  const auto b = main_term_B(cfg.spec, p);
  m.phase("main_term");
  if (!b.admissible) {
    std::cerr << "warning: lambda0 is not admissible for the main-term estimate (bound "
              << g17(b.admissibility_bound) << ")\n";
  }
  j["main_term"] = {{"B", b.B}, {"ratio", b.ratio}, {"error_estimate", b.error_estimate},
                    {"admissible", b.admissible}, {"admissibility_bound", b.admissibility_bound}};
  return to_json_text(j);
}

struct SolveArgs {
  std::string config;
  double x = 0.0;
  double tol = 0.0;
  std::size_t limit = 0;
};

std::string run_solve(const SolveArgs& a, const Options& o, Manifest& m) {
  const Exec exec{o.threads};
  const RunConfig cfg = load_config(a.config);
  echo_config(cfg, m);
  m.add("tol", shortest(a.tol));
  m.add("limit", std::to_string(a.limit));
  if (a.x > 0.0) m.add("x", shortest(a.x));
  const RunParams p = params_from(cfg, a.x);
  const double tol = a.tol > 0.0 ? a.tol : p.eps;
  const auto sols = find_triples(cfg.spec, p.X, tol, a.limit == 0 ? kUnlimited : a.limit, exec);
  m.phase("solve");
  Json arr = Json::array();
  for (const auto& s : sols) arr.push_back({{"p1", s.p1}, {"p2", s.p2}, {"p3", s.p3}, {"value", s.value}});
  Json j;
  j["manifest"] = m.json();
  j["params"] = params_json(p);
  j["tol"] = tol;
  j["solutions"] = arr;
  return to_json_text(j);
}

struct ConvergentsArgs {
  std::string value;
  int n = 8;
  bool csv = false;
};

std::string run_convergents(const ConvergentsArgs& a, Manifest& m) {
  require(a.n >= 1, ErrorKind::Config, "--n must be positive");
  const auto cf = cf_convergents(RealExpr::parse(a.value), a.n);
  std::string out = a.csv ? "index,partial_quotient,a,q\n" : "";
  for (std::size_t i = 0; i < cf.convergents.size(); ++i) {
    const auto& c = cf.convergents[i];
    if (a.csv) {
      out += std::to_string(i) + "," + std::to_string(cf.partial_quotients[i]) + "," +
             std::to_string(c.a) + "," + std::to_string(c.q) + "\n";
    } else {
      out += std::to_string(c.a) + "/" + std::to_string(c.q) + "\n";
    }
  }
  if (cf.rational_terminated) std::cerr << "note: the value is rational; expansion ended early\n";
  m.phase("convergents");
  return out;
}

int run_verify(const Options& o, bool determinism, Manifest& m) {
  using namespace pstrident::verify;
  auto results = run_suite(Exec{o.threads}, [&](const CriterionResult& r) {
    if (o.out == "-") std::cout << render_line(r) << std::flush;
  });
  if (determinism) {
    results.push_back(run_one(
        [&](const Exec&) { return c12_determinism(render(results, false)); }, Exec{o.threads}));
    if (o.out == "-") std::cout << render_line(results.back());
  }
  if (o.out != "-") write_output(o.out, render(results));
  std::cerr << render_timings(results);
  m.phase("verify");
  for (const auto& r : results) {
    if (!r.ok()) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piatetski-Shapiro prime triples: sieve, kernel, sums, moments and solver"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options opt;
  app.add_option("--threads", opt.threads, "worker threads (results do not depend on this)")
      ->check(CLI::Range(1u, 1024u));

  PrimesArgs pa;
  auto* primes = app.add_subcommand("primes", "list PS primes (CSV p,weight) or a density report");
  primes->add_option("--gamma", pa.gamma, "type gamma in (0,1)")->required();
  primes->add_option("--x", pa.x, "upper bound X");
  primes->add_option("--lambda0", pa.lambda0, "restrict to lambda0 X < p^k <= X");
  primes->add_option("--k", pa.k, "power index for --lambda0 (1..4)");
  primes->add_option("--density", pa.density, "comma-separated X values; prints X,count,ratio");
  primes->add_option("--out", opt.out, "output path, - for stdout");

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "tabulate theta (CSV y,theta) or its transform");
  kernel->add_option("--eps", ka.eps, "support half-width eps")->required();
  kernel->add_option("--k", ka.k, "smoothness order k")->required();
  kernel->add_option("--mode", ka.mode, "theta or fourier")->check(CLI::IsMember({"theta", "fourier"}));
  kernel->add_option("--from", ka.from, "first grid point");
  kernel->add_option("--to", ka.to, "last grid point");
  kernel->add_option("--n", ka.n, "number of grid points");
  kernel->add_option("--out", opt.out, "output path, - for stdout");

  SumsArgs sa;
  auto* sums = app.add_subcommand("sums", "evaluate S, Sigma, U or Omega at t values (CSV t,re,im)");
  sums->add_option("--kind", sa.kind, "S, Sigma, U or Omega");
  sums->add_option("--k", sa.k, "power index (S only)");
  sums->add_option("--x", sa.x, "X")->required();
  sums->add_option("--lambda0", sa.lambda0, "lower range factor");
  sums->add_option("--gamma", sa.gamma, "type gamma (S and Omega)");
  sums->add_option("--t", sa.t, "comma-separated t values")->required();
  sums->add_flag("--decompose", sa.decompose, "print the S4 = mainterm + Omega decomposition");
  sums->add_option("--out", opt.out, "output path, - for stdout");

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "exact moments of S(t) over PS primes (JSON)");
  moments->add_option("--gamma", ma.gamma, "type gamma")->required();
  moments->add_option("--x", ma.x, "use all PS primes <= X");
  moments->add_option("--size", ma.size, "use the first N PS primes");
  moments->add_option("--m", ma.m, "order m: the moment is int |S|^(2m)")->check(CLI::IsMember({1, 2, 4, 8}));
  moments->add_flag("--quadrature", ma.quadrature, "also compute the sampling oracle");
  moments->add_flag("--spectra", ma.spectra, "also report spectrum summaries");
  moments->add_option("--out", opt.out, "output path, - for stdout");

  GammaArgs ga;
  auto* gamma = app.add_subcommand("gamma", "Gamma(X) directly, via its Fourier decomposition, and B(X) (JSON)");
  gamma->add_option("--config", ga.config, "key=value config file")->required();
  gamma->add_option("--x", ga.x, "use this X instead of q0^(13/6)");
  gamma->add_option("--budget", ga.budget, "maximum integrand evaluations");
  gamma->add_flag("--skip-integral", ga.skip_integral, "omit the Fourier-side quadrature");
  gamma->add_option("--out", opt.out, "output path, - for stdout");

  SolveArgs sv;
  auto* solve = app.add_subcommand("solve", "explicit solution triples (JSON)");
  solve->add_option("--config", sv.config, "key=value config file")->required();
  solve->add_option("--x", sv.x, "use this X instead of q0^(13/6)");
  solve->add_option("--tol", sv.tol, "tolerance (default eps of the schedule)");
  solve->add_option("--limit", sv.limit, "maximum number of triples (0 = all)");
  solve->add_option("--out", opt.out, "output path, - for stdout");

  ConvergentsArgs ca;
  auto* conv = app.add_subcommand("convergents", "continued-fraction convergents a/q");
  conv->add_option("--value", ca.value, "sqrt:N, surd:a,b,n,c, p/q or a decimal")->required();
  conv->add_option("--n", ca.n, "number of convergents");
  conv->add_flag("--csv", ca.csv, "CSV index,partial_quotient,a,q");
  conv->add_option("--out", opt.out, "output path, - for stdout");

  bool determinism = true;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--determinism", determinism, "rerun at 1 and 8 threads and compare (default true)");
  verify->add_option("--out", opt.out, "report path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Manifest m;
  for (auto* sub : app.get_subcommands()) m.command = sub->get_name();
  try {
    int rc = 0;
    if (*primes) {
      m.add("gamma", shortest(pa.gamma));
      write_output(opt.out, run_primes(pa, opt, m));
    } else if (*kernel) {
      write_output(opt.out, run_kernel(ka, m));
    } else if (*sums) {
      write_output(opt.out, run_sums(sa, opt, m));
    } else if (*moments) {
      m.add("gamma", shortest(ma.gamma));
      m.add("m", std::to_string(ma.m));
      if (ma.x > 0.0) m.add("x", shortest(ma.x));
      if (ma.size > 0) m.add("size", std::to_string(ma.size));
      write_output(opt.out, run_moments(ma, opt, m));
    } else if (*gamma) {
      write_output(opt.out, run_gamma(ga, opt, m));
    } else if (*solve) {
      write_output(opt.out, run_solve(sv, opt, m));
    } else if (*conv) {
      m.add("value", ca.value);
      write_output(opt.out, run_convergents(ca, m));
    } else if (*verify) {
      rc = run_verify(opt, determinism, m);
    }
    m.emit_stderr();
    return rc;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 5;
  }
}
