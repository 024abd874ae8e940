#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qrh/bernoulli.hpp"
#include "qrh/bps_json.hpp"
#include "qrh/errors.hpp"
#include "qrh/rhsolver.hpp"
#include "qrh/special.hpp"
#include "qrh/verify.hpp"

namespace qrh::cli {

namespace {

using nlohmann::json;
constexpr double kPi = 3.14159265358979323846;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ComplexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_real(std::string_view s, const std::string& whole) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("malformed complex literal '" + whole + "'");
  return v;
}

std::string fmt(double v, int digits) {
  if (v == 0) v = 0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double rounded(double v, int digits) { return std::strtod(fmt(v, digits).c_str(), nullptr); }

// Named arguments shared by eval and grid.
struct Args {
  std::map<std::string, std::string> text;
  std::map<std::string, int> ints;
  std::string side, bps;
  bool adjoint = false, extrapolate = false, log = false;

  bool has(const std::string& k) const { return text.count(k) > 0; }
  cplx c(const std::string& k, std::optional<cplx> dflt = {}) const {
    const auto it = text.find(k);
    if (it == text.end()) {
      if (dflt) return *dflt;
      throw UsageError("missing --" + k);
    }
    try {
      return parse_complex(it->second);
    } catch (const std::invalid_argument& e) {
      throw ComplexError(e.what());
    }
  }
  std::vector<cplx> list(const std::string& k) const {
    const auto it = text.find(k);
    if (it == text.end()) throw UsageError("missing --" + k);
    try {
      return parse_complex_list(it->second);
    } catch (const std::invalid_argument& e) {
      throw ComplexError(e.what());
    }
  }
  int i(const std::string& k, std::optional<int> dflt = {}) const {
    const auto it = ints.find(k);
    if (it == ints.end()) {
      if (dflt) return *dflt;
      throw UsageError("missing --" + k);
    }
    return it->second;
  }
  int side_sign() const {
    if (side.empty() || side == "+" || side == "1" || side == "+1") return 1;
    if (side == "-" || side == "-1") return -1;
    throw UsageError("--side must be + or -");
  }
};

const std::vector<std::string> kComplexArgs = {"w", "eta", "omega", "omega1", "omega2", "x",  "s",
                                               "q", "z",   "t",     "tau",    "theta",  "ray", "a"};
const std::vector<std::string> kIntArgs = {"N", "k", "n"};

struct Result {
  Value v;
  bool is_log = false;
};

using Evaluator = std::function<Result(cplx t)>;

struct FunctionSpec {
  bool t_dependent;
  std::function<Evaluator(const Args&, const CliConfig&)> make;
};

int levels(const CliConfig& cfg, const std::string& fn) {
  const auto it = cfg.truncation.find(fn);
  return it == cfg.truncation.end() ? 4 : it->second;
}

std::vector<long long> parse_ints(const std::string& s) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    long long v = 0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size())
      throw UsageError("malformed integer list '" + s + "'");
    out.push_back(v);
  }
  return out;
}

RHInstance load_instance(const std::string& path) {
  if (path.empty()) throw UsageError("psi_general needs --bps <file>");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  return make_instance(bps_from_json(j));
}

const std::map<std::string, FunctionSpec>& functions() {
  static const std::map<std::string, FunctionSpec> m = {
      {"bernoulli", {false, [](const Args& a, const CliConfig&) -> Evaluator {
                       const auto per = a.list("a");
                       if (a.i("N", int(per.size())) != int(per.size())) throw UsageError("--N must equal the number of periods");
                       const int k = a.i("k");
                       const cplx x = a.c("x");
                       return [=](cplx) { return Result{multi_bernoulli(k, x, per), false}; };
                     }}},
      {"zeta", {false, [](const Args& a, const CliConfig&) -> Evaluator {
                  const auto per = a.list("a");
                  if (a.i("N", int(per.size())) != int(per.size())) throw UsageError("--N must equal the number of periods");
                  const cplx s = a.c("s"), x = a.c("x");
                  return [=](cplx) { return Result{barnes_zeta(int(per.size()), s, x, per), false}; };
                }}},
      {"gamma1", {false, [](const Args& a, const CliConfig&) -> Evaluator {
                    const cplx x = a.c("x"), p = a.c("a", cplx(1));
                    return [=](cplx) { return Result{log_gamma1(x, p), true}; };
                  }}},
      {"gamma2", {false, [](const Args& a, const CliConfig&) -> Evaluator {
                    const cplx x = a.c("x"), w1 = a.c("omega1", cplx(1)), w2 = a.c("omega2", cplx(1));
                    return [=](cplx) { return Result{log_gamma2(x, w1, w2), true}; };
                  }}},
      {"lambda", {false, [](const Args& a, const CliConfig&) -> Evaluator {
                    const cplx w = a.c("w"), eta = a.c("eta"), om = a.c("omega", cplx(1));
                    return [=](cplx) { return Result{log_lambda({w, eta, om}), true}; };
                  }}},
      {"f", {false, [](const Args& a, const CliConfig&) -> Evaluator {
               const cplx w = a.c("w"), eta = a.c("eta"), w1 = a.c("omega1", cplx(1)), w2 = a.c("omega2", cplx(1));
               return [=](cplx) { return Result{log_f({w, eta, w1, w2}), true}; };
             }}},
      {"eq", {false, [](const Args& a, const CliConfig&) -> Evaluator {
                const cplx q = a.c("q"), x = a.c("x");
                return [=](cplx) { return Result{quantum_dilog({q, x}), false}; };
              }}},
      {"delta", {false, [](const Args& a, const CliConfig&) -> Evaluator {
                   const cplx w = a.c("w"), eta = a.c("eta");
                   return [=](cplx) { return Result{log_delta(w, eta), true}; };
                 }}},
      {"upsilon", {false, [](const Args& a, const CliConfig&) -> Evaluator {
                     const cplx w = a.c("w"), th = a.c("theta");
                     return [=](cplx) { return Result{log_upsilon(w, th), true}; };
                   }}},
      {"psi_a1", {true, [](const Args& a, const CliConfig&) -> Evaluator {
                    const cplx z = a.c("z"), tau = a.c("tau", cplx(0, 1)), th = a.c("theta", cplx(0));
                    const int side = a.side_sign(), n = a.i("n", 1);
                    const bool adj = a.adjoint;
                    return [=](cplx t) {
                      const EvaluationPoint p{t, side, tau, th};
                      return Result{adj ? log_adjoint_psi_a1(z, p) : log_solve_a1(z, p, n), true};
                    };
                  }}},
      {"psi_general", {true, [](const Args& a, const CliConfig&) -> Evaluator {
                         const auto inst = std::make_shared<RHInstance>(load_instance(a.bps));
                         const cplx ray = a.c("ray"), tau = a.c("tau", cplx(0, 1));
                         const auto th = a.has("theta") ? a.list("theta") : std::vector<cplx>(inst->splitting.electric_basis.size());
                         const bool adj = a.adjoint;
                         Charge beta;
                         if (!adj) {
                           if (!a.has("beta")) throw UsageError("missing --beta");
                           beta = parse_ints(a.text.at("beta"));
                         }
                         return [=](cplx t) {
                           return Result{adj ? log_adjoint_general(*inst, ray, t, tau, th)
                                             : log_solve_general(*inst, ray, t, tau, th, beta),
                                         true};
                         };
                       }}},
      {"hamiltonian", {true, [](const Args& a, const CliConfig& cfg) -> Evaluator {
                         const cplx z = a.c("z"), th = a.c("theta", cplx(0));
                         const int side = a.side_sign();
                         const bool ext = a.extrapolate;
                         const ExtrapolationOptions o{0.1, levels(cfg, "hamiltonian")};
                         return [=](cplx t) {
                           if (ext) return Result{hamiltonian_limit(z, t, th, side, o).extrapolated, false};
                           return Result{hamiltonian(z, t, th, side), false};
                         };
                       }}},
      {"tau", {true, [](const Args& a, const CliConfig& cfg) -> Evaluator {
                 const cplx z = a.c("z"), th = a.c("theta", cplx(0));
                 const int side = a.side_sign();
                 const bool ext = a.extrapolate;
                 const ExtrapolationOptions o{0.5, levels(cfg, "tau")};
                 return [=](cplx t) {
                   if (ext) return Result{tau_function_limit(z, t, th, side, o).extrapolated, false};
                   if (on_excluded_ray(z, t, side)) throw Error(Errc::domain, "t lies on the excluded ray");
                   const cplx w = double(side) * z / (2 * kPi * cplx(0, 1) * t);
                   return Result{log_upsilon(w, -double(side) * th), true};
                 };
               }}},
  };
  return m;
}

Value finish(const Result& r, bool want_log) {
  if (!r.v) return r.v;
  if (r.is_log == want_log) return r.v;
  return want_log ? Value(std::log(r.v.value())) : Value(std::exp(r.v.value()));
}

json complex_json(cplx v, int digits) { return {{"re", rounded(v.real(), digits)}, {"im", rounded(v.imag(), digits)}}; }

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& out) {
  if (path.empty() || path == "-") return out;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw OutputError("cannot write " + path);
  return file;
}

void load_config(const std::string& path, CliConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  try {
    const json j = json::parse(in);
    for (const auto& [k, v] : j.items()) {
      if (k == "tolerances") cfg.tolerances = v.get<std::map<std::string, double>>();
      else if (k == "truncation") cfg.truncation = v.get<std::map<std::string, int>>();
      else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (k == "format") cfg.format = v.get<std::string>();
      else if (k == "digits") cfg.digits = v.get<int>();
      else throw UsageError("unknown config key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void validate(const CliConfig& cfg) {
  if (cfg.digits < 1 || cfg.digits > 17) throw UsageError("--digits must be in 1..17");
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "text")
    throw UsageError("--format must be json, csv or text");
  for (const auto& [k, v] : cfg.truncation)
    if (v < 0 || v > 12) throw UsageError("truncation for " + k + " must be in 0..12");
}

int cmd_eval(const std::string& fn, const Args& a, const CliConfig& cfg, std::ostream& out) {
  const auto it = functions().find(fn);
  if (it == functions().end()) throw UsageError("unknown function '" + fn + "'");
  if (it->second.t_dependent && !a.has("t")) throw UsageError("missing --t");
  const cplx t = it->second.t_dependent ? a.c("t") : cplx(0);
  const Evaluator ev = it->second.make(a, cfg);
  const Value v = finish(ev(t), a.log);
  const int d = cfg.digits;
  if (cfg.format == "json") {
    json j = {{"function", fn}, {"log", a.log}};
    if (v) {
      j["status"] = "finite";
      j["value"] = complex_json(*v, d);
    } else {
      j["status"] = signal_name(v.sig().kind);
      j["value"] = nullptr;
      j["location"] = complex_json(v.sig().location, d);
      j["source"] = v.sig().source;
    }
    out << j.dump() << "\n";
  } else if (cfg.format == "csv") {
    out << "value_re,value_im,status\n";
    if (v) out << fmt(v.value().real(), d) << "," << fmt(v.value().imag(), d) << ",ok\n";
    else out << ",," << signal_name(v.sig().kind) << "\n";
  } else if (v) {
    out << format_complex(*v, d) << "\n";
  } else {
    out << signal_name(v.sig().kind) << " at " << format_complex(v.sig().location, d) << " (" << v.sig().source << ")\n";
  }
  return v ? ok : signalled;
}

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError(std::string(what) + " expects MIN,MAX");
  try {
    return {parse_real(std::string_view(s).substr(0, comma), s), parse_real(std::string_view(s).substr(comma + 1), s)};
  } catch (const std::invalid_argument& e) {
    throw ComplexError(e.what());
  }
}

struct GridSpec {
  std::string re, im, radius;
  int nx = 0, ny = 0, nr = 0, nphi = 0;
  double phase = 0;
  std::string out;
};

int cmd_grid(const std::string& fn, const Args& a, const GridSpec& g, const CliConfig& cfg, std::ostream& out) {
  const auto it = functions().find(fn);
  if (it == functions().end()) throw UsageError("unknown function '" + fn + "'");
  if (!it->second.t_dependent) throw UsageError(fn + " does not depend on t");
  std::vector<cplx> ts;
  const bool rect = !g.re.empty() || !g.im.empty();
  if (rect == !g.radius.empty()) throw UsageError("give either --re/--im or --radius");
  if (rect) {
    const auto [x0, x1] = parse_pair(g.re, "--re");
    const auto [y0, y1] = parse_pair(g.im, "--im");
    if (g.nx < 1 || g.ny < 1) throw UsageError("--nx and --ny must be positive");
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        ts.emplace_back(g.nx == 1 ? x0 : x0 + (x1 - x0) * i / (g.nx - 1), g.ny == 1 ? y0 : y0 + (y1 - y0) * j / (g.ny - 1));
  } else {
    const auto [r0, r1] = parse_pair(g.radius, "--radius");
    if (g.nr < 1 || g.nphi < 1 || !(r0 > 0) || r1 < r0) throw UsageError("bad annulus");
    for (int j = 0; j < g.nr; ++j) {
      const double r = g.nr == 1 ? r0 : r0 + (r1 - r0) * j / (g.nr - 1);
      for (int i = 0; i < g.nphi; ++i) ts.push_back(std::polar(r, g.phase + 2 * kPi * i / g.nphi));
    }
  }
  const Evaluator ev = it->second.make(a, cfg);
  std::ofstream file;
  std::ostream& os = open_output(g.out, file, out);
  const int d = cfg.digits;
  os << "t_re,t_im,value_re,value_im,status\n";
  for (const cplx t : ts) {
    os << fmt(t.real(), d) << "," << fmt(t.imag(), d) << ",";
    std::string status = "ok";
    Value v;
    try {
      v = finish(ev(t), a.log);
      if (!v) status = signal_name(v.sig().kind);
    } catch (const Error& e) {
      status = e.code() == Errc::domain ? "excluded" : "error";
    }
    if (status == "ok") os << fmt(v.value().real(), d) << "," << fmt(v.value().imag(), d) << ",ok\n";
    else os << ",," << status << "\n";
  }
  os.flush();
  if (!os) throw OutputError("write failed");
  return ok;
}

SuiteOptions suite_options(const std::string& suite, const CliConfig& cfg, int samples, unsigned threads,
                           std::optional<double> tol) {
  SuiteOptions o;
  o.seed = cfg.seed;
  o.samples = samples;
  o.threads = threads;
  const auto it = cfg.tolerances.find(suite);
  if (it != cfg.tolerances.end()) o.tol = it->second;
  if (tol) o.tol = tol;
  return o;
}

int cmd_verify(const std::string& suite, int samples, unsigned threads, std::optional<double> tol, const std::string& path,
               const CliConfig& cfg, std::ostream& out) {
  if (suite != "all" && !is_suite(suite)) throw UsageError("unknown suite '" + suite + "'");
  if (suite == "all" && tol) throw UsageError("--tol needs a single suite; use the config file for per-suite tolerances");
  std::ofstream file;
  std::ostream& os = open_output(path, file, out);
  if (suite != "all") {
    const SuiteReport r = run_suite(suite, suite_options(suite, cfg, samples, threads, tol));
    os << to_json(r).dump(2) << "\n";
    return r.pass ? ok : failure;
  }
  json reports = json::array();
  bool pass = true;
  for (const auto& name : suite_names()) {
    const SuiteReport r = run_suite(name, suite_options(name, cfg, samples, threads, {}));
    pass = pass && r.pass;
    reports.push_back(to_json(r));
  }
  os << json{{"suite", "all"}, {"seed", cfg.seed}, {"pass", pass}, {"reports", reports}}.dump(2) << "\n";
  return pass ? ok : failure;
}

int cmd_report(const std::string& path, unsigned threads, const CliConfig& cfg, std::ostream& out) {
  std::ofstream file;
  std::ostream& os = open_output(path, file, out);
  std::vector<SuiteReport> reps;
  bool pass = true;
  for (const auto& name : suite_names()) {
    reps.push_back(run_suite(name, suite_options(name, cfg, 0, threads, {})));
    pass = pass && reps.back().pass;
  }
  const auto& c = constants();
  const int d = cfg.digits;
  if (cfg.format == "json") {
    json rs = json::array();
    for (const auto& r : reps) rs.push_back(to_json(r));
    os << json{{"seed", cfg.seed},
               {"pass", pass},
               {"constants", {{"zeta_prime_minus_one", c.zeta_prime_minus_one}, {"log_rho", c.log_rho}, {"rho", c.rho}}},
               {"reports", rs}}
              .dump(2)
       << "\n";
  } else if (cfg.format == "csv") {
    os << "suite,samples,max_abs_residual,max_rel_residual,excluded_near_pole,pass\n";
    for (const auto& r : reps)
      os << r.suite << "," << r.samples << "," << fmt(r.max_abs_residual, d) << "," << fmt(r.max_rel_residual, d) << ","
         << r.excluded_near_pole << "," << (r.pass ? "true" : "false") << "\n";
  } else {
    os << "seed " << cfg.seed << "\n";
    os << "zeta'(-1) = " << fmt(c.zeta_prime_minus_one, d) << ", rho = " << fmt(c.rho, d) << "\n\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %7s %12s %12s %8s  %s\n", "suite", "samples", "max_abs", "max_rel", "excluded",
                  "result");
    os << line;
    for (const auto& r : reps) {
      std::snprintf(line, sizeof line, "%-16s %7d %12.3e %12.3e %8d  %s\n", r.suite.c_str(), r.samples, r.max_abs_residual,
                    r.max_rel_residual, r.excluded_near_pole, r.pass ? "PASS" : "FAIL");
      os << line;
      for (const auto& ch : r.checks)
        if (!ch.pass && !ch.diagnostic) os << "    " << ch.name << ": " << fmt(ch.max, 4) << " (tol " << fmt(ch.tol, 4) << ")\n";
    }
    os << "\n" << (pass ? "all suites pass" : "some suites fail") << "\n";
  }
  os.flush();
  if (!os) throw OutputError("write failed");
  return pass ? ok : failure;
}

void add_function_args(CLI::App* sub, Args& a) {
  for (const auto& k : kComplexArgs) sub->add_option_function<std::string>("--" + k, [&a, k](const std::string& v) { a.text[k] = v; });
  sub->add_option_function<std::string>("--beta", [&a](const std::string& v) { a.text["beta"] = v; }, "magnetic class, e.g. 0,1");
  for (const auto& k : kIntArgs) sub->add_option_function<int>("--" + k, [&a, k](int v) { a.ints[k] = v; });
  sub->add_option("--side", a.side, "+ or -");
  sub->add_option("--bps", a.bps, "BPS structure JSON (psi_general)");
  sub->add_flag("--adjoint", a.adjoint, "adjoint form ψ instead of the multiplier");
  sub->add_flag("--extrapolate", a.extrapolate, "hamiltonian, tau: extrapolated limit");
  sub->add_flag("--log", a.log, "print the logarithm");
}

}  // namespace

cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma != std::string::npos)
    return {parse_real(std::string_view(s).substr(0, comma), s), parse_real(std::string_view(s).substr(comma + 1), s)};
  std::string_view v(s);
  while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
  while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
  if (v.empty()) throw std::invalid_argument("empty complex literal");
  if (v.back() != 'i' && v.back() != 'j') return parse_real(v, s);
  v.remove_suffix(1);
  // Split at the last sign that is not a leading sign or part of an exponent.
  size_t split = std::string_view::npos;
  for (size_t k = v.size(); k-- > 1;)
    if ((v[k] == '+' || v[k] == '-') && v[k - 1] != 'e' && v[k - 1] != 'E') {
      split = k;
      break;
    }
  auto imag = [&](std::string_view u) {
    if (u.empty() || u == "+") return 1.0;
    if (u == "-") return -1.0;
    return parse_real(u, s);
  };
  if (split == std::string_view::npos) return {0, imag(v)};
  return {parse_real(v.substr(0, split), s), imag(v.substr(split))};
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  const bool semis = s.find(';') != std::string::npos;
  const bool imag = s.find_first_of("ij") != std::string::npos;
  const char sep = semis || imag ? ';' : ',';
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_complex(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::string format_complex(cplx v, int digits) {
  if (v.imag() == 0) return fmt(v.real(), digits);
  const std::string im = fmt(std::abs(v.imag()), digits) + "i";
  if (v.real() == 0) return (v.imag() < 0 ? "-" : "") + im;
  return fmt(v.real(), digits) + (v.imag() < 0 ? "-" : "+") + im;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Riemann-Hilbert solver: special functions, solutions and verification suites", "qrh"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the command
  CliConfig cfg;
  std::string config_path, format;
  std::uint64_t seed = 0;
  int digits = 0;
  std::optional<double> tol;
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* fmt_opt = app.add_option("--format", format, "json, csv or text");
  auto* dig_opt = app.add_option("--digits", digits, "printed significant digits (<= 17)");
  app.add_option_function<double>("--tol", [&tol](double v) { tol = v; }, "tolerance override for verify");
  app.add_option("--config", config_path, "CliConfig JSON");

  Args eargs, gargs;
  std::string efn, gfn, suite, vout, rout;
  int samples = 0;
  unsigned threads = 0;
  GridSpec g;

  auto* eval = app.add_subcommand("eval", "evaluate a function");
  eval->add_option("function", efn)->required();
  add_function_args(eval, eargs);

  auto* verify = app.add_subcommand("verify", "run a verification suite (or all)");
  verify->add_option("suite", suite)->required();
  verify->add_option("--samples", samples, "number of draws (default: the suite's)");
  verify->add_option("--threads", threads, "worker threads (default: all cores)");
  verify->add_option("--out", vout, "write the report here instead of stdout");

  auto* grid = app.add_subcommand("grid", "evaluate on a grid of t values, CSV");
  grid->add_option("function", gfn)->required();
  add_function_args(grid, gargs);
  grid->add_option("--re", g.re, "rectangle: MIN,MAX of Re t");
  grid->add_option("--im", g.im, "rectangle: MIN,MAX of Im t");
  grid->add_option("--nx", g.nx);
  grid->add_option("--ny", g.ny);
  grid->add_option("--radius", g.radius, "annulus: MIN,MAX of |t|");
  grid->add_option("--nr", g.nr);
  grid->add_option("--nphi", g.nphi);
  grid->add_option("--phase", g.phase, "annulus: first angle");
  grid->add_option("--out", g.out, "CSV path (default stdout)");

  auto* report = app.add_subcommand("report", "run every suite and summarize");
  report->add_option("--out", rout);
  report->add_option("--threads", threads);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    if (!config_path.empty()) load_config(config_path, cfg);
    if (seed_opt->count()) cfg.seed = seed;
    if (fmt_opt->count()) cfg.format = format;
    if (dig_opt->count()) cfg.digits = digits;
    validate(cfg);
    if (eval->parsed()) return cmd_eval(efn, eargs, cfg, out);
    if (verify->parsed()) return cmd_verify(suite, samples, threads, tol, vout, cfg, out);
    if (grid->parsed()) return cmd_grid(gfn, gargs, g, cfg, out);
    if (report->parsed()) return cmd_report(rout, threads, cfg, out);
    throw UsageError("no command");
  } catch (const CLI::CallForHelp&) {
    for (auto* sub : {eval, verify, grid, report})
      if (sub->parsed()) {
        out << sub->help();
        return ok;
      }
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n";
    return usage;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return usage;
  } catch (const ComplexError& e) {
    err << e.what() << "\n";
    return bad_complex;
  } catch (const OutputError& e) {
    err << e.what() << "\n";
    return cant_create;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return failure;
  }
}

}  // namespace qrh::cli
