#include "qrh/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <thread>

#include "qrh/bernoulli.hpp"
#include "qrh/errors.hpp"
#include "qrh/qtorus.hpp"
#include "qrh/rhsolver.hpp"
#include "qrh/special.hpp"

namespace qrh {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0, 1};
using CF = CoefficientFunction;

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                      std::uint32_t(index >> 32)};
    g_.seed(seq);
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
  cplx polar(double rlo, double rhi, double alo, double ahi) { return std::polar(uniform(rlo, rhi), uniform(alo, ahi)); }
  cplx disk(double r) {
    for (;;) {
      const cplx z(uniform(-r, r), uniform(-r, r));
      if (std::abs(z) <= r) return z;
    }
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }

 private:
  std::mt19937_64 g_;
};

enum class Role { abs, rel, bound, diagnostic };

struct Metric {
  std::string name;
  double tol;
  Role role;
};

struct Sample {
  std::vector<double> values;  // one per metric; NaN means not measured
  int excluded = 0;            // rejected draws near poles
};

struct Suite {
  std::vector<Metric> metrics;
  int samples;
  std::function<Sample(Rng&, int index)> run;
  std::string note;
};

double rel(cplx got, cplx want) {
  const double d = std::abs(got - want);
  return std::abs(want) > 1e-300 ? d / std::abs(want) : d;
}

// |e^d − 1| without cancellation for small d.
double exp_residual(cplx d) {
  const cplx e = std::exp(kI * d.imag());
  return std::abs(std::expm1(d.real()) * e + (e - 1.0));
}

bool too_many(int excluded) { return excluded > 10000; }

// --- special functions -----------------------------------------------------

Sample reflection(Rng& r, int index) {
  const int sg = index % 2 ? -1 : 1;
  Sample s{{NAN}, 0};
  for (;;) {
    const cplx om = r.polar(0.5, 2, -1, 1);
    cplx u = r.polar(0.2, 4, 0.05, kPi - 0.05);
    if (sg < 0) u = std::conj(u);
    const cplx w = u * om, eta = r.disk(1.5);
    // Principal logs of w and ω: the identity needs Im w on the same side as Im(w/ω).
    if ((w.imag() > 0) != (sg > 0)) continue;
    const Value a = log_lambda({w, eta, om}), b = log_lambda({-w, om - eta, om});
    const cplx e = std::exp(double(sg) * 2 * kPi * kI * (w + eta) / om);
    if (!a || !b || std::abs(1.0 - e) < 1e-3 * std::max(1.0, std::abs(e))) {
      if (too_many(++s.excluded)) throw Error(Errc::unsupported_regime, "reflection: no admissible sample");
      continue;
    }
    s.values[0] = exp_residual(*a + *b + std::log(1.0 - e));
    return s;
  }
}

Sample f_difference(Rng& r, int) {
  Sample s{{NAN}, 0};
  for (;;) {
    const cplx w = r.polar(0.3, 4, -2.5, 2.5), eta = r.disk(1.5);
    const cplx w1 = r.polar(0.4, 2, -1, 1), w2 = r.polar(0.4, 2, -1, 1);
    const Value a = log_f({w, eta + w2, w1, w2}), b = log_f({w, eta, w1, w2});
    const Value l = log_lambda({w, eta, w1});
    if (!a || !b || !l) {
      if (too_many(++s.excluded)) throw Error(Errc::unsupported_regime, "f-difference: no admissible sample");
      continue;
    }
    s.values[0] = exp_residual(*a - *b + *l);
    return s;
  }
}

Sample eq_dilog(Rng& r, int) {
  const cplx q = r.polar(0, 0.9, -kPi, kPi), x = r.disk(0.5);
  const cplx e = quantum_dilog({q, x});
  // E_q(x) = (1 − x)·E_q(qx).
  const double diff = rel(e, (1.0 - x) * quantum_dilog({q, q * x}));
  // 1/E_q(x) = Σ_n x^n/((1−q)⋯(1−q^n)).
  cplx series = 0, term = 1, qn = 1;
  for (int n = 0; n < 100000 && std::abs(term) > 1e-18 * std::abs(series); ++n) {
    series += term;
    qn *= q;
    term *= x / (1.0 - qn);
  }
  return {{diff, rel(1.0 / e, series)}, 0};
}

// The observed order is K+1 only when the first omitted term dominates the next one at
// |w| = 32; draws where it nearly vanishes are redrawn.
bool well_separated(const std::function<cplx(int)>& partial) {
  for (int K = 1; K <= 3; ++K) {
    const cplx a = partial(K + 1) - partial(K), b = partial(K + 2) - partial(K + 1);
    if (std::abs(a) < 8 * std::abs(b)) return false;
  }
  return true;
}

Sample asymptotic(Rng& r, int) {
  for (;;) {
    const cplx dir = std::polar(1.0, r.uniform(-1, 1)), eta = r.disk(0.5);
    const cplx om = r.polar(0.8, 1.5, -0.3, 0.3), w1 = r.polar(0.8, 1.5, -0.3, 0.3), w2 = r.polar(0.8, 1.5, -0.3, 0.3);
    const cplx w0 = 32.0 * dir;
    if (!well_separated([&](int K) { return asymptotic_log_lambda(w0, eta, om, K); }) ||
        !well_separated([&](int K) { return asymptotic_log_f(w0, eta, w1, w2, K); }))
      continue;
    double dl = 0, df = 0;
    for (int K = 1; K <= 3; ++K) {
      auto el = [&](double x) { return std::abs(*log_lambda({x * dir, eta, om}) - asymptotic_log_lambda(x * dir, eta, om, K)); };
      auto ef = [&](double x) {
        return std::abs(*log_f({x * dir, eta, w1, w2}) - asymptotic_log_f(x * dir, eta, w1, w2, K));
      };
      dl = std::max(dl, std::abs(std::log2(el(32) / el(64)) - (K + 1)));
      df = std::max(df, std::abs(std::log2(ef(32) / ef(64)) - (K + 1)));
    }
    return {{dl, df}, 0};
  }
}

Sample stirling_gamma2(Rng& r, int) {
  const cplx x = r.polar(20, 40, -kPi / 3, kPi / 3);
  const cplx w1 = r.polar(0.5, 1.5, -kPi / 4, kPi / 4), w2 = r.polar(0.5, 1.5, -kPi / 4, kPi / 4);
  Gamma2Options o;
  o.extra_shifts = 30;  // force the recurrence path
  return {{rel(gammaN_second_stirling(2, x, 0.0, {w1, w2}, 12), *log_gamma2(x, w1, w2, o))}, 0};
}

Sample stirling_n1(Rng& r, int) {
  const cplx a = r.polar(0.5, 2, -1, 1), delta = r.disk(1);
  const auto e = second_stirling_expansion(1, delta, {a}, 4);
  double worst = std::max({std::abs(e.log_poly[0] - (delta / a - 0.5)), std::abs(e.log_poly[1] - 1.0 / a),
                           std::abs(e.poly[0]), std::abs(e.poly[1] + 1.0 / a)});
  // Classical: Σ_k (−1)^{k+1} a^k B_{k+1}(δ/a)/(k(k+1)) x^{−k}.
  for (int k = 1; k <= 4; ++k) {
    const cplx want = (k % 2 ? 1.0 : -1.0) * std::pow(a, k) * classical_bernoulli(k + 1, delta / a) / double(k * (k + 1));
    worst = std::max(worst, std::abs(e.inv[k - 1] - want));
  }
  return {{worst}, 0};
}

Sample constants_check(Rng&, int) {
  const auto& c = constants();
  const double zp = std::abs(c.zeta_prime_minus_one - zeta_prime_minus_one_em(60, 6));
  // At ω₁ = ω₂ = 1, log Γ₂(x) = −log ρ − log G(x) + (x/2) log 2π; the expansion has no constant.
  const double x = 30;
  const cplx tail = -*log_barnes_g(x) + 0.5 * x * std::log(2 * kPi) - gammaN_second_stirling(2, x, 0.0, {1.0, 1.0}, 10);
  return {{zp, std::abs(tail - c.log_rho)}, 0};
}

// --- doubled A₁ ------------------------------------------------------------

struct A1Draw {
  cplx z, t, tau, theta;
  int side;
};

A1Draw draw_a1(Rng& r) {
  A1Draw p;
  p.z = r.polar(0.5, 2, -kPi, kPi);
  p.side = r.integer(0, 1) ? 1 : -1;
  p.t = double(p.side) * kI * p.z / std::abs(p.z) * std::polar(r.uniform(0.1, 10), r.uniform(0.2, 2 * kPi - 0.2));
  p.tau = cplx(r.uniform(-0.5, 0.5), r.uniform(0.3, 1.5));
  p.theta = cplx(r.uniform(-0.5, 0.5), r.uniform(-0.3, 0.3));
  return p;
}

Sample jump_a1(Rng& r, int index) {
  const bool positive = index % 2 == 0;
  Sample s{{NAN}, 0};
  for (;;) {
    const cplx z = r.polar(0.5, 2, -kPi, kPi);
    cplx t = r.polar(0.1, 10, -kPi, kPi);
    if (((t / z).real() > 0) != positive) t = -t;
    const cplx tau(r.uniform(-0.5, 0.5), r.uniform(0.3, 1.5)), th = r.disk(1);
    if (std::abs(std::arg(t / (kI * z))) < 1e-3 || std::abs(std::arg(t / (-kI * z))) < 1e-3) {
      ++s.excluded;
      continue;
    }
    const Residual res = verify_jump_a1(z, t, tau, th);
    if (res.excluded) {
      if (too_many(++s.excluded)) throw Error(Errc::unsupported_regime, "jump-a1: no admissible sample");
      continue;
    }
    s.values[0] = res.value;
    return s;
  }
}

const std::shared_ptr<const ExtendedContext>& a1_context() {
  static const auto ctx = [] {
    const auto b = doubled_a1(1.0);
    return std::make_shared<const ExtendedContext>(make_context(b, em_splitting(b)));
  }();
  return ctx;
}

Sample adjoint_a1(Rng& r, int) {
  Sample s{{NAN}, 0};
  for (;;) {
    const A1Draw p = draw_a1(r);
    const cplx w = double(p.side) * p.z / (2 * kPi * kI * p.t);
    const CF eta = CF(0.5) * (CF(1.0) + CF::tau()) - CF(double(p.side)) * CF::theta({1});
    const CF psi = pow(CF::f(CF(w), eta, CF(1.0), CF::tau()), -1);
    const Value got = ad(psi, a1_context()).multiplier({1}).eval(p.tau, {p.theta});
    const Value want = solve_a1(p.z, {p.t, p.side, p.tau, p.theta}, 1);
    if (!got || !want) {
      if (too_many(++s.excluded)) throw Error(Errc::unsupported_regime, "adjoint-a1: no admissible sample");
      continue;
    }
    s.values[0] = rel(*got, *want);
    return s;
  }
}

Sample limits_a1(Rng& r, int index) {
  const cplx z = r.polar(0.5, 2, -kPi, kPi);
  const int side = index % 2 ? -1 : 1;
  const cplx tau(r.uniform(-0.5, 0.5), r.uniform(0.3, 1.0));
  const cplx th(r.uniform(-0.5, 0.5), r.uniform(-0.3, 0.3));
  const LimitReport rep = verify_limits_a1(z, side, tau, th);
  return {{rep.zero_limit_residual, rep.monotone_tail ? 0.0 : 1.0, rep.growth_exponent}, 0};
}

// --- general case ----------------------------------------------------------

RefinedBPSStructure refined_structure() {
  auto b = doubled_a1(cplx(0.4, 1.1));
  b.omega[{2, 0}] = {{-1, Rational(1)}, {1, Rational(1)}};
  b.omega[{-2, 0}] = b.omega[{2, 0}];
  return direct_sum(b, doubled_a1(cplx(-1, 0.3)));
}

struct GeneralCase {
  RHInstance inst;
  std::shared_ptr<const ExtendedContext> ctx;
  std::vector<GradedAutomorphism> sq;  // one per active ray
};

const GeneralCase& refined_case() {
  static const GeneralCase g = [] {
    RHInstance inst = make_instance(refined_structure());
    auto ctx = std::make_shared<const ExtendedContext>(make_context(inst.structure, inst.splitting));
    std::vector<GradedAutomorphism> sq;
    for (const auto& ray : inst.rays) sq.push_back(s_q_ray(inst.structure, ctx, inst.refinement, ray));
    return GeneralCase{std::move(inst), ctx, std::move(sq)};
  }();
  return g;
}

std::vector<cplx> draw_theta(Rng& r, int k) {
  std::vector<cplx> th;
  for (int i = 0; i < k; ++i) th.emplace_back(r.uniform(-0.5, 0.5), r.uniform(-0.3, 0.3));
  return th;
}

// A non-active direction r at least 0.05 rad from every active ray.
cplx draw_free_ray(Rng& r, const RHInstance& inst) {
  for (;;) {
    const cplx d = std::polar(1.0, r.uniform(-kPi, kPi));
    bool near = false;
    for (const auto& ray : inst.rays) near |= std::abs(std::arg(ray.phase / d)) < 0.05;
    if (!near) return d;
  }
}

Sample general(Rng& r, int) {
  Sample s{{NAN, NAN}, 0};
  // General product formula on doubled A₁ against the direct formula.
  for (;;) {
    const cplx z = r.polar(0.5, 2, -kPi, kPi);
    const RHInstance inst = make_instance(doubled_a1(z));
    const cplx d = draw_free_ray(r, inst);
    const cplx t = d * std::polar(r.uniform(0.2, 5), r.uniform(-1.3, 1.3));
    const int side = (d / z).imag() < 0 ? 1 : -1;
    const cplx tau(r.uniform(-0.5, 0.5), r.uniform(0.3, 1.5));
    const std::vector<cplx> th = draw_theta(r, 1);
    if (on_excluded_ray(z, t, side)) continue;
    const Value g = solve_general(inst, d, t, tau, th, {0, 1});
    const Value a = solve_a1(z, {t, side, tau, th[0]}, 1);
    if (!g || !a) {
      if (too_many(++s.excluded)) throw Error(Errc::unsupported_regime, "general: no admissible sample");
      continue;
    }
    s.values[0] = rel(*g, *a);
    break;
  }
  // Two perturbed rays across an active ray differ by ε_Z(−t)∘S_q(ℓ)∘ε_Z(t).
  const GeneralCase& gc = refined_case();
  for (;;) {
    const int k = r.integer(0, int(gc.inst.rays.size()) - 1);
    const cplx l = gc.inst.rays[k].phase / std::abs(gc.inst.rays[k].phase);
    const cplx t = l * std::polar(r.uniform(0.2, 5), r.uniform(-1.3, 1.3));
    const cplx tau(r.uniform(-0.5, 0.5), r.uniform(0.3, 1.5));
    const std::vector<cplx> th = draw_theta(r, gc.ctx->electric_dim());
    const cplx rp = l * std::polar(1.0, -1e-3), rm = l * std::polar(1.0, 1e-3);
    const auto jump = compose(eps_z(gc.inst.structure, gc.ctx, -t), compose(gc.sq[k], eps_z(gc.inst.structure, gc.ctx, t)));
    double worst = 0;
    bool ok = true;
    for (int j = 0; j < gc.ctx->magnetic_dim() && ok; ++j) {
      std::vector<long long> dv(gc.ctx->magnetic_dim(), 0);
      dv[j] = 1;
      const Charge beta = gc.ctx->lattice_vector(dv);
      const Value a = log_solve_general(gc.inst, rp, t, tau, th, beta);
      const Value c = log_solve_general(gc.inst, rm, t, tau, th, beta);
      const Value m = jump.multiplier(dv).eval(tau, th);
      ok = a && c && m;
      if (ok) worst = std::max(worst, rel(std::exp(*a - *c), *m));
    }
    if (!ok) {
      if (too_many(++s.excluded)) throw Error(Errc::unsupported_regime, "general: no admissible sample");
      continue;
    }
    s.values[1] = worst;
    return s;
  }
}

Sample adjoint_general_suite(Rng& r, int) {
  const GeneralCase& gc = refined_case();
  Sample s{{NAN}, 0};
  for (;;) {
    const cplx d = draw_free_ray(r, gc.inst);
    const cplx t = d * std::polar(r.uniform(0.2, 5), r.uniform(-1.3, 1.3));
    const cplx tau(r.uniform(-0.5, 0.5), r.uniform(0.3, 1.5));
    const std::vector<cplx> th = draw_theta(r, gc.ctx->electric_dim());
    CF u(1.0);
    for (const auto& g : classes_in_half_plane(gc.inst, d)) {
      const auto c = em_coordinates(gc.inst.splitting, g);
      const std::vector<long long> e(c.begin(), c.begin() + gc.ctx->electric_dim());
      for (const auto& [n, om] : *gc.inst.structure.omega_at(g)) {
        const CF eta = CF(0.5) + CF(0.5 * (n + 1)) * CF::tau() - CF::theta(e);
        u = u * pow(CF::f(CF(gc.inst.structure.Z(g) / (2 * kPi * kI * t)), eta, CF(1.0), CF::tau()),
                    -int(om.numerator()));
      }
    }
    const auto A = ad(u, gc.ctx);
    double worst = 0;
    bool ok = true;
    for (int j = 0; j < gc.ctx->magnetic_dim() && ok; ++j) {
      std::vector<long long> dv(gc.ctx->magnetic_dim(), 0);
      dv[j] = 1;
      const Value got = A.multiplier(dv).eval(tau, th);
      const Value want = solve_general(gc.inst, d, t, tau, th, gc.ctx->lattice_vector(dv));
      ok = got && want;
      if (ok) worst = std::max(worst, rel(*got, *want));
    }
    if (!ok) {
      if (too_many(++s.excluded)) throw Error(Errc::unsupported_regime, "adjoint-general: no admissible sample");
      continue;
    }
    s.values[0] = worst;
    return s;
  }
}

// --- limits in τ -----------------------------------------------------------

struct LimitDraw {
  cplx z, t, theta, w;
  int side;
};

LimitDraw draw_limit(Rng& r, int index) {
  LimitDraw p;
  p.z = r.polar(0.5, 2, -kPi, kPi);
  p.side = index % 2 ? -1 : 1;
  p.t = double(p.side) * p.z * std::polar(r.uniform(0.3, 3), r.uniform(-1.2, 1.2));
  p.theta = cplx(r.uniform(-0.4, 0.4), r.uniform(-0.2, 0.2));
  p.w = double(p.side) * p.z / (2 * kPi * kI * p.t);
  return p;
}

Sample tau_zero(Rng& r, int index) {
  // As τ = is → 0 the poles x = −m − nτ of F fill the quadrant Re x, Im x ≤ 0 of x = w + η;
  // draws closer than 0.25 to it are rejected.
  LimitDraw p;
  int excluded = 0;
  for (;;) {
    p = draw_limit(r, index);
    const cplx x = p.w + 0.5 - double(p.side) * p.theta;
    if (std::hypot(std::max(x.real(), 0.0), std::max(x.imag(), 0.0)) >= 0.25) break;
    if (too_many(++excluded)) throw Error(Errc::unsupported_regime, "tau-zero: no admissible sample");
  }
  const double sd = p.side;
  const HamiltonianLimit h = hamiltonian_limit(p.z, p.t, p.theta, p.side);
  const cplx closed = *h.closed;
  const double ext = std::abs(h.extrapolated - closed) / std::max(1.0, std::abs(closed));
  const cplx want = -sd * 2.0 * kPi * kI * *log_lambda({p.w, 0.5 - sd * p.theta, 1.0});
  const double scale = std::max(1.0, std::abs(want));
  auto deriv = [&](double step) {
    return (*hamiltonian(p.z, p.t, p.theta + step, p.side) - *hamiltonian(p.z, p.t, p.theta - step, p.side)) / (2 * step);
  };
  const cplx d1 = deriv(1e-4), d2 = deriv(5e-5);
  const double der = std::abs(d2 - want) / scale, halving = std::abs(d1 - d2) / scale;
  const cplx lam = *lambda_fn({p.w, 0.5 - sd * p.theta, 1.0});
  const double flow = rel(std::exp(-want / (2 * kPi * kI)), std::pow(lam, p.side));
  return {{ext, der, halving, flow}, excluded};
}

Sample tau_one(Rng& r, int index) {
  const LimitDraw p = draw_limit(r, index);
  const TauFunctionLimit l = tau_function_limit(p.z, p.t, p.theta, p.side);
  const double powered = rel(*l.f_inverse, *l.w_power_form);
  const cplx v(r.uniform(-1, 1), r.uniform(-0.3, 0.3));
  const double finn = rel(std::exp(*log_upsilon(p.w, v) - *log_upsilon(p.w, v - 1.0)), *lambda_fn({p.w, v, 1.0}));
  const double ext = rel(l.extrapolated, *l.f_inverse);
  const double corrected = rel(*l.f_inverse, *l.upsilon);
  return {{powered, finn, ext, corrected}, 0};
}

Sample poles(Rng& r, int) {
  const cplx z = r.polar(0.5, 2, -kPi, kPi);
  const cplx tau(r.uniform(-0.5, 0.5), r.uniform(0.3, 1.5));
  const cplx th(r.uniform(-0.5, 0.5), r.uniform(-0.3, 0.3));
  double worst = 0, missing = 0;
  for (const auto& pl : pole_locations_a1(z, tau, th, 3)) {
    worst = std::max(worst, std::abs(pl.detected - pl.predicted) / std::max(1.0, std::abs(pl.predicted)));
    if (!pl.signalled) missing += 1;
  }
  return {{worst, missing}, 0};
}

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> m = {
      {"reflection", {{{"reflection", 1e-9, Role::rel}}, 400, reflection,
                      "samples alternate between Im(w/ω) > 0 and < 0; w is drawn with Im w on the same side"}},
      {"f-difference", {{{"difference", 1e-8, Role::rel}}, 200, f_difference, ""}},
      {"eq-dilog", {{{"difference", 1e-12, Role::rel}, {"series", 1e-12, Role::rel}}, 200, eq_dilog, "|q| <= 0.9, |x| <= 0.5"}},
      {"asymptotic",
       {{{"lambda_exponent_deviation", 0.2, Role::bound}, {"f_exponent_deviation", 0.2, Role::bound}}, 20, asymptotic,
        "error-decay exponent between |w| = 32 and 64 against K+1, K = 1, 2, 3; draws where the first omitted term is under 8x the next one at |w| = 32 are redrawn"}},
      {"stirling-gamma2", {{{"relative", 1e-9, Role::rel}}, 50, stirling_gamma2, "|x| in [20, 40], Re(omega_i) > 0"}},
      {"stirling-n1", {{{"coefficients", 1e-12, Role::abs}}, 20, stirling_n1, ""}},
      {"jump-a1", {{{"jump", 1e-9, Role::rel}}, 200, jump_a1, "samples alternate between Re(t/z) > 0 and < 0"}},
      {"adjoint-a1", {{{"ad_vs_solution", 1e-8, Role::rel}}, 50, adjoint_a1, ""}},
      {"limits-a1",
       {{{"zero_limit_residual", 1e-6, Role::abs}, {"non_monotone_tail", 0.5, Role::bound}, {"growth_exponent", 5, Role::bound}},
        20, limits_a1, "t0 = 1e-3*(+-z); |theta| <= 0.5, Im tau in [0.3, 1]"}},
      {"general",
       {{{"a1_specialization", 1e-12, Role::rel}, {"two_ray_jump", 1e-9, Role::rel}}, 50, general, ""}},
      {"adjoint-general", {{{"ad_vs_solution", 1e-8, Role::rel}}, 50, adjoint_general_suite, ""}},
      {"tau-zero",
       {{{"extrapolated_vs_closed", 1e-5, Role::rel},
         {"hamiltonian_derivative", 1e-6, Role::abs},
         {"step_halving", 1e-6, Role::abs},
         {"classical_flow", 1e-12, Role::rel}},
        20, tau_zero, "tau_j = 0.1i*2^-j, four Richardson levels; w + eta kept 0.25 away from the quadrant Re, Im <= 0"}},
      {"tau-one",
       {{{"w_power_form", 1e-9, Role::rel},
         {"upsilon_difference", 1e-9, Role::rel},
         {"extrapolated_limit", 1e-5, Role::rel},
         {"f_inverse_vs_upsilon", 1e-9, Role::diagnostic}},
        50, tau_one,
        "w_power_form checks F(w,1-+theta|1,1)^-1 = w^(-1/12)*Upsilon(w,-+theta); f_inverse_vs_upsilon is the identity without the "
        "w^(-1/12) factor"}},
      {"poles", {{{"location", 1e-8, Role::abs}, {"missing_signal", 0.5, Role::bound}}, 20, poles, "|n| <= 3"}},
      {"constants", {{{"zeta_prime_minus_one", 1e-9, Role::abs}, {"rho_constant_term", 1e-8, Role::abs}}, 1, constants_check, ""}},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "reflection", "f-difference", "eq-dilog", "asymptotic", "stirling-gamma2", "stirling-n1", "jump-a1", "adjoint-a1",
      "limits-a1", "general", "adjoint-general", "tau-zero", "tau-one", "poles", "constants"};
  return names;
}

bool is_suite(const std::string& name) { return registry().count(name) > 0; }

int default_samples(const std::string& suite) {
  const auto it = registry().find(suite);
  if (it == registry().end()) throw Error(Errc::invalid_argument, "unknown suite: " + suite);
  return it->second.samples;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& opt) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(Errc::invalid_argument, "unknown suite: " + name);
  const Suite& suite = it->second;
  const int n = opt.samples > 0 ? opt.samples : suite.samples;

  std::vector<Sample> results(n);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int i; (i = next++) < n && !failed;) {
      try {
        Rng r(opt.seed, std::uint64_t(i));
        results[i] = suite.run(r, i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(std::max(1, n)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  SuiteReport rep;
  rep.suite = name;
  rep.seed = opt.seed;
  rep.samples = n;
  rep.note = suite.note;
  for (size_t m = 0; m < suite.metrics.size(); ++m) {
    const Metric& mt = suite.metrics[m];
    CheckResult c{mt.name, 0, mt.tol, false, mt.role == Role::diagnostic};
    if (m == 0 && opt.tol) c.tol = *opt.tol;
    bool measured = false, bad = false;
    for (const auto& s : results) {
      const double v = s.values.at(m);
      if (std::isnan(v)) continue;
      measured = true;
      if (!std::isfinite(v)) bad = true;
      c.max = std::max(c.max, v);
    }
    c.pass = measured && !bad && (mt.role == Role::bound ? c.max <= c.tol : c.max < c.tol);
    if (bad) c.max = INFINITY;
    if (mt.role == Role::abs) rep.max_abs_residual = std::max(rep.max_abs_residual, c.max);
    if (mt.role == Role::rel) rep.max_rel_residual = std::max(rep.max_rel_residual, c.max);
    rep.checks.push_back(c);
  }
  for (const auto& s : results) rep.excluded_near_pole += s.excluded;
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) { return c.diagnostic || c.pass; });
  return rep;
}

nlohmann::json to_json(const SuiteReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j = {{"name", c.name}, {"max", num(c.max)}, {"tol", c.tol}, {"pass", c.pass}};
    if (c.diagnostic) j["diagnostic"] = true;
    checks.push_back(j);
  }
  nlohmann::json j = {{"suite", r.suite},
                      {"seed", r.seed},
                      {"samples", r.samples},
                      {"max_abs_residual", num(r.max_abs_residual)},
                      {"max_rel_residual", num(r.max_rel_residual)},
                      {"excluded_near_pole", r.excluded_near_pole},
                      {"pass", r.pass},
                      {"checks", checks}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace qrh
