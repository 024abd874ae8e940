#include "qrh/rhsolver.hpp"

#include <cmath>

#include "qrh/errors.hpp"
#include "qrh/special.hpp"

namespace qrh {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0, 1};

int side_sign(int side) {
  if (side != 1 && side != -1) throw Error(Errc::invalid_argument, "side must be +1 or -1");
  return side;
}

cplx a1_w(cplx z, cplx t, int s) {
  if (z == cplx(0)) throw Error(Errc::invalid_argument, "z must be non-zero");
  if (t == cplx(0)) throw Error(Errc::invalid_argument, "t must be non-zero");
  return double(s) * z / (2 * kPi * kI * t);
}

// Adds k·log v into acc; a signal in v is raised with the orientation of k.
bool accumulate(cplx& acc, const Value& v, double k, Value& sig) {
  if (!v) {
    sig = k > 0 ? v : v.flipped();
    return false;
  }
  acc += k * v.value();
  return true;
}

Value exp_value(const Value& v) { return v ? Value(std::exp(v.value())) : v; }

cplx electric_theta(const RHInstance& inst, const Charge& g, const std::vector<cplx>& theta) {
  const auto c = em_coordinates(inst.splitting, g);
  const size_t e = inst.splitting.electric_basis.size();
  if (theta.size() != e) throw Error(Errc::invalid_argument, "theta has the wrong dimension");
  for (size_t i = e; i < c.size(); ++i)
    if (c[i] != 0) throw Error(Errc::unsupported_structure, "active class is not electric");
  cplx r = 0;
  for (size_t i = 0; i < e; ++i) r += double(c[i]) * theta[i];
  return r;
}

void check_half_plane(const RHInstance& inst, cplx r, cplx t) {
  if (r == cplx(0)) throw Error(Errc::invalid_argument, "ray phase must be non-zero");
  for (const auto& ray : inst.rays) {
    const cplx q = ray.phase / r;
    if (std::abs(q.imag()) <= 1e-14 * std::abs(q) && q.real() > 0)
      throw Error(Errc::degenerate_ray, "r is an active ray");
  }
  if (!((t / r).real() > 0)) throw Error(Errc::domain, "t must lie in the half-plane H_r");
}

double to_double(const Rational& q) { return double(q.numerator()) / double(q.denominator()); }

}  // namespace

RHInstance make_instance(const RefinedBPSStructure& b, const std::optional<EMSplitting>& s) {
  b.validate();
  const Classification c = classify(b);
  if (!c.all()) throw Error(Errc::unsupported_structure, "structure must be finite, uncoupled, palindromic and integral");
  return RHInstance{b, em_splitting(b, s ? s : b.splitting), canonical_refinement(b), active_rays(b)};
}

bool on_excluded_ray(cplx z, cplx t, int side) {
  const cplx w = a1_w(z, t, side_sign(side));
  return w.real() < 0 && std::abs(w.imag()) <= 1e-14 * std::abs(w);
}

Value log_solve_a1(cplx z, const EvaluationPoint& p, int n) {
  const int s = side_sign(p.side);
  if (on_excluded_ray(z, p.t, s)) throw Error(Errc::domain, "t lies on the excluded ray");
  const cplx w = a1_w(z, p.t, s);
  cplx acc = 0;
  Value sig;
  const int lo = n > 0 ? 0 : n, hi = n > 0 ? n : 0;
  const double k = n > 0 ? s : -s;
  for (int j = lo; j < hi; ++j) {
    const cplx eta = 0.5 - double(s) * (p.theta + (j + 0.5) * p.tau);
    if (!accumulate(acc, log_lambda({w, eta, 1.0}), k, sig)) return sig;
  }
  return acc;
}

Value solve_a1(cplx z, const EvaluationPoint& p, int n) { return exp_value(log_solve_a1(z, p, n)); }

Value log_adjoint_psi_a1(cplx z, const EvaluationPoint& p) {
  const int s = side_sign(p.side);
  if (on_excluded_ray(z, p.t, s)) throw Error(Errc::domain, "t lies on the excluded ray");
  const cplx w = a1_w(z, p.t, s);
  const Value f = log_f({w, 0.5 * (1.0 + p.tau) - double(s) * p.theta, 1.0, p.tau});
  if (!f) return f.flipped();
  return -f.value();
}

Value adjoint_psi_a1(cplx z, const EvaluationPoint& p) { return exp_value(log_adjoint_psi_a1(z, p)); }

Residual verify_jump_a1(cplx z, cplx t, cplx tau, cplx theta) {
  const double re = (t / z).real();
  if (re == 0) throw Error(Errc::domain, "t lies on the boundary between the two cases");
  const int s = re > 0 ? 1 : -1;
  if (on_excluded_ray(z, t, 1) || on_excluded_ray(z, t, -1))
    throw Error(Errc::domain, "t lies on an excluded ray");
  const cplx w = a1_w(z, t, 1);
  const cplx eta = theta + 0.5 * tau;
  const Value lhs = log_lambda({w, 0.5 - eta, 1.0});
  const Value rhs = log_lambda({-w, 0.5 + eta, 1.0});
  const cplx x = std::exp(double(s) * (kPi * kI * tau - z / t + 2 * kPi * kI * theta));
  const cplx jump = 1.0 + x;
  Residual r;
  if (!lhs || !rhs || std::abs(jump) < 1e-3 * std::max(1.0, std::abs(x))) {
    r.excluded = true;
    return r;
  }
  const cplx d = lhs.value() + rhs.value() + std::log(jump);
  r.value = std::abs(std::expm1(d.real()) * std::exp(kI * d.imag()) + (std::exp(kI * d.imag()) - 1.0));
  return r;
}

LimitReport verify_limits_a1(cplx z, int side, cplx tau, cplx theta, const LimitOptions& opt) {
  const int s = side_sign(side);
  LimitReport rep;
  const cplx t0 = opt.t0_scale * double(s) * z * std::polar(1.0, opt.t0_phase);
  for (int j = 1; j <= opt.zero_steps; ++j) {
    const Value v = log_solve_a1(z, {t0 * std::ldexp(1.0, -j), s, tau, theta}, 1);
    rep.zero_residuals.push_back(v ? std::abs(std::exp(v.value()) - 1.0) : INFINITY);
  }
  if (!rep.zero_residuals.empty()) rep.zero_limit_residual = rep.zero_residuals.back();
  rep.monotone_tail = true;
  const size_t m = rep.zero_residuals.size();
  for (size_t j = m > 6 ? m - 6 : 1; j < m; ++j)
    if (!(rep.zero_residuals[j] < rep.zero_residuals[j - 1])) rep.monotone_tail = false;
  const cplx dir = double(s) * z / std::abs(z);
  for (int j = 1; j <= opt.growth_decades; ++j) {
    const double r = std::pow(10.0, j);
    const Value v = log_solve_a1(z, {r * dir, s, tau, theta}, 1);
    const double e = v ? std::abs(v.value().real()) / std::log(r) : INFINITY;
    rep.growth_exponent = std::max(rep.growth_exponent, e);
  }
  return rep;
}

std::vector<Charge> classes_in_half_plane(const RHInstance& inst, cplx r) {
  std::vector<Charge> out;
  for (const auto& g : inst.structure.active_classes())
    if ((inst.structure.Z(g) / (kI * r)).real() > 0) out.push_back(g);
  return out;
}

Value log_solve_general(const RHInstance& inst, cplx r, cplx t, cplx tau, const std::vector<cplx>& theta,
                        const Charge& beta) {
  check_half_plane(inst, r, t);
  if (static_cast<int>(beta.size()) != inst.structure.rank)
    throw Error(Errc::rank_mismatch, "beta has the wrong rank");
  cplx acc = 0;
  Value sig;
  for (const auto& g : classes_in_half_plane(inst, r)) {
    const KappaSet kap = kappa_set(inst.structure, beta, g);
    if (kap.halves.empty()) continue;
    const cplx w = inst.structure.Z(g) / (2 * kPi * kI * t);
    const cplx th = electric_theta(inst, g, theta);
    for (const auto& [n, om] : *inst.structure.omega_at(g)) {
      const double k = to_double(om) * kap.epsilon;
      for (double lam : kap.halves) {
        const cplx eta = 0.5 - th - (0.5 * n + lam) * tau;
        if (!accumulate(acc, log_lambda({w, eta, 1.0}), k, sig)) return sig;
      }
    }
  }
  return acc;
}

Value solve_general(const RHInstance& inst, cplx r, cplx t, cplx tau, const std::vector<cplx>& theta,
                    const Charge& beta) {
  return exp_value(log_solve_general(inst, r, t, tau, theta, beta));
}

Value log_adjoint_general(const RHInstance& inst, cplx r, cplx t, cplx tau, const std::vector<cplx>& theta) {
  check_half_plane(inst, r, t);
  cplx acc = 0;
  Value sig;
  for (const auto& g : classes_in_half_plane(inst, r)) {
    const cplx w = inst.structure.Z(g) / (2 * kPi * kI * t);
    const cplx th = electric_theta(inst, g, theta);
    for (const auto& [n, om] : *inst.structure.omega_at(g)) {
      const cplx eta = 0.5 + 0.5 * (n + 1) * tau - th;
      if (!accumulate(acc, log_f({w, eta, 1.0, tau}), -to_double(om), sig)) return sig;
    }
  }
  return acc;
}

Value adjoint_general(const RHInstance& inst, cplx r, cplx t, cplx tau, const std::vector<cplx>& theta) {
  return exp_value(log_adjoint_general(inst, r, t, tau, theta));
}

cplx richardson(const std::vector<cplx>& values) {
  std::vector<cplx> a = values;
  for (size_t k = 1; k < a.size(); ++k) {
    const double f = std::ldexp(1.0, int(k));
    for (size_t j = a.size() - 1; j >= k; --j) a[j] = (f * a[j] - a[j - 1]) / (f - 1);
  }
  if (a.empty()) throw Error(Errc::invalid_argument, "no values to extrapolate");
  return a.back();
}

HamiltonianLimit hamiltonian_limit(cplx z, cplx t, cplx theta, int side, const ExtrapolationOptions& opt) {
  const int s = side_sign(side);
  HamiltonianLimit h;
  h.closed = hamiltonian(z, t, theta, s);
  for (int j = 0; j <= opt.levels; ++j) {
    const cplx tau = kI * opt.s0 * std::ldexp(1.0, -j);
    const Value v = log_adjoint_psi_a1(z, {t, s, tau, theta});
    if (!v) throw Error(Errc::domain, "pole on the extrapolation path");
    h.samples.push_back(2 * kPi * kI * tau * v.value());
  }
  h.extrapolated = richardson(h.samples);
  return h;
}

Value hamiltonian(cplx z, cplx t, cplx theta, int side) {
  const int s = side_sign(side);
  if (on_excluded_ray(z, t, s)) throw Error(Errc::domain, "t lies on the excluded ray");
  const Value d = log_delta(a1_w(z, t, s), 0.5 - double(s) * theta);
  if (!d) return d;
  return -2 * kPi * kI * d.value();
}

TauFunctionLimit tau_function_limit(cplx z, cplx t, cplx theta, int side, const ExtrapolationOptions& opt) {
  const int s = side_sign(side);
  if (on_excluded_ray(z, t, s)) throw Error(Errc::domain, "t lies on the excluded ray");
  const cplx w = a1_w(z, t, s);
  TauFunctionLimit r;
  r.upsilon = upsilon_fn(w, -double(s) * theta);
  const Value f = log_f({w, 1.0 - double(s) * theta, 1.0, 1.0});
  r.f_inverse = f ? Value(std::exp(-f.value())) : f.flipped();
  r.w_power_form = r.upsilon ? Value(std::exp(-std::log(w) / 12.0) * r.upsilon.value()) : r.upsilon;
  std::vector<cplx> logs;
  for (int j = 0; j <= opt.levels; ++j) {
    const cplx tau = 1.0 + kI * opt.s0 * std::ldexp(1.0, -j);
    const Value v = log_adjoint_psi_a1(z, {t, s, tau, theta});
    if (!v) throw Error(Errc::domain, "pole on the extrapolation path");
    logs.push_back(v.value());
  }
  r.extrapolated = std::exp(richardson(logs));
  return r;
}

std::vector<PoleLocation> pole_locations_a1(cplx z, cplx tau, cplx theta, int nmax) {
  std::vector<PoleLocation> out;
  for (int n = -nmax; n <= nmax; ++n) {
    PoleLocation p;
    p.n = n;
    p.side = n < 0 ? 1 : -1;
    p.kind = n < 0 ? SignalKind::pole : SignalKind::zero;
    p.predicted = z / (2 * kPi * kI * (double(n) + theta + 0.5 * (1.0 + tau)));
    const double s = p.side;
    const cplx eta = 0.5 - s * (theta + 0.5 * tau);
    // g = 1/Λ vanishes simply at the pole of Λ.
    auto g = [&](cplx t) {
      const Value v = log_lambda({a1_w(z, t, p.side), eta, 1.0});
      return v ? std::exp(-v.value()) : cplx(0);
    };
    cplx t = p.predicted * (1.0 + 1e-3 * std::polar(1.0, 0.7));
    for (int it = 0; it < 60; ++it) {
      const double h = 1e-7 * std::abs(t);
      const cplx gt = g(t);
      if (gt == cplx(0)) break;
      const cplx d = (g(t + h) - g(t - h)) / (2 * h);
      const cplx step = gt / d;
      t -= step;
      if (std::abs(step) <= 1e-15 * std::abs(t)) break;
    }
    p.detected = t;
    const Value at = solve_a1(z, {p.predicted, p.side, tau, theta}, 1);
    p.signalled = !at && at.sig().kind == p.kind;
    out.push_back(p);
  }
  return out;
}

}  // namespace qrh
