#include <cmath>
#include <numbers>

#include "qrh/errors.hpp"
#include "qrh/special.hpp"

namespace qrh {

namespace {

const double kLog2Pi = std::log(2 * std::numbers::pi);

void require_off_cut(cplx v, const char* what) {
  if (v.imag() == 0 && v.real() <= 0)
    throw Error(Errc::domain, std::string(what) + " must avoid the closed negative real axis");
}

Value exp_of(const Value& v) { return v ? Value(std::exp(v.value())) : v; }

cplx b22(cplx x, cplx w1, cplx w2) {
  const cplx p = w1 * w2;
  return x * x / p - x * (w1 + w2) / p + (w1 * w1 + w2 * w2 + 3.0 * p) / (6.0 * p);
}

}  // namespace

Value log_lambda(const ModifiedGammaArgs& a) {
  require_off_cut(a.w, "w");
  require_off_cut(a.omega, "omega");
  const cplx u = (a.w + a.eta) / a.omega;
  const Value lg = log_gamma(u);
  if (!lg) return Value::signal(SignalKind::pole, a.w, "lambda");
  return lg.value() + a.w / a.omega + (0.5 - u) * (std::log(a.w) - std::log(a.omega)) -
         0.5 * kLog2Pi;
}

Value lambda_fn(const ModifiedGammaArgs& a) { return exp_of(log_lambda(a)); }

Value log_f(const DoubleGammaArgs& a, const Gamma2Options& opt) {
  require_off_cut(a.w, "w");
  const cplx w = a.w, eta = a.eta, w1 = a.omega1, w2 = a.omega2;
  const cplx x = w + eta;
  const Value g2 = log_gamma2(x, w1, w2, opt);
  if (!g2) return Value::signal(SignalKind::pole, w, "F");
  const cplx p = w1 * w2;
  const cplx g = -0.75 * w * w / p - eta * w / p + 0.5 * w * (w1 + w2) / p;
  return g2.value() + 0.5 * b22(x, w1, w2) * std::log(w) + g;
}

Value f_fn(const DoubleGammaArgs& a, const Gamma2Options& opt) { return exp_of(log_f(a, opt)); }

cplx quantum_dilog(const QDilogArgs& a) {
  const double aq = std::abs(a.q);
  if (!(aq < 1)) throw Error(Errc::domain, "quantum_dilog needs |q| < 1");
  cplx prod = 1, qk_x = a.x;
  // Stop once every remaining factor is 1 to double precision.
  while (std::abs(qk_x) / (1 - aq) >= 1e-17) {
    prod *= 1.0 - qk_x;
    if (prod == cplx(0)) return 0;
    qk_x *= a.q;
  }
  return prod;
}

Value log_delta(cplx w, cplx eta) {
  require_off_cut(w, "w");
  const cplx u = w + eta;
  const Value lg = log_barnes_g(u + 1.0);
  if (!lg) return Value::signal(SignalKind::zero, w, "delta");
  const Value lgam = log_gamma(u);
  if (!lgam) return Value::signal(SignalKind::pole, w, "delta");
  return -constants().zeta_prime_minus_one + lg.value() - 0.25 * w * w + 0.5 * eta * eta -
         0.5 * eta + 1.0 / 12 - u * lgam.value() + (0.5 * u * u - 0.5 * u + 1.0 / 12) * std::log(w);
}

Value delta_fn(cplx w, cplx eta) { return exp_of(log_delta(w, eta)); }

Value log_upsilon(cplx w, cplx theta) {
  require_off_cut(w, "w");
  const cplx u = w + theta;
  const Value lg = log_barnes_g(u + 1.0);
  if (!lg) return Value::signal(SignalKind::zero, w, "upsilon");
  return -constants().zeta_prime_minus_one + lg.value() + 0.75 * w * w + theta * w -
         0.5 * u * kLog2Pi - (0.5 * u * u - 1.0 / 12) * std::log(w);
}

Value upsilon_fn(cplx w, cplx theta) { return exp_of(log_upsilon(w, theta)); }

}  // namespace qrh
