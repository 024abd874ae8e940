#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrh/bernoulli.hpp"
#include "qrh/errors.hpp"
#include "qrh/special.hpp"

namespace qrh {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog2Pi = std::log(2 * kPi);

bool on_nonpositive_axis(cplx a) { return a.imag() == 0 && a.real() <= 0; }

double bisector_angle(const std::vector<cplx>& a) {
  double lo = kPi, hi = -kPi;
  for (const cplx& ai : a) {
    lo = std::min(lo, std::arg(ai));
    hi = std::max(hi, std::arg(ai));
  }
  if (hi - lo >= kPi) throw Error(Errc::domain, "periods do not lie in a common half-plane");
  return 0.5 * (lo + hi);
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Coefficients in x of p(x + δ) given coefficients of p(y).
std::vector<cplx> shift_poly(const std::vector<cplx>& c, cplx delta) {
  const int n = static_cast<int>(c.size());
  std::vector<cplx> d(n, cplx(0));
  for (int m = 0; m < n; ++m) {
    cplx dp = 1;
    for (int j = m; j >= 0; --j) {
      d[j] += c[m] * binom(m, j) * dp;
      dp *= delta;
    }
  }
  return d;
}

cplx horner(const std::vector<cplx>& c, cplx x) {
  cplx r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

// Distance from X to the cone {−s1·ω1 − s2·ω2 : s ≥ 0}.
double pole_cone_distance(cplx X, cplx w1, cplx w2) {
  const cplx u1 = -w1, u2 = -w2;
  const double det = u1.real() * u2.imag() - u1.imag() * u2.real();
  if (det != 0) {
    const double s1 = (X.real() * u2.imag() - X.imag() * u2.real()) / det;
    const double s2 = (u1.real() * X.imag() - u1.imag() * X.real()) / det;
    if (s1 >= 0 && s2 >= 0) return 0;
  }
  auto ray = [&](cplx u) {
    const cplx p = X * std::conj(u);
    return p.real() <= 0 ? std::abs(X) : std::abs(p.imag()) / std::abs(u);
  };
  return std::min(ray(u1), ray(u2));
}

struct Gamma2Series {
  cplx w1, w2;
  std::vector<cplx> inv;  // (−1)^k B_{2,k+2}(0)/(k(k+1)(k+2))
};

const Gamma2Series& gamma2_series(cplx w1, cplx w2) {
  constexpr int kMax = 120;
  thread_local Gamma2Series cache{cplx(0), cplx(0), {}};
  if (cache.inv.empty() || cache.w1 != w1 || cache.w2 != w2) {
    const auto b = multi_bernoulli_sequence(kMax + 2, 0.0, {w1, w2});
    cache.w1 = w1;
    cache.w2 = w2;
    cache.inv.assign(kMax, cplx(0));
    for (int k = 1; k <= kMax; ++k)
      cache.inv[k - 1] = (k % 2 ? -1.0 : 1.0) * b[k + 2] / (double(k) * (k + 1) * (k + 2));
  }
  return cache;
}

// Second Stirling expansion at δ = 0, series summed to its smallest term.
cplx gamma2_asymptotic(cplx X, cplx w1, cplx w2) {
  const cplx p = w1 * w2;
  const cplx b22 = X * X / p - X * (w1 + w2) / p + (w1 * w1 + w2 * w2 + 3.0 * p) / (6.0 * p);
  cplx r = -0.5 * b22 * sector_log(X, {w1, w2}) + 0.75 * X * X / p - 0.5 * X * (w1 + w2) / p;
  const auto& inv = gamma2_series(w1, w2).inv;
  const cplx ix = 1.0 / X;
  cplx pw = ix, s = 0;
  double prev = HUGE_VAL;
  for (std::size_t k = 1; k <= inv.size(); ++k, pw *= ix) {
    const cplx term = inv[k - 1] * pw;
    const double mag = std::abs(term);
    if (k > 4 && mag > prev) break;
    s += term;
    if (mag == 0) continue;
    if (mag <= 1e-17 * std::max(1.0, std::abs(r))) break;
    prev = mag;
  }
  return r + s;
}

}  // namespace

cplx sector_log(cplx x, const std::vector<cplx>& a) {
  const double phi = bisector_angle(a);
  return std::log(x * std::polar(1.0, -phi)) + cplx(0, phi);
}

void check_double_periods(cplx w1, cplx w2) {
  if (on_nonpositive_axis(w1) || on_nonpositive_axis(w2))
    throw Error(Errc::domain, "periods must avoid the closed negative real axis");
  if (std::abs(std::arg(w1) - std::arg(w2)) >= kPi)
    throw Error(Errc::domain, "periods must satisfy |Arg w1 - Arg w2| < pi");
}

Value log_gamma1(cplx x, cplx a) {
  if (on_nonpositive_axis(a)) throw Error(Errc::domain, "log_gamma1: period on the closed negative axis");
  const cplx z = x / a;
  const Value lg = log_gamma(z);
  if (!lg) return Value::signal(SignalKind::pole, x, "log_gamma1");
  return lg.value() + (z - 0.5) * std::log(a) - 0.5 * kLog2Pi;
}

Value log_gamma2(cplx x, cplx w1, cplx w2, const Gamma2Options& opt) {
  check_double_periods(w1, w2);
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw Error(Errc::invalid_argument, "log_gamma2: non-finite argument");
  const bool first_larger = std::abs(w1) >= std::abs(w2);
  const cplx wl = first_larger ? w1 : w2, ws = first_larger ? w2 : w1;
  const double R = opt.radius_factor * std::abs(wl);

  int m = 0;
  cplx X = x;
  while (std::abs(X) < R || pole_cone_distance(X, w1, w2) < R) {
    if (++m > opt.max_shifts) throw Error(Errc::unsupported_regime, "log_gamma2: shift cap exceeded");
    X = x + double(m) * wl;
  }
  m += opt.extra_shifts;
  X = x + double(m) * wl;

  cplx r = gamma2_asymptotic(X, w1, w2);
  // Γ₂(x) = Γ₂(x + ω_L)·Γ₁(x|ω_S), applied m times.
  for (int j = 0; j < m; ++j) {
    const Value g = log_gamma1(x + double(j) * wl, ws);
    if (!g) return Value::signal(SignalKind::pole, x, "log_gamma2");
    r += g.value();
  }
  return r;
}

StirlingExpansion second_stirling_expansion(int N, cplx delta, const std::vector<cplx>& a, int K) {
  if (N != 1 && N != 2)
    throw Error(Errc::unsupported_regime, "second Stirling expansion implemented for N in {1,2}");
  if (static_cast<int>(a.size()) != N) throw Error(Errc::invalid_argument, "need N parameters");
  if (K < 0) throw Error(Errc::invalid_argument, "K must be non-negative");
  const double pref = (N % 2 ? 1.0 : -1.0) / std::tgamma(N + 1.0);

  const auto at_delta = multi_bernoulli_sequence(N + K, delta, a);
  const auto at_zero = multi_bernoulli_sequence(N, 0.0, a);
  const auto bnn = shift_poly(multi_bernoulli_coefficients(N, a), delta);

  StirlingExpansion e;
  e.log_poly.resize(N + 1);
  for (int j = 0; j <= N; ++j) e.log_poly[j] = pref * bnn[j];

  std::vector<cplx> poly(N + 1, cplx(0));
  for (int k = 0; k < N; ++k) {
    double harmonic = 0;
    for (int l = 1; l <= N - k; ++l) harmonic += 1.0 / l;
    const cplx c = binom(N, k) * harmonic * at_zero[k];
    std::vector<cplx> mono(N - k + 1, cplx(0));
    mono[N - k] = 1;
    const auto shifted = shift_poly(mono, delta);  // (x+δ)^{N−k}
    for (int j = 0; j <= N - k; ++j) poly[j] -= c * shifted[j];
  }
  // Non-negative degree part of B_{N,N}(x+δ)·Σ_n (−1)^{n+1} δ^n/n x^{−n}.
  cplx dn = 1;
  for (int n = 1; n <= N; ++n) {
    dn *= delta;
    const cplx en = (n % 2 ? 1.0 : -1.0) * dn / double(n);
    for (int j = n; j <= N; ++j) poly[j - n] += bnn[j] * en;
  }
  e.poly.resize(N + 1);
  for (int j = 0; j <= N; ++j) e.poly[j] = pref * poly[j];

  e.inv.resize(K);
  for (int k = 1; k <= K; ++k) {
    double den = 1;
    for (int i = k; i <= k + N; ++i) den *= i;
    e.inv[k - 1] = ((N + k) % 2 ? -1.0 : 1.0) * at_delta[N + k] / den;
  }
  return e;
}

cplx gammaN_second_stirling(int N, cplx x, cplx delta, const std::vector<cplx>& a, int K) {
  const auto e = second_stirling_expansion(N, delta, a, K);
  cplx r = horner(e.log_poly, x) * sector_log(x, a) + horner(e.poly, x);
  const cplx ix = 1.0 / x;
  cplx pw = ix;
  for (const cplx& c : e.inv) {
    r += c * pw;
    pw *= ix;
  }
  return r;
}

cplx asymptotic_log_lambda(cplx w, cplx eta, cplx omega, int K) {
  if (K < 1) throw Error(Errc::invalid_argument, "K must be >= 1");
  const auto b = multi_bernoulli_sequence(K + 1, eta, {omega});
  cplx s = 0, pw = 1.0 / w;
  for (int k = 1; k <= K; ++k, pw /= w)
    s += (k % 2 ? 1.0 : -1.0) * b[k + 1] / (double(k) * (k + 1)) * pw;
  return s;
}

cplx asymptotic_log_f(cplx w, cplx eta, cplx w1, cplx w2, int K) {
  if (K < 1) throw Error(Errc::invalid_argument, "K must be >= 1");
  const auto b = multi_bernoulli_sequence(K + 2, eta, {w1, w2});
  cplx s = 0, pw = 1.0 / w;
  for (int k = 1; k <= K; ++k, pw /= w)
    s += (k % 2 ? -1.0 : 1.0) * b[k + 2] / (double(k) * (k + 1) * (k + 2)) * pw;
  return s;
}

}  // namespace qrh
