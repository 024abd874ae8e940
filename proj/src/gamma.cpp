#include <cmath>
#include <numbers>

#include "qrh/bernoulli.hpp"
#include "qrh/errors.hpp"
#include "qrh/special.hpp"

namespace qrh {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog2Pi = std::log(2 * kPi);

bool near_nonpositive_integer(cplx z, double& n) {
  n = std::round(z.real());
  return n <= 0 && std::abs(z - n) <= 1e-12 * std::max(1.0, std::abs(n));
}

// Σ_{k<m} log(z+k) with principal logs; magnitudes multiplied with exponent tracking.
cplx log_rising(cplx z, long m) {
  double mant = 1, im = 0;
  long ex = 0;
  for (long k = 0; k < m; ++k) {
    const cplx u = z + double(k);
    mant *= std::abs(u);
    int e;
    mant = std::frexp(mant, &e);
    ex += e;
    im += std::arg(u);
  }
  return {std::log(mant) + double(ex) * std::numbers::ln2, im};
}

cplx stirling_log_gamma(cplx w) {
  const cplx inv = 1.0 / w, inv2 = inv * inv;
  cplx s = 0, pw = inv;
  for (int j = 1; j <= 10; ++j, pw *= inv2)
    s += bernoulli_number(2 * j) / double(2 * j * (2 * j - 1)) * pw;
  return (w - 0.5) * std::log(w) - w + 0.5 * kLog2Pi + s;
}

cplx barnes_g_asymptotic(cplx w) {
  const cplx v = w - 1.0, lv = std::log(v);
  const cplx inv2 = 1.0 / (v * v);
  cplx s = 0, pw = inv2;
  for (int k = 1; k <= 12; ++k, pw *= inv2)
    s += bernoulli_number(2 * k + 2) / double(4 * k * (k + 1)) * pw;
  return v * v * 0.5 * lv - 0.75 * v * v + 0.5 * v * kLog2Pi - lv / 12.0 +
         constants().zeta_prime_minus_one + s;
}

}  // namespace

double zeta_prime_minus_one_em(int n, int j_max) {
  // Differentiate the Euler-Maclaurin form of ζ(s) termwise and set s = −1.
  const double N = n, lN = std::log(N);
  double sum = 0;
  for (int k = 2; k < n; ++k) sum -= k * std::log(double(k));
  sum += 0.5 * N * N * lN - 0.25 * N * N - 0.5 * N * lN + (1 + lN) / 12.0;
  double fact = 1;  // (2j−3)!
  for (int j = 2; j <= j_max; ++j) {
    if (j > 2) fact *= double(2 * j - 4) * double(2 * j - 3);
    double denom = 1;  // (2j)!
    for (int i = 2; i <= 2 * j; ++i) denom *= i;
    sum -= bernoulli_number(2 * j) * fact / denom * std::pow(N, 2.0 - 2 * j);
  }
  return sum;
}

const Constants& constants() {
  static const Constants c = [] {
    Constants r{};
    r.zeta_prime_minus_one = zeta_prime_minus_one_em(20, 8);
    r.log_rho = 0.5 * kLog2Pi - r.zeta_prime_minus_one;
    r.rho = std::exp(r.log_rho);
    return r;
  }();
  return c;
}

Value log_gamma(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(Errc::invalid_argument, "log_gamma: non-finite argument");
  double n;
  if (near_nonpositive_integer(z, n)) return Value::signal(SignalKind::pole, n, "log_gamma");
  const double x = z.real(), y = std::abs(z.imag());
  if (std::abs(z) >= 15 && x >= -y) return stirling_log_gamma(z);
  double m = std::max(0.0, std::ceil(-y - x));
  if (y < 15) m = std::max(m, std::ceil(std::sqrt(225 - y * y) - x));
  const long mi = static_cast<long>(m);
  return stirling_log_gamma(z + m) - log_rising(z, mi);
}

Value log_barnes_g(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(Errc::invalid_argument, "log_barnes_g: non-finite argument");
  double n;
  if (near_nonpositive_integer(z, n)) return Value::signal(SignalKind::zero, n, "log_barnes_g");
  constexpr double threshold = 15;
  const long m = static_cast<long>(std::max(0.0, std::ceil(threshold - z.real())));
  cplx r = barnes_g_asymptotic(z + double(m));
  for (long k = 0; k < m; ++k) {
    const Value g = log_gamma(z + double(k));
    if (!g) return Value::signal(SignalKind::zero, z, "log_barnes_g");
    r -= g.value();
  }
  return r;
}

namespace {

// ζ_N(s, x|a) with a = (a[first], ..., a[N-1]).
cplx zeta_rec(std::size_t first, cplx s, cplx x, const std::vector<cplx>& a) {
  if (first == a.size()) return std::exp(-s * std::log(x));
  const cplx a1 = a[first];
  const int M = 16 + static_cast<int>(std::ceil(2 * std::abs(x) / std::abs(a1)));
  constexpr int J = 7;
  cplx sum = 0;
  for (int n = 0; n < M; ++n) sum += zeta_rec(first + 1, s, x + double(n) * a1, a);
  const cplx xm = x + double(M) * a1;
  // Tail Σ_{n≥M} g(n) with g(u) = ζ_{N−1}(s, x+u·a1): integral, half end point, derivatives.
  // ∫_M^∞ g = ζ_{N−1}(s−1, xm)/((s−1)a1); g^{(r)} = (−1)^r (s)_r a1^r ζ_{N−1}(s+r, xm).
  sum += zeta_rec(first + 1, s - 1.0, xm, a) / ((s - 1.0) * a1);
  sum += 0.5 * zeta_rec(first + 1, s, xm, a);
  cplx rising = s, a1pow = a1;  // (s)_{2j−1}, a1^{2j−1}
  double fact = 2;               // (2j)!
  for (int j = 1; j <= J; ++j) {
    const cplx d = -rising * a1pow * zeta_rec(first + 1, s + double(2 * j - 1), xm, a);
    sum -= bernoulli_number(2 * j) / fact * d;
    rising *= (s + double(2 * j - 1)) * (s + double(2 * j));
    a1pow *= a1 * a1;
    fact *= double(2 * j + 1) * double(2 * j + 2);
  }
  return sum;
}

}  // namespace

cplx barnes_zeta(int N, cplx s, cplx x, const std::vector<cplx>& a) {
  if (N < 1 || static_cast<int>(a.size()) != N)
    throw Error(Errc::invalid_argument, "barnes_zeta: parameter vector length must equal N >= 1");
  for (const cplx& ai : a)
    if (ai.real() <= 0) throw Error(Errc::invalid_argument, "barnes_zeta: needs Re a_i > 0");
  if (s.real() <= N)
    throw Error(Errc::unsupported_regime, "barnes_zeta: direct sum needs Re s > N");
  return zeta_rec(0, s, x, a);
}

}  // namespace qrh
