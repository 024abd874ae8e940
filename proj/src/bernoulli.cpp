#include "qrh/bernoulli.hpp"

#include <cmath>
#include <numbers>

#include "qrh/errors.hpp"

namespace qrh {

namespace {

// B_j/j! underflows double past j ~ 390.
constexpr int kTableSize = 384;

// zeta(s) for real s >= 2 by Euler-Maclaurin from n = 20 with five correction terms.
double zeta_even(int s) {
  constexpr int n = 20;
  constexpr double b2k[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66};
  double sum = 0;
  for (int k = n - 1; k >= 1; --k) sum += std::pow(double(k), -s);
  const double ds = s;
  sum += std::pow(double(n), 1 - ds) / (ds - 1) + 0.5 * std::pow(double(n), -ds);
  double rising = ds, fact = 2;  // s(s+1)..(s+2j-2), (2j)!
  for (int j = 1; j <= 5; ++j) {
    sum += b2k[j - 1] / fact * rising * std::pow(double(n), -ds - 2 * j + 1);
    rising *= (ds + 2 * j - 1) * (ds + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  return sum;
}

std::vector<double> build_table() {
  std::vector<double> b(kTableSize, 0.0);
  b[0] = 1.0;
  b[1] = -0.5;
  const double two_pi = 2 * std::numbers::pi;
  for (int j = 2; j < kTableSize; j += 2) {
    const double sign = (j / 2) % 2 == 1 ? 1.0 : -1.0;
    b[j] = sign * 2 * zeta_even(j) * std::pow(two_pi, -j);
  }
  return b;
}

}  // namespace

const std::vector<double>& bernoulli_over_factorial(int n) {
  static const std::vector<double> table = build_table();
  if (n >= kTableSize) throw Error(Errc::unsupported_regime, "Bernoulli index too large");
  return table;
}

double bernoulli_number(int j) {
  if (j < 0) throw Error(Errc::invalid_argument, "negative Bernoulli index");
  return bernoulli_over_factorial(j)[j] * std::tgamma(j + 1.0);
}

namespace {

void check_params(int k, const std::vector<cplx>& a) {
  if (a.empty()) throw Error(Errc::invalid_argument, "multi_bernoulli needs N >= 1");
  if (k < 0) throw Error(Errc::invalid_argument, "multi_bernoulli needs k >= 0");
  for (const cplx& ai : a)
    if (ai == cplx(0)) throw Error(Errc::invalid_argument, "zero parameter a_i");
}

// Taylor coefficients p_0..p_J in t of prod_i t/(e^{a_i t}-1).
std::vector<cplx> product_series(int J, const std::vector<cplx>& a) {
  const auto& b = bernoulli_over_factorial(J);
  std::vector<cplx> p(J + 1, cplx(0));
  p[0] = 1;
  for (const cplx& ai : a) {
    std::vector<cplx> f(J + 1);
    cplx pw = 1.0 / ai;
    for (int j = 0; j <= J; ++j, pw *= ai) f[j] = b[j] * pw;
    std::vector<cplx> next(J + 1, cplx(0));
    for (int i = 0; i <= J; ++i)
      for (int j = 0; i + j <= J; ++j) next[i + j] += p[i] * f[j];
    p.swap(next);
  }
  return p;
}

}  // namespace

std::vector<cplx> multi_bernoulli_coefficients(int k, const std::vector<cplx>& a) {
  check_params(k, a);
  const auto p = product_series(k, a);
  // Multiply by e^{xt} and take k![t^k]: c_m = k!/m! * p_{k-m}.
  std::vector<cplx> c(k + 1);
  double ratio = 1;  // k!/m!
  for (int m = k; m >= 0; --m) {
    c[m] = ratio * p[k - m];
    ratio *= m;
  }
  return c;
}

std::vector<cplx> multi_bernoulli_sequence(int J, cplx x, const std::vector<cplx>& a) {
  check_params(J, a);
  const auto p = product_series(J, a);
  std::vector<cplx> e(J + 1);
  e[0] = 1;
  for (int m = 1; m <= J; ++m) e[m] = e[m - 1] * x / double(m);
  std::vector<cplx> out(J + 1);
  double fact = 1;
  for (int j = 0; j <= J; ++j) {
    if (j > 0) fact *= j;
    cplx s = 0;
    for (int m = 0; m <= j; ++m) s += e[m] * p[j - m];
    out[j] = fact * s;
  }
  return out;
}

cplx multi_bernoulli(int k, cplx x, const std::vector<cplx>& a) {
  const auto c = multi_bernoulli_coefficients(k, a);
  cplx r = 0;
  for (int m = k; m >= 0; --m) r = r * x + c[m];
  return r;
}

cplx multi_bernoulli(const MultiBernoulliQuery& q) {
  if (q.N < 1 || static_cast<int>(q.a.size()) != q.N)
    throw Error(Errc::invalid_argument, "parameter vector length must equal N >= 1");
  return multi_bernoulli(q.k, q.x, q.a);
}

cplx classical_bernoulli(int k, cplx x) { return multi_bernoulli(k, x, {cplx(1)}); }

}  // namespace qrh
