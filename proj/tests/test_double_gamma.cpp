#include "doctest.h"
#include "oracles.hpp"
#include "qrh/bernoulli.hpp"
#include "qrh/errors.hpp"
#include "qrh/special.hpp"

using namespace qrh;
using oracle::pi;
using oracle::rel_err;

namespace {

const cplx I(0, 1);
const double kLog2Pi = std::log(2 * pi);

// |a − b| measured on the Riemann surface of log: the imaginary parts only modulo 2π.
double log_dist(cplx a, cplx b) {
  const cplx d = a - b;
  const double k = std::round(d.imag() / (2 * pi));
  return std::abs(d - cplx(0, 2 * pi * k));
}

}  // namespace

TEST_CASE("log_gamma1 closed forms") {
  CHECK(std::abs(*log_gamma1(1.0, 1.0) + 0.5 * kLog2Pi) < 1e-14);
  const cplx a(0.6, 0.8);
  CHECK(std::abs(*log_gamma1(a, a) - (-0.5 * kLog2Pi + 0.5 * std::log(a))) < 1e-14);
  const Value p = log_gamma1(-2.0 * a, a);
  REQUIRE_FALSE(p.finite());
  CHECK(p.sig().kind == SignalKind::pole);
  CHECK_THROWS_AS(log_gamma1(1.0, -2.0), Error);
}

TEST_CASE("log_gamma1 homogeneity") {
  oracle::Sampler s(8);
  for (int i = 0; i < 200; ++i) {
    const cplx a = s.polar(0.5, 2, -1.2, 1.2), x = s.polar(0.5, 5, -1.2, 1.2);
    const cplx lam = s.polar(0.3, 3, -1.5, 1.5);
    const cplx lhs = *log_gamma1(lam * x, lam * a) - *log_gamma1(x, a);
    CHECK(std::abs(lhs - multi_bernoulli(1, x, {a}) * std::log(lam)) < 1e-11);
  }
}

TEST_CASE("log_gamma2 against Barnes G at unit periods") {
  const auto& c = constants();
  oracle::Sampler s(4);
  for (int i = 0; i < 50; ++i) {
    const cplx x = s.polar(0.2, 30, -2.5, 2.5);
    const cplx want = -c.log_rho - *log_barnes_g(x) + 0.5 * x * kLog2Pi;
    CHECK(log_dist(*log_gamma2(x, 1.0, 1.0), want) < 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("log_gamma2 difference relations, homogeneity, path independence") {
  oracle::Sampler s(21);
  for (int i = 0; i < 100; ++i) {
    const cplx w1 = s.polar(0.3, 2, -1.4, 1.4), w2 = s.polar(0.3, 2, -1.4, 1.4);
    const cplx x = s.disk(4);
    const Value g = log_gamma2(x, w1, w2);
    if (!g) continue;
    const double scale = std::max(1.0, std::abs(*g));
    // Off the pole cone the branch is analytic and the relations hold exactly; inside it they
    // hold for Γ₂ itself, i.e. for the logarithms modulo 2πi.
    const cplx d2 = *log_gamma2(x + w2, w1, w2) - *g + *log_gamma1(x, w1);
    const cplx d1 = *log_gamma2(x + w1, w1, w2) - *g + *log_gamma1(x, w2);
    CHECK(log_dist(d2, 0) < 1e-9 * scale);
    CHECK(log_dist(d1, 0) < 1e-9 * scale);
    if (x.real() * w1.real() + x.imag() * w1.imag() > 0 && x.real() * w2.real() + x.imag() * w2.imag() > 0) {
      CHECK(std::abs(d2) < 1e-9 * scale);
      CHECK(std::abs(d1) < 1e-9 * scale);
    }
    Gamma2Options more;
    more.extra_shifts = 5;
    CHECK(std::abs(*log_gamma2(x, w1, w2, more) - *g) < 1e-9 * scale);
    // λ with small argument keeps every log on its principal sheet.
    const cplx lam = s.polar(0.5, 2, -0.1, 0.1);
    const cplx hom = *log_gamma2(lam * x, lam * w1, lam * w2) - *g;
    CHECK(log_dist(hom, -0.5 * multi_bernoulli(2, x, {w1, w2}) * std::log(lam)) < 1e-9 * scale);
  }
}

TEST_CASE("log_gamma2 domain and poles") {
  CHECK_THROWS_AS(log_gamma2(1.0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(log_gamma2(1.0, std::polar(1.0, 0.9 * pi), std::polar(1.0, -0.9 * pi)), Error);
  CHECK(log_gamma2(cplx(0.5, 0.5), 1.0, I).finite());  // τ = i is admitted
  const cplx w1(1, 0.2), w2(0.3, 0.7);
  for (int m1 = 0; m1 <= 2; ++m1)
    for (int m2 = 0; m2 <= 2; ++m2) {
      const Value v = log_gamma2(-double(m1) * w1 - double(m2) * w2, w1, w2);
      REQUIRE_FALSE(v.finite());
      CHECK(v.sig().kind == SignalKind::pole);
    }
}

TEST_CASE("second Stirling expansion, N = 1, is the classical one") {
  const cplx a(0.8, 0.3), delta(0.4, -0.2);
  const auto e = second_stirling_expansion(1, delta, {a}, 4);
  // (x+δ)/a − 1/2 multiplies log x; the polynomial part is −x/a.
  CHECK(std::abs(e.log_poly[0] - (delta / a - 0.5)) < 1e-15);
  CHECK(std::abs(e.log_poly[1] - 1.0 / a) < 1e-15);
  CHECK(std::abs(e.poly[0]) < 1e-15);
  CHECK(std::abs(e.poly[1] + 1.0 / a) < 1e-15);
  // x^{−k}: (−1)^{k+1} a^k B_{k+1}(δ/a)/(k(k+1)), B_n from exact Bernoulli numbers.
  const auto b = oracle::bernoulli_exact(6);
  for (int k = 1; k <= 4; ++k) {
    const int n = k + 1;
    cplx bn = 0;
    double c = 1;
    for (int j = 0; j <= n; ++j) {
      bn += c * oracle::to_double(b[j]) * std::pow(delta / a, n - j);
      c = c * (n - j) / (j + 1);
    }
    const cplx want = (k % 2 ? 1.0 : -1.0) * std::pow(a, k) * bn / double(k * (k + 1));
    CHECK(std::abs(e.inv[k - 1] - want) < 1e-12);
  }
}

TEST_CASE("second Stirling expansion, N = 2, is the double gamma corollary") {
  const cplx a1(1.1, 0.2), a2(0.5, 0.6), delta(0.3, 0.4);
  const cplx p = a1 * a2;
  const auto e = second_stirling_expansion(2, delta, {a1, a2}, 5);
  // −½ B_{2,2}(x+δ) log x
  const auto bxx = multi_bernoulli_coefficients(2, {a1, a2});
  CHECK(std::abs(e.log_poly[2] + 0.5 / p) < 1e-14);
  CHECK(std::abs(e.log_poly[1] + 0.5 * (bxx[1] + 2.0 * delta / p)) < 1e-14);
  CHECK(std::abs(e.log_poly[0] + 0.5 * multi_bernoulli(2, delta, {a1, a2})) < 1e-14);
  // 3x²/(4a1a2) − x(a1+a2)/(2a1a2) + δx/(a1a2), no constant term.
  CHECK(std::abs(e.poly[2] - 0.75 / p) < 1e-14);
  CHECK(std::abs(e.poly[1] - (-(a1 + a2) / (2.0 * p) + delta / p)) < 1e-14);
  CHECK(std::abs(e.poly[0]) < 1e-14);
  for (int k = 1; k <= 5; ++k) {
    const cplx want = (k % 2 ? -1.0 : 1.0) * multi_bernoulli(k + 2, delta, {a1, a2}) /
                      double(k * (k + 1) * (k + 2));
    CHECK(std::abs(e.inv[k - 1] - want) < 1e-14);
  }
  CHECK_THROWS_AS(second_stirling_expansion(3, delta, {a1, a2, a1}, 2), Error);
}

TEST_CASE("second Stirling approximant converges at the predicted rate") {
  const cplx a1(1, 0.1), a2(0.7, -0.3), delta(0.5, 0.2), dir = std::polar(1.0, 0.3);
  for (int K = 1; K <= 3; ++K) {
    auto err = [&](double r) {
      const cplx x = r * dir;
      return std::abs(*log_gamma2(x + delta, a1, a2) - gammaN_second_stirling(2, x, delta, {a1, a2}, K));
    };
    CHECK(std::log2(err(16) / err(32)) == doctest::Approx(K + 1).epsilon(0.05));
  }
}

TEST_CASE("lambda values and symmetries") {
  CHECK(rel_err(*lambda_fn({1.0, 0.0, 1.0}), std::exp(1.0) / std::sqrt(2 * pi)) < 1e-14);
  oracle::Sampler s(31);
  for (int i = 0; i < 200; ++i) {
    const cplx w = s.polar(0.3, 4, -2.5, 2.5), eta = s.disk(2), om = s.polar(0.5, 2, -1, 1);
    const cplx lam = s.polar(0.5, 2, -0.3, 0.3);
    if (!lambda_fn({w, eta, om})) continue;
    if (std::abs(std::arg(w) + std::arg(lam)) >= pi) continue;
    CHECK(rel_err(*lambda_fn({lam * w, lam * eta, lam * om}), *lambda_fn({w, eta, om})) < 1e-10);
  }
  const Value p = lambda_fn({cplx(0.5, 0.5), cplx(-2.5, -0.5), 1.0});
  REQUIRE_FALSE(p.finite());
  CHECK(p.sig().kind == SignalKind::pole);
  CHECK_THROWS_AS(lambda_fn({-1.0, 0.0, 1.0}), Error);
}

TEST_CASE("lambda small-w bound") {
  for (double arg : {0.5, -1.0, 2.0}) {
    double k = 0;
    for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double v = std::log(std::abs(*lambda_fn({std::polar(r, arg), cplx(0.3, 0.1), 1.0})));
      k = std::max(k, std::abs(v) / std::abs(std::log(r)));
    }
    CHECK(k < 10);
  }
}

TEST_CASE("F symmetry, homogeneity and poles") {
  oracle::Sampler s(41);
  for (int i = 0; i < 60; ++i) {
    const cplx w = s.polar(0.3, 4, -2.5, 2.5), eta = s.disk(1.5);
    const cplx w1 = s.polar(0.4, 2, -1, 1), w2 = s.polar(0.4, 2, -1, 1);
    const Value f = log_f({w, eta, w1, w2});
    if (!f) continue;
    CHECK(log_dist(*log_f({w, eta, w2, w1}), *f) < 1e-10 * std::max(1.0, std::abs(*f)));
    const cplx lam = s.polar(0.5, 2, -0.1, 0.1);
    if (std::abs(std::arg(w) + std::arg(lam)) >= pi) continue;
    CHECK(log_dist(*log_f({lam * w, lam * eta, lam * w1, lam * w2}), *f) <
          1e-10 * std::max(1.0, std::abs(*f)));
  }
  const cplx w1(1, 0.2), w2(0.3, 0.7), w(0.4, 0.3);
  const Value p = f_fn({w, -w - w1 - 2.0 * w2, w1, w2});
  REQUIRE_FALSE(p.finite());
  CHECK(p.sig().kind == SignalKind::pole);
}

TEST_CASE("F difference relation") {
  oracle::Sampler s(43);
  for (int i = 0; i < 100; ++i) {
    const cplx w = s.polar(0.3, 4, -2.5, 2.5), eta = s.disk(1.5);
    const cplx w1 = s.polar(0.4, 2, -1, 1), w2 = s.polar(0.4, 2, -1, 1);
    const Value a = f_fn({w, eta + w2, w1, w2}), b = f_fn({w, eta, w1, w2});
    const Value l = lambda_fn({w, eta, w1});
    if (!a || !b || !l) continue;
    CHECK(std::abs(*a / *b * *l - 1.0) < 1e-8);
  }
}

TEST_CASE("asymptotic expansions") {
  // K = 1, η = 0, ω = 1: B_{1,2}(0|1)/2 · w^{−1} = 1/(12w).
  const cplx w(3, 4);
  CHECK(std::abs(asymptotic_log_lambda(w, 0.0, 1.0, 1) - 1.0 / (12.0 * w)) < 1e-15);
  const cplx eta(0.2, 0.1), w1(1, 0.1), w2(0.5, 0.2);
  CHECK(std::abs(asymptotic_log_f(w, eta, w1, w2, 1) + multi_bernoulli(3, eta, {w1, w2}) / 6.0 / w) < 1e-15);
  // log Λ → 0 along ℝ₊.
  CHECK(std::abs(*log_lambda({1e6, eta, 1.0})) < 1e-6);

  for (int K = 1; K <= 3; ++K) {
    const cplx dir = std::polar(1.0, 0.6);
    auto el = [&](double r) {
      return std::abs(*log_lambda({r * dir, eta, 1.3}) - asymptotic_log_lambda(r * dir, eta, 1.3, K));
    };
    auto ef = [&](double r) {
      return std::abs(*log_f({r * dir, eta, w1, w2}) - asymptotic_log_f(r * dir, eta, w1, w2, K));
    };
    CHECK(std::log2(el(32) / el(64)) == doctest::Approx(K + 1).epsilon(0.05));
    CHECK(std::log2(ef(32) / ef(64)) == doctest::Approx(K + 1).epsilon(0.05));
  }
}

TEST_CASE("asymptotic log F series is consistent with the difference relation") {
  // log F(w,η+ω₂) − log F(w,η) = −log Λ(w,η|ω₁) holds order by order.
  const cplx eta(0.3, -0.1), w1(1, 0.2), w2(0.6, 0.1), w(40, 25);
  const int K = 4;
  const cplx lhs = asymptotic_log_f(w, eta + w2, w1, w2, K) - asymptotic_log_f(w, eta, w1, w2, K);
  const cplx rhs = -asymptotic_log_lambda(w, eta, w1, K);
  CHECK(std::abs(lhs - rhs) < 10 * std::pow(std::abs(w), -K - 1));
}

TEST_CASE("quantum dilogarithm") {
  CHECK(quantum_dilog({cplx(0.3, 0.4), 0.0}) == cplx(1));
  CHECK(quantum_dilog({0.5, 1.0}) == cplx(0));
  const cplx q(0.3, 0.2), x(0.4, 0);
  CHECK(std::abs(quantum_dilog({q, x}) / quantum_dilog({q, q * x}) - (1.0 - x)) < 1e-14);
  CHECK_THROWS_AS(quantum_dilog({1.0, 0.5}), Error);
  CHECK_THROWS_AS(quantum_dilog({cplx(0, 1.2), 0.5}), Error);
  oracle::Sampler s(51);
  for (int i = 0; i < 200; ++i) {
    const cplx qq = s.polar(0, 0.9, -pi, pi), xx = s.disk(0.5);
    cplx series = 0, term = 1, qn = 1;
    for (int n = 0; n < 4000 && std::abs(term) > 1e-300; ++n) {
      series += term;
      qn *= qq;
      term *= xx / (1.0 - qn);
    }
    CHECK(std::abs(1.0 / quantum_dilog({qq, xx}) - series) < 1e-12 * std::abs(series));
  }
}

TEST_CASE("delta") {
  const double zp = constants().zeta_prime_minus_one;
  CHECK(rel_err(*delta_fn(1.0, 0.0), std::exp(-zp - 1.0 / 6)) < 1e-12);
  oracle::Sampler s(61);
  for (int i = 0; i < 50; ++i) {
    const cplx w = s.polar(0.3, 3, -2, 2), eta = s.disk(1);
    const double h = 1e-4;
    const Value a = log_delta(w, eta + h), b = log_delta(w, eta - h), l = log_lambda({w, eta, 1.0});
    if (!a || !b || !l) continue;
    const cplx d = (*a - *b) / (2 * h);
    CHECK(log_dist(-d, *l) < 1e-6);
  }
}

TEST_CASE("upsilon") {
  const double zp = constants().zeta_prime_minus_one;
  CHECK(rel_err(*upsilon_fn(1.0, 0.0), std::exp(-zp + 0.75) / std::sqrt(2 * pi)) < 1e-12);
  oracle::Sampler s(71);
  for (int i = 0; i < 100; ++i) {
    const cplx w = s.polar(0.3, 3, -2.5, 2.5), th = s.disk(1.5);
    const Value a = upsilon_fn(w, th), b = upsilon_fn(w, th - 1.0), l = lambda_fn({w, th, 1.0});
    if (!a || !b || !l) continue;
    CHECK(std::abs(*a / *b / *l - 1.0) < 1e-9);
  }
}

TEST_CASE("F at unit periods is the reciprocal of upsilon") {
  oracle::Sampler s(73);
  for (int i = 0; i < 50; ++i) {
    const cplx w = s.polar(0.3, 3, -2.5, 2.5), th = s.disk(1);
    const Value f = log_f({w, 1.0 + th, 1.0, 1.0}), u = log_upsilon(w, th);
    if (!f || !u) continue;
    CHECK(log_dist(-*f, *u) < 1e-9 * std::max(1.0, std::abs(*u)));
  }
}
