#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "qrh/errors.hpp"
#include "qrh/qtorus.hpp"

using namespace qrh;
using CF = CoefficientFunction;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);
const Charge alpha{1, 0}, alpha_v{0, 1};

std::shared_ptr<const ExtendedContext> ctx_of(const RefinedBPSStructure& b) {
  return std::make_shared<const ExtendedContext>(make_context(b, em_splitting(b)));
}

struct Point {
  cplx tau;
  std::vector<cplx> theta;
};

Point sample_point(oracle::Sampler& s, int k) {
  Point p{cplx(s.uniform(-0.5, 0.5), s.uniform(0.3, 1.5)), {}};
  for (int i = 0; i < k; ++i) p.theta.emplace_back(s.uniform(-0.5, 0.5), s.uniform(-0.3, 0.3));
  return p;
}

// Small random coefficient: a + b·exp(cτ + Σ d_i θ_i) + e·θ_j·τ.
CF random_coefficient(oracle::Sampler& s, int k) {
  std::vector<long long> d(k), d2(k, 0);
  for (auto& x : d) x = s.integer(-2, 2);
  d2[s.integer(0, k - 1)] = 1;
  const cplx a(s.uniform(-1, 1), s.uniform(-1, 1)), b(s.uniform(-1, 1), s.uniform(-1, 1));
  const cplx c(0, s.uniform(-2, 2)), e(s.uniform(-1, 1), 0);
  return CF(a) + CF(b) * exp(CF(c) * CF::tau() + CF(cplx(0, 1)) * CF::theta(d)) + CF(e) * CF::theta(d2) * CF::tau();
}

ExtendedElement random_element(oracle::Sampler& s, const std::shared_ptr<const ExtendedContext>& ctx, int terms) {
  ExtendedElement x{ctx, {}};
  const int m = ctx->magnetic_dim(), k = ctx->electric_dim();
  for (int t = 0; t < terms; ++t) {
    std::vector<long long> d(m);
    for (auto& v : d) v = s.integer(-2, 2);
    x = ext_add(x, ExtendedElement::monomial(ctx, d, random_coefficient(s, k)));
  }
  return x;
}

QuantumTorusElement random_torus(oracle::Sampler& s, int rank, int terms) {
  QuantumTorusElement x;
  x.rank = rank;
  for (int t = 0; t < terms; ++t) {
    Charge g(rank);
    for (auto& v : g) v = s.integer(-2, 2);
    LaurentQ c = LaurentQ::monomial(s.integer(-3, 3), double(s.integer(-3, 3))) +
                 LaurentQ::monomial(s.integer(-3, 3), double(s.integer(1, 3)));
    x += QuantumTorusElement::generator(rank, g, c);
  }
  return x;
}

// Largest coefficient discrepancy between two elements at a point.
double max_residual(const ExtendedElement& a, const ExtendedElement& b, const Point& p) {
  double r = 0;
  std::set<std::vector<long long>> keys;
  for (const auto& [d, f] : a.terms) keys.insert(d);
  for (const auto& [d, f] : b.terms) keys.insert(d);
  for (const auto& d : keys) {
    const cplx x = *a.eval(d, p.tau, p.theta), y = *b.eval(d, p.tau, p.theta);
    r = std::max(r, std::abs(x - y) / std::max(1.0, std::abs(y)));
  }
  return r;
}

double fn_residual(const CF& f, const CF& g, const Point& p) {
  const cplx x = *f.eval(p.tau, p.theta), y = *g.eval(p.tau, p.theta);
  return std::abs(x - y) / std::max(1.0, std::abs(y));
}

}  // namespace

TEST_CASE("Laurent polynomials in q^{1/2}") {
  const LaurentQ a = LaurentQ::monomial(1, 2.0) + LaurentQ(3.0);
  const LaurentQ b = LaurentQ::monomial(-1) + LaurentQ::monomial(1, -1.0);
  const LaurentQ ab = a * b;
  CHECK(ab.terms() == std::map<int, cplx>{{-1, 3.0}, {0, 2.0}, {1, -3.0}, {2, -2.0}});
  CHECK((a + LaurentQ::monomial(1, -2.0) + LaurentQ(-3.0)).is_zero());
  const cplx h(0.3, 0.4);
  CHECK(std::abs(ab.at_half_power(h) - a.at_half_power(h) * b.at_half_power(h)) < 1e-15);
}

TEST_CASE("quantum torus product") {
  const auto S = doubled_a1(1.0).skew_form;
  const auto ya = QuantumTorusElement::generator(2, alpha), yv = QuantumTorusElement::generator(2, alpha_v);
  const auto p = qt_mul(ya, yv, S);
  CHECK(p == QuantumTorusElement::generator(2, {1, 1}, LaurentQ::monomial(-1)));
  CHECK(qt_mul(yv, ya, S) == QuantumTorusElement::generator(2, {1, 1}, LaurentQ::monomial(1)));
  CHECK(qt_mul(ya, QuantumTorusElement::generator(2, -alpha), S) == QuantumTorusElement::generator(2, {0, 0}));
  CHECK_THROWS_AS(qt_mul(ya, QuantumTorusElement::generator(3, {0, 0, 1}), S), Error);

  // Brute-force oracle: y_a y_b y_c = q^{(⟨a,b⟩+⟨a,c⟩+⟨b,c⟩)/2} y_{a+b+c}, extended trilinearly.
  const auto big = direct_sum(doubled_a1(1.0), doubled_a1(2.0));
  oracle::Sampler s(3);
  for (int it = 0; it < 100; ++it) {
    const auto a = random_torus(s, 4, 3), b = random_torus(s, 4, 3), c = random_torus(s, 4, 3);
    const auto left = qt_mul(qt_mul(a, b, big.skew_form), c, big.skew_form);
    const auto right = qt_mul(a, qt_mul(b, c, big.skew_form), big.skew_form);
    QuantumTorusElement brute;
    brute.rank = 4;
    for (const auto& [g1, c1] : a.terms)
      for (const auto& [g2, c2] : b.terms)
        for (const auto& [g3, c3] : c.terms) {
          const long long e = big.pairing(g1, g2) + big.pairing(g1, g3) + big.pairing(g2, g3);
          brute += QuantumTorusElement::generator(4, g1 + g2 + g3, LaurentQ::monomial(int(e)) * c1 * c2 * c3);
        }
    CHECK(left == brute);
    CHECK(right == brute);
  }
}

TEST_CASE("coefficient functions") {
  oracle::Sampler s(5);
  const Point p = sample_point(s, 2);
  const CF th0 = CF::theta({1, 0}), th = CF::theta({2, -1});
  CHECK(*th.eval(p.tau, p.theta) == 2.0 * p.theta[0] - p.theta[1]);
  CHECK(std::abs(*exp(CF(I) * CF::tau()).eval(p.tau, p.theta) - std::exp(I * p.tau)) < 1e-15);
  CHECK(std::abs(*pow(th0, -3).eval(p.tau, p.theta) - std::pow(p.theta[0], -3)) < 1e-12 * std::abs(std::pow(p.theta[0], -3)));
  const CF lam = CF::lambda(CF(1.0), CF(0.0), CF(1.0));
  CHECK(std::abs(*lam.eval(p.tau, p.theta) - std::exp(1.0) / std::sqrt(2 * pi)) < 1e-14);

  // shift(a)∘shift(b) = shift(a+b), also when nested without merging.
  const CF f = exp(th0 * CF::tau()) + CF::theta({0, 1}) * th0;
  const std::vector<long long> a{1, -2}, b{3, 1}, ab{4, -1};
  const std::vector<cplx> ca{0.1, I}, cb{-0.3, 0.2}, cab{-0.2, cplx(0.2, 1)};
  for (int i = 0; i < 20; ++i) {
    const Point q = sample_point(s, 2);
    const cplx want = *f.shifted(ab, cab).eval(q.tau, q.theta);
    CHECK(std::abs(*f.shifted(a, ca).shifted(b, cb).eval(q.tau, q.theta) - want) < 1e-12 * std::abs(want));
    // Direct substitution oracle.
    std::vector<cplx> moved = q.theta;
    for (int k = 0; k < 2; ++k) moved[k] += double(ab[k]) * q.tau + cab[k];
    CHECK(std::abs(*f.eval(q.tau, moved) - want) < 1e-12 * std::abs(want));
  }
  CHECK(f.shifted(a).shifted({-1, 2}).kind() != CF::Kind::shift);

  // Division by zero and log of zero are signals.
  const Value z = (CF(1.0) / (th0 - th0)).eval(p.tau, p.theta);
  CHECK_FALSE(z.finite());
  CHECK(z.sig().kind == SignalKind::pole);
  CHECK(log(CF(0.0)).eval(p.tau, p.theta).sig().kind == SignalKind::zero);
  CHECK(CF::eq(CF(0.5), CF(1.0)).eval(p.tau, p.theta).sig().kind == SignalKind::zero);
}

TEST_CASE("extended product") {
  const auto b = doubled_a1(cplx(0.4, 1.1));
  const auto ctx = ctx_of(b);
  CHECK(ctx->theta_shift({1}) == std::vector<long long>{1});
  oracle::Sampler s(11);

  // (f·y_{α∨}) * (g·y_0) = f(θ)g(θ+τ)·y_{α∨}.
  const CF f = exp(CF::theta({1}) * CF(cplx(0.3, 0.2))), g = CF::theta({1}) * CF::theta({1}) + CF::tau();
  const auto prod = ext_mul(ExtendedElement::monomial(ctx, {1}, f), ExtendedElement::scalar(ctx, g));
  REQUIRE(prod.terms.size() == 1);
  for (int i = 0; i < 20; ++i) {
    const Point p = sample_point(s, 1);
    const cplx th = p.theta[0], t = p.tau;
    const cplx want = std::exp(th * cplx(0.3, 0.2)) * ((th + t) * (th + t) + t);
    CHECK(std::abs(*prod.eval({1}, t, p.theta) - want) < 1e-13 * std::abs(want));
    // Degree 0 commutes.
    const auto u = ExtendedElement::scalar(ctx, f), v = ExtendedElement::scalar(ctx, g);
    CHECK(max_residual(ext_mul(u, v), ext_mul(v, u), p) < 1e-14);
  }

  // Associativity against a direct triple-sum evaluation on the 4-dim direct sum.
  const auto big = direct_sum(b, doubled_a1(cplx(-1, 0.3)));
  const auto bctx = ctx_of(big);
  double worst = 0;
  for (int it = 0; it < 20; ++it) {
    const auto x = random_element(s, bctx, 2), y = random_element(s, bctx, 2), z = random_element(s, bctx, 2);
    const Point p = sample_point(s, 2);
    const auto l = ext_mul(ext_mul(x, y), z), r = ext_mul(x, ext_mul(y, z));
    worst = std::max(worst, max_residual(l, r, p));
    std::map<std::vector<long long>, cplx> brute;
    for (const auto& [d1, f1] : x.terms)
      for (const auto& [d2, f2] : y.terms)
        for (const auto& [d3, f3] : z.terms) {
          std::vector<cplx> t2 = p.theta, t3 = p.theta;
          std::vector<long long> d12(2);
          for (int i = 0; i < 2; ++i) d12[i] = d1[i] + d2[i];
          const auto s1 = bctx->theta_shift(d1), s12 = bctx->theta_shift(d12);
          for (int i = 0; i < 2; ++i) {
            t2[i] += double(s1[i]) * p.tau;
            t3[i] += double(s12[i]) * p.tau;
          }
          std::vector<long long> d{d12[0] + d3[0], d12[1] + d3[1]};
          brute[d] += *f1.eval(p.tau, p.theta) * *f2.eval(p.tau, t2) * *f3.eval(p.tau, t3);
        }
    for (const auto& [d, v] : brute) worst = std::max(worst, std::abs(*l.eval(d, p.tau, p.theta) - v) / std::max(1.0, std::abs(v)));
  }
  CHECK(worst < 1e-12);

  auto other = std::make_shared<const ExtendedContext>(ExtendedContext{bctx->skew_form, EMSplitting{{{0, 1, 0, 0}, {0, 0, 1, 0}}, {{1, 0, 0, 0}, {0, 0, 0, 1}}, 2}});
  CHECK_THROWS_AS(ext_mul(ExtendedElement::scalar(bctx, 1.0), ExtendedElement::scalar(other, 1.0)), Error);

  // Inverse of a monomial.
  const auto m = ExtendedElement::monomial(ctx, {2}, f + CF(2.0));
  const Point p = sample_point(s, 1);
  CHECK(max_residual(ext_mul(m, ext_inverse(m)), ExtendedElement::scalar(ctx, 1.0), p) < 1e-14);
  CHECK(max_residual(ext_mul(ext_inverse(m), m), ExtendedElement::scalar(ctx, 1.0), p) < 1e-14);
}

TEST_CASE("embedding") {
  const auto b = doubled_a1(cplx(0.4, 1.1));
  const auto ctx = ctx_of(b);
  oracle::Sampler s(13);
  const Point p = sample_point(s, 1);
  const auto qh = embed(QuantumTorusElement::generator(2, {0, 0}, LaurentQ::monomial(1)), ctx);
  CHECK(std::abs(*qh.eval({0}, p.tau, p.theta) - std::exp(I * pi * p.tau)) < 1e-15);
  const auto ya = embed(QuantumTorusElement::generator(2, alpha), ctx);
  CHECK(std::abs(*ya.eval({0}, p.tau, p.theta) - std::exp(2.0 * pi * I * p.theta[0])) < 1e-15);
  const auto yv = embed(QuantumTorusElement::generator(2, alpha_v), ctx);
  REQUIRE(yv.terms.size() == 1);
  CHECK(yv.terms.begin()->first == std::vector<long long>{1});
  CHECK(*yv.eval({1}, p.tau, p.theta) == cplx(1));
  // y_{mα+nα∨} ↦ exp(πi·mn·τ + 2πimθ)·y_{nα∨}.
  const auto y32 = embed(QuantumTorusElement::generator(2, {3, 2}), ctx);
  CHECK(std::abs(*y32.eval({2}, p.tau, p.theta) - std::exp(I * pi * 6.0 * p.tau + 2.0 * pi * I * 3.0 * p.theta[0])) < 1e-13);

  // Injectivity witness.
  const auto qya = embed(QuantumTorusElement::generator(2, alpha, LaurentQ::monomial(2)), ctx);
  CHECK(std::abs(*ya.eval({0}, p.tau, p.theta) - *qya.eval({0}, p.tau, p.theta)) > 1e-3);

  // Homomorphism on the 4-dim direct sum.
  const auto big = direct_sum(b, doubled_a1(cplx(-1, 0.3)));
  const auto bctx = ctx_of(big);
  double worst = 0;
  for (int it = 0; it < 100; ++it) {
    const auto u = random_torus(s, 4, 2), v = random_torus(s, 4, 2);
    const Point q = sample_point(s, 2);
    worst = std::max(worst, max_residual(embed(qt_mul(u, v, big.skew_form), bctx), ext_mul(embed(u, bctx), embed(v, bctx)), q));
  }
  CHECK(worst < 1e-12);

  // A class outside the lattice spanned by the splitting.
  auto half = std::make_shared<const ExtendedContext>(ExtendedContext{b.skew_form, EMSplitting{{{2, 0}}, {{0, 1}}, 1}});
  CHECK_THROWS_AS(embed(QuantumTorusElement::generator(2, alpha), half), Error);
}

TEST_CASE("eps_Z") {
  const cplx z(0.4, 1.1);
  const auto b = doubled_a1(z);
  const auto ctx = ctx_of(b);
  oracle::Sampler s(17);
  const cplx t(0.7, -0.3);
  const auto e = eps_z(b, ctx, t);
  CHECK_THROWS_AS(eps_z(b, ctx, 0.0), Error);
  for (int i = 0; i < 20; ++i) {
    const Point p = sample_point(s, 1);
    const auto ya = embed(QuantumTorusElement::generator(2, alpha), ctx);
    const auto img = e.apply(ya);
    CHECK(std::abs(*img.eval({0}, p.tau, p.theta) - std::exp(2.0 * pi * I * p.theta[0]) * std::exp(z / t)) < 1e-12);
    const auto yv = embed(QuantumTorusElement::generator(2, alpha_v), ctx);
    CHECK(std::abs(*e.apply(yv).eval({1}, p.tau, p.theta) - 1.0) < 1e-15);
  }
  // Z ↦ −Z undoes it; so does t ↦ −t.
  RefinedBPSStructure neg = b;
  for (auto& c : neg.central_charge) c = -c;
  const auto id1 = compose(eps_z(neg, ctx, t), e), id2 = compose(eps_z(b, ctx, -t), e);
  oracle::Sampler s2(19);
  for (int i = 0; i < 20; ++i) {
    const Point p = sample_point(s2, 1);
    const auto x = random_element(s2, ctx, 3);
    CHECK(max_residual(id1.apply(x), x, p) < 1e-12);
    CHECK(max_residual(id2.apply(x), x, p) < 1e-12);
  }
  // General lift: on an embedded y_γ, ε_Z(t)(y_γ) = e^{Z(γ)/t} y_γ for every γ.
  const auto big = direct_sum(b, doubled_a1(cplx(-1, 0.3)));
  const auto bctx = ctx_of(big);
  const auto eb = eps_z(big, bctx, t);
  for (int i = 0; i < 20; ++i) {
    Charge g(4);
    for (auto& v : g) v = s.integer(-2, 2);
    const auto y = embed(QuantumTorusElement::generator(4, g), bctx);
    auto want = y;
    for (auto& [d, f] : want.terms) f = f * CF(std::exp(big.Z(g) / t));
    CHECK(max_residual(eb.apply(y), want, sample_point(s, 2)) < 1e-12);
  }
}

TEST_CASE("S_q(l) on doubled A1") {
  const cplx z(0.4, 1.1);
  const auto b = doubled_a1(z);
  const auto ctx = ctx_of(b);
  const auto sigma = canonical_refinement(b);
  const auto rays = active_rays(b);
  REQUIRE(rays.size() == 2);
  const Ray& lp = rays[1];
  const Ray& lm = rays[0];
  REQUIRE(lp.classes == std::vector<Charge>{alpha});
  const auto sp = s_q_ray(b, ctx, sigma, lp), sm = s_q_ray(b, ctx, sigma, lm);
  oracle::Sampler s(23);
  for (int i = 0; i < 20; ++i) {
    const Point p = sample_point(s, 1);
    const cplx qh = std::exp(I * pi * p.tau), y = std::exp(2.0 * pi * I * p.theta[0]);
    CHECK(std::abs(*sp.multiplier({1}).eval(p.tau, p.theta) - 1.0 / (1.0 + qh * y)) < 1e-13);
    CHECK(std::abs(*sm.multiplier({1}).eval(p.tau, p.theta) - (1.0 + 1.0 / (qh * y))) < 1e-12);
    // Trivial on degree 0.
    const auto f = ExtendedElement::scalar(ctx, random_coefficient(s, 1));
    CHECK(max_residual(sp.apply(f), f, p) == 0);
  }
}

TEST_CASE("S_q(l) equals conjugation by the DT product") {
  // Doubled A1 plus a second class 2α with Ω = L^{-1/2} + L^{1/2}, so κ has two elements.
  auto b = doubled_a1(cplx(0.4, 1.1));
  b.omega[{2, 0}] = {{-1, Rational(1)}, {1, Rational(1)}};
  b.omega[{-2, 0}] = b.omega[{2, 0}];
  const auto big = direct_sum(b, doubled_a1(cplx(-1, 0.3)));
  oracle::Sampler s(29);
  for (const RefinedBPSStructure* st : std::vector<const RefinedBPSStructure*>{&b, &big}) {
    const auto ctx = ctx_of(*st);
    const auto sigma = canonical_refinement(*st);
    const int k = ctx->electric_dim(), mdim = ctx->magnetic_dim();
    for (const auto& ray : active_rays(*st)) {
      const auto sq = s_q_ray(*st, ctx, sigma, ray);
      const auto conj = ad(dt_product(*st, *ctx, ray), ctx);
      double worst = 0;
      for (int i = 0; i < 20; ++i) {
        const Point p = sample_point(s, k);
        std::vector<long long> d(mdim);
        for (auto& v : d) v = s.integer(-2, 2);
        worst = std::max(worst, fn_residual(sq.multiplier(d), conj.multiplier(d), p));
      }
      CHECK(worst < 1e-10);
    }
  }
  // ε(β,γ) = 0 gives the identity on y_β.
  const auto ctx = ctx_of(big);
  const auto rays = active_rays(big);
  for (const auto& ray : rays) {
    const auto sq = s_q_ray(big, ctx, canonical_refinement(big), ray);
    const bool first_block = ray.classes[0][0] != 0;
    CHECK(sq.multipliers[first_block ? 1 : 0].is_constant(1.0));
  }
}

TEST_CASE("S_q(l) preconditions") {
  auto b = doubled_a1(cplx(0.4, 1.1));
  const auto ctx = ctx_of(b);
  const auto sigma = canonical_refinement(b);
  auto nonint = b;
  nonint.omega[alpha] = nonint.omega[-alpha] = {{0, Rational(1, 2)}};
  CHECK_THROWS_AS(s_q_ray(nonint, ctx, sigma, active_rays(nonint)[1]), Error);
  CHECK_THROWS_AS(s_q_ray(b, ctx, sigma, Ray{1.0, {}}), Error);
  // σ violating σ(γ) = (−1)^{n+1}.
  const QuadraticRefinement wrong(b.skew_form, {0, 0});
  CHECK_THROWS_AS(s_q_ray(b, ctx, wrong, active_rays(b)[1]), Error);
}

TEST_CASE("automorphism invariants") {
  const cplx z(0.4, 1.1);
  const auto b = doubled_a1(z);
  const auto ctx = ctx_of(b);
  const auto sigma = canonical_refinement(b);
  const auto rays = active_rays(b);
  const cplx t(0.6, 0.8);
  const auto u = CF::eq(exp(CF(2.0 * pi * I) * CF::tau()), CF(-0.3) * exp(CF(2.0 * pi * I) * CF::theta({1})));
  std::vector<std::pair<const char*, GradedAutomorphism>> autos{
      {"eps", eps_z(b, ctx, t)},
      {"s+", s_q_ray(b, ctx, sigma, rays[1])},
      {"s-", s_q_ray(b, ctx, sigma, rays[0])},
      {"ad", ad(u, ctx)},
  };
  oracle::Sampler s(31);
  for (const auto& [name, a] : autos) {
    CAPTURE(name);
    double worst = 0, inv = 0;
    for (int i = 0; i < 100; ++i) {
      const auto x = random_element(s, ctx, 2), y = random_element(s, ctx, 2);
      const Point p = sample_point(s, 1);
      const auto lhs = a.apply(ext_mul(x, y));
      worst = std::max(worst, max_residual(lhs, ext_mul(a.apply(x), a.apply(y)), p));
      // Grading preserved: same support.
      for (const auto& [d, f] : lhs.terms) CHECK(ext_mul(x, y).terms.count(d) == 1);
      if (i < 20) inv = std::max(inv, max_residual(compose(a.inverse(), a).apply(x), x, p));
    }
    CHECK(worst < 1e-10);
    CHECK(inv < 1e-10);
  }

  // ε_Z(−t)∘S_q(ℓ±)^{±1}∘ε_Z(t): y_{α∨} ↦ (1+q^{±1/2}e^{∓z/t}y_{±α})^{−1}.
  for (int sgn : {1, -1}) {
    const auto sq = s_q_ray(b, ctx, sigma, rays[sgn > 0 ? 1 : 0]);
    const auto tilde = compose(eps_z(b, ctx, -t), compose(sgn > 0 ? sq : sq.inverse(), eps_z(b, ctx, t)));
    for (int i = 0; i < 20; ++i) {
      const Point p = sample_point(s, 1);
      const cplx want = 1.0 / (1.0 + std::exp(double(sgn) * (I * pi * p.tau - z / t + 2.0 * pi * I * p.theta[0])));
      CHECK(std::abs(*tilde.multiplier({1}).eval(p.tau, p.theta) - want) < 1e-10 * std::abs(want));
    }
  }
}

TEST_CASE("ad") {
  const auto b = doubled_a1(cplx(0.4, 1.1));
  const auto ctx = ctx_of(b);
  oracle::Sampler s(37);
  const auto c = ad(CF(cplx(2, 3)), ctx);
  const Point p0 = sample_point(s, 1);
  CHECK(*c.multiplier({1}).eval(p0.tau, p0.theta) == cplx(1));
  // Ad(u)(y_{α∨}) = u(θ)u(θ+τ)^{-1} y_{α∨}.
  const CF u = exp(CF::theta({1}) * CF::theta({1})) + CF::tau();
  const CF v = CF(2.0) + exp(CF(I) * CF::theta({1}));
  for (int i = 0; i < 20; ++i) {
    const Point p = sample_point(s, 1);
    const cplx th = p.theta[0], t = p.tau;
    const cplx want = (std::exp(th * th) + t) / (std::exp((th + t) * (th + t)) + t);
    CHECK(std::abs(*ad(u, ctx).multiplier({1}).eval(t, p.theta) - want) < 1e-12 * std::abs(want));
    CHECK(fn_residual(ad(u * v, ctx).multiplier({-2}), compose(ad(u, ctx), ad(v, ctx)).multiplier({-2}), p) < 1e-10);
  }
  // u vanishing at the evaluation point.
  const auto z = ad(CF::theta({1}), ctx).multiplier({1}).eval(cplx(0, 1), {cplx(0, -1)});
  CHECK_FALSE(z.finite());
}

TEST_CASE("JSON round trip of extended data") {
  const auto b = doubled_a1(cplx(0.4, 1.1));
  const auto ctx = ctx_of(b);
  oracle::Sampler s(41);
  const auto x = random_element(s, ctx, 3);
  const auto sq = s_q_ray(b, ctx, canonical_refinement(b), active_rays(b)[1]);
  const auto y = sq.apply(ext_add(x, ExtendedElement::scalar(ctx, CF::lambda(CF(1.0), CF::theta({1}), CF(1.0)) /
                                                                       CF::f(CF(2.0), CF::tau(), CF(1.0), CF::tau()))))
                     ;
  const auto back = extended_from_json(nlohmann::json::parse(to_json(y).dump()), ctx);
  CHECK(to_json(back).dump() == to_json(y).dump());
  for (int i = 0; i < 5; ++i) {
    const Point p = sample_point(s, 1);
    for (const auto& [d, f] : y.terms) CHECK(*back.eval(d, p.tau, p.theta) == *f.eval(p.tau, p.theta));  // bit-exact
  }
  const auto j = eps_z(b, ctx, cplx(0.5, 0.5)).to_json();
  CHECK(j["translation"].size() == 1);
  CHECK_THROWS_AS(CF::from_json(nlohmann::json::parse(R"({"kind":"nope"})")), Error);
  CHECK_THROWS_AS(CF::from_json(nlohmann::json::parse(R"({"kind":"add","args":[{"kind":"tau"}]})")), Error);
}
