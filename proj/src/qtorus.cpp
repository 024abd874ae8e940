#include "qrh/qtorus.hpp"

#include <numbers>

#include "qrh/errors.hpp"
#include "qrh/special.hpp"

namespace qrh {

namespace {

constexpr cplx two_pi_i(0, 2 * std::numbers::pi);
using Kind = CoefficientFunction::Kind;

Value lift(Value a, Value b, cplx (*op)(cplx, cplx)) {
  if (!a) return a;
  if (!b) return b;
  return op(*a, *b);
}

std::vector<long long> add_vec(std::vector<long long> a, const std::vector<long long>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

std::vector<cplx> add_vec(std::vector<cplx> a, const std::vector<cplx>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

bool all_zero(const std::vector<long long>& v) {
  for (auto x : v)
    if (x) return false;
  return true;
}

bool all_zero(const std::vector<cplx>& v) {
  for (auto x : v)
    if (x != cplx(0)) return false;
  return true;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::constant: return "const";
    case Kind::tau: return "tau";
    case Kind::theta: return "theta";
    case Kind::add: return "add";
    case Kind::sub: return "sub";
    case Kind::mul: return "mul";
    case Kind::div: return "div";
    case Kind::neg: return "neg";
    case Kind::exp: return "exp";
    case Kind::log: return "log";
    case Kind::pow: return "pow";
    case Kind::ipow: return "ipow";
    case Kind::lambda: return "lambda";
    case Kind::f: return "f";
    case Kind::eq: return "eq";
    case Kind::shift: return "shift";
  }
  return "?";
}

nlohmann::json cjson(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }
cplx from_cjson(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

// ---- LaurentQ ----

LaurentQ::LaurentQ(cplx c) { add(0, c); }

LaurentQ LaurentQ::monomial(int k, cplx c) {
  LaurentQ r;
  r.add(k, c);
  return r;
}

void LaurentQ::add(int k, cplx c) {
  if (c == cplx(0)) return;
  auto [it, fresh] = t_.emplace(k, c);
  if (fresh) return;
  it->second += c;
  if (it->second == cplx(0)) t_.erase(it);
}

cplx LaurentQ::at_half_power(cplx q_half) const {
  cplx s = 0;
  for (const auto& [k, c] : t_) s += c * std::pow(q_half, k);
  return s;
}

LaurentQ& LaurentQ::operator+=(const LaurentQ& o) {
  for (const auto& [k, c] : o.t_) add(k, c);
  return *this;
}

LaurentQ operator*(const LaurentQ& a, const LaurentQ& b) {
  LaurentQ r;
  for (const auto& [i, x] : a.t_)
    for (const auto& [j, y] : b.t_) r.add(i + j, x * y);
  return r;
}

// ---- QuantumTorusElement ----

QuantumTorusElement QuantumTorusElement::generator(int rank, const Charge& g, LaurentQ c) {
  if (static_cast<int>(g.size()) != rank) throw Error(Errc::rank_mismatch, "generator has wrong rank");
  QuantumTorusElement e;
  e.rank = rank;
  if (!c.is_zero()) e.terms[g] = std::move(c);
  return e;
}

QuantumTorusElement& QuantumTorusElement::operator+=(const QuantumTorusElement& o) {
  if (o.rank != rank) throw Error(Errc::rank_mismatch, "adding torus elements of different rank");
  for (const auto& [g, c] : o.terms) {
    auto& slot = terms[g];
    slot += c;
    if (slot.is_zero()) terms.erase(g);
  }
  return *this;
}

QuantumTorusElement qt_mul(const QuantumTorusElement& a, const QuantumTorusElement& b, const IntMatrix& form) {
  if (a.rank != b.rank || static_cast<int>(form.size()) != a.rank)
    throw Error(Errc::rank_mismatch, "quantum torus product of incompatible ranks");
  QuantumTorusElement r;
  r.rank = a.rank;
  for (const auto& [g1, c1] : a.terms)
    for (const auto& [g2, c2] : b.terms) {
      long long p = 0;
      for (int i = 0; i < a.rank; ++i)
        for (int j = 0; j < a.rank; ++j) p += g1[i] * form[i][j] * g2[j];
      QuantumTorusElement t;
      t.rank = a.rank;
      t.terms[g1 + g2] = LaurentQ::monomial(static_cast<int>(p)) * c1 * c2;
      r += t;
    }
  return r;
}

// ---- CoefficientFunction ----

namespace {

CoefficientFunction::Node make(Kind k, std::vector<CoefficientFunction> args) {
  CoefficientFunction::Node n;
  n.kind = k;
  n.args = std::move(args);
  return n;
}

}  // namespace

CoefficientFunction::CoefficientFunction() : CoefficientFunction(cplx(1.0)) {}

CoefficientFunction::CoefficientFunction(cplx c) {
  Node n;
  n.kind = Kind::constant;
  n.c = c;
  n_ = std::make_shared<const Node>(std::move(n));
}

CoefficientFunction CoefficientFunction::tau() {
  Node n;
  n.kind = Kind::tau;
  return CoefficientFunction(std::make_shared<const Node>(std::move(n)));
}

CoefficientFunction CoefficientFunction::theta(std::vector<long long> coeffs) {
  if (all_zero(coeffs)) return CoefficientFunction(cplx(0));
  Node n;
  n.kind = Kind::theta;
  n.lin = std::move(coeffs);
  return CoefficientFunction(std::make_shared<const Node>(std::move(n)));
}

CoefficientFunction CoefficientFunction::lambda(CoefficientFunction w, CoefficientFunction eta,
                                                CoefficientFunction omega) {
  return CoefficientFunction(std::make_shared<const Node>(make(Kind::lambda, {w, eta, omega})));
}

CoefficientFunction CoefficientFunction::f(CoefficientFunction w, CoefficientFunction eta, CoefficientFunction w1,
                                           CoefficientFunction w2) {
  return CoefficientFunction(std::make_shared<const Node>(make(Kind::f, {w, eta, w1, w2})));
}

CoefficientFunction CoefficientFunction::eq(CoefficientFunction q, CoefficientFunction x) {
  return CoefficientFunction(std::make_shared<const Node>(make(Kind::eq, {q, x})));
}

Kind CoefficientFunction::kind() const { return n_->kind; }

bool CoefficientFunction::is_constant(cplx c) const { return n_->kind == Kind::constant && n_->c == c; }

CoefficientFunction operator+(const CoefficientFunction& a, const CoefficientFunction& b) {
  if (a.is_constant(0)) return b;
  if (b.is_constant(0)) return a;
  if (a.kind() == Kind::constant && b.kind() == Kind::constant) return a.n_->c + b.n_->c;
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(make(Kind::add, {a, b})));
}

CoefficientFunction operator-(const CoefficientFunction& a, const CoefficientFunction& b) {
  if (b.is_constant(0)) return a;
  if (a.kind() == Kind::constant && b.kind() == Kind::constant) return a.n_->c - b.n_->c;
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(make(Kind::sub, {a, b})));
}

CoefficientFunction operator*(const CoefficientFunction& a, const CoefficientFunction& b) {
  if (a.is_constant(1)) return b;
  if (b.is_constant(1)) return a;
  if (a.kind() == Kind::constant && b.kind() == Kind::constant) return a.n_->c * b.n_->c;
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(make(Kind::mul, {a, b})));
}

CoefficientFunction operator/(const CoefficientFunction& a, const CoefficientFunction& b) {
  if (b.is_constant(1)) return a;
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(make(Kind::div, {a, b})));
}

CoefficientFunction operator-(const CoefficientFunction& a) {
  if (a.kind() == Kind::constant) return -a.n_->c;
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(make(Kind::neg, {a})));
}

CoefficientFunction exp(const CoefficientFunction& a) {
  if (a.kind() == Kind::constant) return std::exp(a.n_->c);
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(make(Kind::exp, {a})));
}

CoefficientFunction log(const CoefficientFunction& a) {
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(make(Kind::log, {a})));
}

CoefficientFunction pow(const CoefficientFunction& a, const CoefficientFunction& b) {
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(make(Kind::pow, {a, b})));
}

CoefficientFunction pow(const CoefficientFunction& a, int n) {
  if (n == 0) return cplx(1);
  if (n == 1) return a;
  auto node = make(Kind::ipow, {a});
  node.n = n;
  return CoefficientFunction(std::make_shared<const CoefficientFunction::Node>(std::move(node)));
}

CoefficientFunction CoefficientFunction::shifted(const std::vector<long long>& d, const std::vector<cplx>& c) const {
  if (all_zero(d) && all_zero(c)) return *this;
  if (n_->kind == Kind::constant || n_->kind == Kind::tau) return *this;
  if (n_->kind == Kind::shift) {
    Node m = *n_;
    m.lin = add_vec(m.lin, d);
    m.offset = add_vec(m.offset, c);
    if (all_zero(m.lin) && all_zero(m.offset)) return m.args[0];
    return CoefficientFunction(std::make_shared<const Node>(std::move(m)));
  }
  Node m = make(Kind::shift, {*this});
  m.lin = d;
  m.offset = c;
  return CoefficientFunction(std::make_shared<const Node>(std::move(m)));
}

Value CoefficientFunction::eval(cplx tau, const std::vector<cplx>& theta) const {
  const Node& n = *n_;
  auto arg = [&](int i) { return n.args[i].eval(tau, theta); };
  switch (n.kind) {
    case Kind::constant: return n.c;
    case Kind::tau: return tau;
    case Kind::theta: {
      if (n.lin.size() > theta.size()) throw Error(Errc::rank_mismatch, "theta has too few components");
      cplx s = 0;
      for (std::size_t i = 0; i < n.lin.size(); ++i) s += double(n.lin[i]) * theta[i];
      return s;
    }
    case Kind::add: return lift(arg(0), arg(1), [](cplx a, cplx b) { return a + b; });
    case Kind::sub: return lift(arg(0), arg(1), [](cplx a, cplx b) { return a - b; });
    case Kind::mul: return lift(arg(0), arg(1), [](cplx a, cplx b) { return a * b; });
    case Kind::div: {
      const Value a = arg(0), b = arg(1);
      if (!a) return a;
      if (!b) return b.flipped();
      if (*b == cplx(0)) return Value::signal(SignalKind::pole, 0.0, "division by zero");
      return *a / *b;
    }
    case Kind::neg: {
      const Value a = arg(0);
      return a ? Value(-*a) : a;
    }
    case Kind::exp: {
      const Value a = arg(0);
      return a ? Value(std::exp(*a)) : a;
    }
    case Kind::log: {
      const Value a = arg(0);
      if (!a) return a;
      if (*a == cplx(0)) return Value::signal(SignalKind::zero, 0.0, "log");
      return std::log(*a);
    }
    case Kind::pow: {
      const Value a = arg(0), b = arg(1);
      if (!a) return a;
      if (!b) return b;
      if (*a == cplx(0)) return Value::signal(SignalKind::zero, 0.0, "pow");
      return std::exp(*b * std::log(*a));
    }
    case Kind::ipow: {
      const Value a = arg(0);
      if (!a) return n.n < 0 ? a.flipped() : a;
      if (*a == cplx(0) && n.n < 0) return Value::signal(SignalKind::pole, 0.0, "ipow");
      cplx r = 1, b = n.n < 0 ? 1.0 / *a : *a;
      for (int k = std::abs(n.n); k; k >>= 1, b *= b)
        if (k & 1) r *= b;
      return r;
    }
    case Kind::lambda: {
      const Value w = arg(0), e = arg(1), o = arg(2);
      for (const Value* v : {&w, &e, &o})
        if (!*v) return *v;
      return lambda_fn({*w, *e, *o});
    }
    case Kind::f: {
      const Value w = arg(0), e = arg(1), a = arg(2), b = arg(3);
      for (const Value* v : {&w, &e, &a, &b})
        if (!*v) return *v;
      return f_fn({*w, *e, *a, *b});
    }
    case Kind::eq: {
      const Value q = arg(0), x = arg(1);
      if (!q) return q;
      if (!x) return x;
      const cplx r = quantum_dilog({*q, *x});
      if (r == cplx(0)) return Value::signal(SignalKind::zero, *x, "eq");
      return r;
    }
    case Kind::shift: {
      std::vector<cplx> th = theta;
      const std::size_t k = std::max(n.lin.size(), n.offset.size());
      if (th.size() < k) throw Error(Errc::rank_mismatch, "theta has too few components");
      for (std::size_t i = 0; i < n.lin.size(); ++i) th[i] += double(n.lin[i]) * tau;
      for (std::size_t i = 0; i < n.offset.size(); ++i) th[i] += n.offset[i];
      return n.args[0].eval(tau, th);
    }
  }
  return Value::signal(SignalKind::pole, 0.0, "unknown node");
}

nlohmann::json CoefficientFunction::to_json() const {
  const Node& n = *n_;
  nlohmann::json j;
  j["kind"] = kind_name(n.kind);
  switch (n.kind) {
    case Kind::constant: j["value"] = cjson(n.c); break;
    case Kind::theta: j["coeffs"] = n.lin; break;
    case Kind::ipow: j["n"] = n.n; break;
    case Kind::shift: {
      j["tau_part"] = n.lin;
      auto c = nlohmann::json::array();
      for (auto v : n.offset) c.push_back(cjson(v));
      j["offset"] = c;
      break;
    }
    default: break;
  }
  if (!n.args.empty()) {
    auto a = nlohmann::json::array();
    for (const auto& x : n.args) a.push_back(x.to_json());
    j["args"] = a;
  }
  return j;
}

CoefficientFunction CoefficientFunction::from_json(const nlohmann::json& j) {
  try {
    const std::string k = j.at("kind").get<std::string>();
    std::vector<CoefficientFunction> a;
    if (j.contains("args"))
      for (const auto& x : j.at("args")) a.push_back(from_json(x));
    auto need = [&](std::size_t n) {
      if (a.size() != n) throw Error(Errc::parse, "node '" + k + "' needs " + std::to_string(n) + " arguments");
    };
    auto raw = [&](Kind kind) {
      Node n = make(kind, a);
      return CoefficientFunction(std::make_shared<const Node>(std::move(n)));
    };
    if (k == "const") return from_cjson(j.at("value"));
    if (k == "tau") return tau();
    if (k == "theta") return theta(j.at("coeffs").get<std::vector<long long>>());
    if (k == "add") return need(2), raw(Kind::add);
    if (k == "sub") return need(2), raw(Kind::sub);
    if (k == "mul") return need(2), raw(Kind::mul);
    if (k == "div") return need(2), raw(Kind::div);
    if (k == "neg") return need(1), raw(Kind::neg);
    if (k == "exp") return need(1), raw(Kind::exp);
    if (k == "log") return need(1), raw(Kind::log);
    if (k == "pow") return need(2), raw(Kind::pow);
    if (k == "ipow") {
      need(1);
      Node n = make(Kind::ipow, a);
      n.n = j.at("n").get<int>();
      return CoefficientFunction(std::make_shared<const Node>(std::move(n)));
    }
    if (k == "lambda") return need(3), raw(Kind::lambda);
    if (k == "f") return need(4), raw(Kind::f);
    if (k == "eq") return need(2), raw(Kind::eq);
    if (k == "shift") {
      need(1);
      Node n = make(Kind::shift, a);
      n.lin = j.at("tau_part").get<std::vector<long long>>();
      for (const auto& c : j.at("offset")) n.offset.push_back(from_cjson(c));
      return CoefficientFunction(std::make_shared<const Node>(std::move(n)));
    }
    throw Error(Errc::parse, "unknown node kind '" + k + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, e.what());
  }
}

// ---- extended algebra ----

Charge ExtendedContext::lattice_vector(const std::vector<long long>& m) const {
  if (static_cast<int>(m.size()) != magnetic_dim()) throw Error(Errc::rank_mismatch, "magnetic degree has wrong size");
  Charge g(skew_form.size(), 0);
  for (std::size_t j = 0; j < m.size(); ++j) g = g + m[j] * splitting.magnetic_basis[j];
  return g;
}

long long ExtendedContext::pairing(const Charge& a, const Charge& b) const {
  long long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * skew_form[i][j] * b[j];
  return s;
}

std::vector<long long> ExtendedContext::theta_shift(const std::vector<long long>& m) const {
  const Charge delta = lattice_vector(m);
  std::vector<long long> d;
  for (const auto& e : splitting.electric_basis) d.push_back(pairing(delta, e));
  return d;
}

bool ExtendedContext::operator==(const ExtendedContext& o) const {
  return skew_form == o.skew_form && splitting.electric_basis == o.splitting.electric_basis &&
         splitting.magnetic_basis == o.splitting.magnetic_basis;
}

ExtendedContext make_context(const RefinedBPSStructure& b, const EMSplitting& s) {
  em_splitting(b, s);  // validates
  return ExtendedContext{b.skew_form, s};
}

ExtendedElement ExtendedElement::scalar(std::shared_ptr<const ExtendedContext> ctx, CoefficientFunction f) {
  std::vector<long long> zero(ctx->magnetic_dim(), 0);
  return monomial(std::move(ctx), zero, std::move(f));
}

ExtendedElement ExtendedElement::monomial(std::shared_ptr<const ExtendedContext> ctx, std::vector<long long> delta,
                                          CoefficientFunction f) {
  if (static_cast<int>(delta.size()) != ctx->magnetic_dim())
    throw Error(Errc::rank_mismatch, "magnetic degree has wrong size");
  ExtendedElement e;
  e.ctx = std::move(ctx);
  e.terms.emplace(std::move(delta), std::move(f));
  return e;
}

std::vector<long long> ExtendedElement::zero_degree() const {
  return std::vector<long long>(ctx->magnetic_dim(), 0);
}

Value ExtendedElement::eval(const std::vector<long long>& delta, cplx tau, const std::vector<cplx>& theta) const {
  const auto it = terms.find(delta);
  if (it == terms.end()) return cplx(0);
  return it->second.eval(tau, theta);
}

namespace {

void check_same(const ExtendedElement& a, const ExtendedElement& b) {
  if (!a.ctx || !b.ctx || (a.ctx != b.ctx && !(*a.ctx == *b.ctx)))
    throw Error(Errc::splitting_mismatch, "extended elements over different splittings");
}

}  // namespace

ExtendedElement ext_add(const ExtendedElement& a, const ExtendedElement& b) {
  check_same(a, b);
  ExtendedElement r = a;
  for (const auto& [d, f] : b.terms) {
    auto it = r.terms.find(d);
    if (it == r.terms.end())
      r.terms.emplace(d, f);
    else
      it->second = it->second + f;
  }
  return r;
}

ExtendedElement ext_mul(const ExtendedElement& a, const ExtendedElement& b) {
  check_same(a, b);
  ExtendedElement r;
  r.ctx = a.ctx;
  for (const auto& [d1, f1] : a.terms) {
    const auto shift = a.ctx->theta_shift(d1);
    for (const auto& [d2, f2] : b.terms) {
      const auto d = add_vec(d1, d2);
      const CoefficientFunction term = f1 * f2.shifted(shift);
      auto it = r.terms.find(d);
      if (it == r.terms.end())
        r.terms.emplace(d, term);
      else
        it->second = it->second + term;
    }
  }
  return r;
}

ExtendedElement ext_inverse(const ExtendedElement& m) {
  if (m.terms.size() != 1) throw Error(Errc::invalid_argument, "only monomials are inverted");
  const auto& [d, f] = *m.terms.begin();
  std::vector<long long> nd(d.size()), shift = m.ctx->theta_shift(d);
  for (std::size_t i = 0; i < d.size(); ++i) nd[i] = -d[i];
  for (auto& s : shift) s = -s;
  return ExtendedElement::monomial(m.ctx, nd, CoefficientFunction(1.0) / f.shifted(shift));
}

ExtendedElement embed(const QuantumTorusElement& a, std::shared_ptr<const ExtendedContext> ctx) {
  const int k = ctx->electric_dim();
  if (a.rank != static_cast<int>(ctx->skew_form.size())) throw Error(Errc::rank_mismatch, "embedding rank mismatch");
  ExtendedElement r{ctx, {}};
  const double pi = std::numbers::pi;
  for (const auto& [g, c] : a.terms) {
    const auto coords = em_coordinates(ctx->splitting, g);
    std::vector<long long> e(coords.begin(), coords.begin() + k), m(coords.begin() + k, coords.end());
    Charge ge(g.size(), 0);
    for (int i = 0; i < k; ++i) ge = ge + e[i] * ctx->splitting.electric_basis[i];
    const long long p = ctx->pairing(ctx->lattice_vector(m), ge);
    const auto th = CoefficientFunction::theta(e);
    CoefficientFunction f(0.0);
    for (const auto& [kk, ck] : c.terms())
      f = f + CoefficientFunction(ck) * exp(CoefficientFunction(cplx(0, pi * double(kk + p))) * CoefficientFunction::tau() +
                                           CoefficientFunction(two_pi_i) * th);
    r = ext_add(r, ExtendedElement::monomial(ctx, m, f));
  }
  return r;
}

// ---- automorphisms ----

CoefficientFunction GradedAutomorphism::act(const CoefficientFunction& f) const {
  return translation ? f.shifted({}, *translation) : f;
}

CoefficientFunction GradedAutomorphism::multiplier(const std::vector<long long>& delta) const {
  if (static_cast<int>(delta.size()) != ctx->magnetic_dim()) throw Error(Errc::rank_mismatch, "magnetic degree has wrong size");
  ExtendedElement x = ExtendedElement::scalar(ctx, 1.0);
  for (std::size_t j = 0; j < delta.size(); ++j) {
    std::vector<long long> ej(delta.size(), 0);
    ej[j] = 1;
    ExtendedElement g = ExtendedElement::monomial(ctx, ej, multipliers[j]);
    if (delta[j] < 0) g = ext_inverse(g);
    for (long long n = 0; n < std::abs(delta[j]); ++n) x = ext_mul(x, g);
  }
  return x.terms.at(delta);
}

ExtendedElement GradedAutomorphism::apply(const ExtendedElement& x) const {
  check_same(ExtendedElement{ctx, {}}, x);
  ExtendedElement r{ctx, {}};
  for (const auto& [d, f] : x.terms) r.terms.emplace(d, act(f) * multiplier(d));
  return r;
}

GradedAutomorphism GradedAutomorphism::identity(std::shared_ptr<const ExtendedContext> ctx) {
  GradedAutomorphism a;
  a.multipliers.assign(ctx->magnetic_dim(), CoefficientFunction(1.0));
  a.ctx = std::move(ctx);
  return a;
}

GradedAutomorphism GradedAutomorphism::inverse() const {
  GradedAutomorphism r;
  r.ctx = ctx;
  std::vector<cplx> back;
  if (translation) {
    back = *translation;
    for (auto& c : back) c = -c;
    r.translation = back;
  }
  for (const auto& m : multipliers) r.multipliers.push_back((CoefficientFunction(1.0) / m).shifted({}, back));
  return r;
}

GradedAutomorphism compose(const GradedAutomorphism& a, const GradedAutomorphism& b) {
  if (a.ctx != b.ctx && !(*a.ctx == *b.ctx)) throw Error(Errc::splitting_mismatch, "composing over different splittings");
  GradedAutomorphism r;
  r.ctx = a.ctx;
  if (a.translation || b.translation)
    r.translation = add_vec(a.translation.value_or(std::vector<cplx>{}), b.translation.value_or(std::vector<cplx>{}));
  for (std::size_t j = 0; j < a.multipliers.size(); ++j) r.multipliers.push_back(a.act(b.multipliers[j]) * a.multipliers[j]);
  return r;
}

nlohmann::json GradedAutomorphism::to_json() const {
  nlohmann::json j;
  auto m = nlohmann::json::array();
  for (const auto& f : multipliers) m.push_back(f.to_json());
  j["multipliers"] = m;
  if (translation) {
    auto t = nlohmann::json::array();
    for (auto c : *translation) t.push_back(cjson(c));
    j["translation"] = t;
  } else {
    j["translation"] = nullptr;
  }
  return j;
}

GradedAutomorphism eps_z(const RefinedBPSStructure& b, std::shared_ptr<const ExtendedContext> ctx, cplx t) {
  if (t == cplx(0)) throw Error(Errc::invalid_argument, "eps_z needs t != 0");
  GradedAutomorphism a;
  std::vector<cplx> c;
  for (const auto& e : ctx->splitting.electric_basis) c.push_back(b.Z(e) / (two_pi_i * t));
  a.translation = c;
  for (const auto& m : ctx->splitting.magnetic_basis) a.multipliers.emplace_back(std::exp(b.Z(m) / t));
  a.ctx = std::move(ctx);
  return a;
}

namespace {

// Electric coordinates of an active class, checking it has no magnetic part.
std::vector<long long> electric_coords(const ExtendedContext& ctx, const Charge& g) {
  const auto c = em_coordinates(ctx.splitting, g);
  const int k = ctx.electric_dim();
  for (std::size_t j = k; j < c.size(); ++j)
    if (c[j] != 0) throw Error(Errc::not_decomposable, "active class is not electric");
  return {c.begin(), c.begin() + k};
}

int integral_exponent(const Rational& r) {
  if (r.denominator() != 1) throw Error(Errc::unsupported_structure, "non-integral Omega_n needs integer exponents");
  return static_cast<int>(r.numerator());
}

}  // namespace

GradedAutomorphism s_q_ray(const RefinedBPSStructure& b, std::shared_ptr<const ExtendedContext> ctx,
                           const QuadraticRefinement& sigma, const Ray& ray) {
  const auto cls = classify(b);
  if (!cls.integral) throw Error(Errc::unsupported_structure, "s_q_ray needs integral Omega");
  if (!cls.uncoupled || !cls.palindromic) throw Error(Errc::unsupported_structure, "s_q_ray needs an uncoupled palindromic structure");
  if (ray.classes.empty()) throw Error(Errc::invalid_argument, "ray is not active");
  const auto tau = CoefficientFunction::tau();
  GradedAutomorphism a;
  for (const auto& beta : ctx->splitting.magnetic_basis) {
    CoefficientFunction m(1.0);
    for (const auto& g : ray.classes) {
      const auto* om = b.omega_at(g);
      if (!om) throw Error(Errc::invalid_argument, "ray lists an inactive class");
      const auto y = exp(CoefficientFunction(two_pi_i) * CoefficientFunction::theta(electric_coords(*ctx, g)));
      const KappaSet kap = kappa_set(b, beta, g);
      for (const auto& [n, c] : *om) {
        if (sigma(g) != ((n + 1) % 2 ? -1 : 1))
          throw Error(Errc::inconsistent_refinement, "sigma(gamma) != (-1)^{n+1} on an active class");
        const int e = -integral_exponent(c) * kap.epsilon;
        for (double lam : kap.halves) {
          const auto qpow = exp(CoefficientFunction(two_pi_i * (n / 2.0 + lam)) * tau);
          m = m * pow(CoefficientFunction(1.0) + qpow * y, e);
        }
      }
    }
    a.multipliers.push_back(m);
  }
  a.ctx = std::move(ctx);
  return a;
}

GradedAutomorphism ad(const CoefficientFunction& u, std::shared_ptr<const ExtendedContext> ctx) {
  GradedAutomorphism a;
  const int m = ctx->magnetic_dim();
  for (int j = 0; j < m; ++j) {
    std::vector<long long> ej(m, 0);
    ej[j] = 1;
    a.multipliers.push_back(u / u.shifted(ctx->theta_shift(ej)));
  }
  a.ctx = std::move(ctx);
  return a;
}

CoefficientFunction dt_product(const RefinedBPSStructure& b, const ExtendedContext& ctx, const Ray& ray) {
  const auto tau = CoefficientFunction::tau();
  const auto q = exp(CoefficientFunction(two_pi_i) * tau);
  CoefficientFunction u(1.0);
  for (const auto& g : ray.classes) {
    const auto th = CoefficientFunction::theta(electric_coords(ctx, g));
    for (const auto& [n, c] : *b.omega_at(g)) {
      const auto x = -exp(CoefficientFunction(cplx(0, std::numbers::pi * (n + 1))) * tau + CoefficientFunction(two_pi_i) * th);
      u = u * pow(CoefficientFunction::eq(q, x), -integral_exponent(c));
    }
  }
  return u;
}

nlohmann::json to_json(const ExtendedElement& x) {
  auto t = nlohmann::json::array();
  for (const auto& [d, f] : x.terms) t.push_back({{"delta", d}, {"f", f.to_json()}});
  return {{"terms", t}};
}

ExtendedElement extended_from_json(const nlohmann::json& j, std::shared_ptr<const ExtendedContext> ctx) {
  ExtendedElement e{ctx, {}};
  try {
    for (const auto& t : j.at("terms")) {
      auto d = t.at("delta").get<std::vector<long long>>();
      if (static_cast<int>(d.size()) != ctx->magnetic_dim()) throw Error(Errc::parse, "delta has wrong size");
      e.terms.emplace(std::move(d), CoefficientFunction::from_json(t.at("f")));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::parse, ex.what());
  }
  return e;
}

}  // namespace qrh
