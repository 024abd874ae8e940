#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"
#include "qrh/bps.hpp"
#include "qrh/value.hpp"

namespace qrh {

// Σ_k c_k q^{k/2}.
class LaurentQ {
 public:
  LaurentQ() = default;
  LaurentQ(cplx c);  // NOLINT(implicit)
  LaurentQ(double c) : LaurentQ(cplx(c)) {}  // NOLINT(implicit)
  static LaurentQ monomial(int k, cplx c = 1.0);

  const std::map<int, cplx>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  cplx at_half_power(cplx q_half) const;  // substitute q^{1/2}

  LaurentQ& operator+=(const LaurentQ& o);
  friend LaurentQ operator+(LaurentQ a, const LaurentQ& b) { return a += b; }
  friend LaurentQ operator*(const LaurentQ& a, const LaurentQ& b);
  friend bool operator==(const LaurentQ& a, const LaurentQ& b) { return a.t_ == b.t_; }

 private:
  void add(int k, cplx c);
  std::map<int, cplx> t_;  // no zero coefficients
};

// Finite sums Σ c_γ(q^{1/2}) y_γ with y_{γ₁}*y_{γ₂} = q^{⟨γ₁,γ₂⟩/2} y_{γ₁+γ₂}.
struct QuantumTorusElement {
  int rank = 0;
  std::map<Charge, LaurentQ> terms;

  static QuantumTorusElement generator(int rank, const Charge& g, LaurentQ c = 1.0);
  QuantumTorusElement& operator+=(const QuantumTorusElement& o);
  friend bool operator==(const QuantumTorusElement& a, const QuantumTorusElement& b) {
    return a.rank == b.rank && a.terms == b.terms;
  }
};

QuantumTorusElement qt_mul(const QuantumTorusElement& a, const QuantumTorusElement& b, const IntMatrix& form);

// Immutable expression in (τ, θ), θ ∈ V_e given by its values θ_i = θ(e_i) on the
// electric basis. Nodes are shared; copying is cheap.
class CoefficientFunction {
 public:
  enum class Kind {
    constant, tau, theta, add, sub, mul, div, neg, exp, log, pow, ipow, lambda, f, eq, shift
  };
  struct Node;

  CoefficientFunction();  // the constant 1
  CoefficientFunction(cplx c);  // NOLINT(implicit)
  CoefficientFunction(double c) : CoefficientFunction(cplx(c)) {}  // NOLINT(implicit)
  static CoefficientFunction tau();
  // θ(γ_e) = Σ c_i θ_i.
  static CoefficientFunction theta(std::vector<long long> coeffs);
  static CoefficientFunction lambda(CoefficientFunction w, CoefficientFunction eta, CoefficientFunction omega);
  static CoefficientFunction f(CoefficientFunction w, CoefficientFunction eta, CoefficientFunction w1,
                               CoefficientFunction w2);
  static CoefficientFunction eq(CoefficientFunction q, CoefficientFunction x);

  friend CoefficientFunction operator+(const CoefficientFunction& a, const CoefficientFunction& b);
  friend CoefficientFunction operator-(const CoefficientFunction& a, const CoefficientFunction& b);
  friend CoefficientFunction operator*(const CoefficientFunction& a, const CoefficientFunction& b);
  friend CoefficientFunction operator/(const CoefficientFunction& a, const CoefficientFunction& b);
  friend CoefficientFunction operator-(const CoefficientFunction& a);
  friend CoefficientFunction exp(const CoefficientFunction& a);
  friend CoefficientFunction log(const CoefficientFunction& a);  // principal
  friend CoefficientFunction pow(const CoefficientFunction& a, const CoefficientFunction& b);
  friend CoefficientFunction pow(const CoefficientFunction& a, int n);

  // f(τ, θ) ↦ f(τ, θ + τ·d + c). Nested shifts are merged.
  CoefficientFunction shifted(const std::vector<long long>& d, const std::vector<cplx>& c = {}) const;

  Value eval(cplx tau, const std::vector<cplx>& theta) const;
  Kind kind() const;
  bool is_constant(cplx c) const;
  const Node& node() const { return *n_; }

  nlohmann::json to_json() const;
  static CoefficientFunction from_json(const nlohmann::json& j);

 private:
  explicit CoefficientFunction(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct CoefficientFunction::Node {
  Kind kind = Kind::constant;
  cplx c{1.0};
  std::vector<long long> lin;  // theta: coefficients; shift: τ-part d
  std::vector<cplx> offset;    // shift: constant part
  int n = 0;                   // ipow exponent
  std::vector<CoefficientFunction> args;
};

// Electric/magnetic data shared by elements of one extended algebra.
struct ExtendedContext {
  IntMatrix skew_form;
  EMSplitting splitting;

  int electric_dim() const { return static_cast<int>(splitting.electric_basis.size()); }
  int magnetic_dim() const { return static_cast<int>(splitting.magnetic_basis.size()); }
  Charge lattice_vector(const std::vector<long long>& magnetic_coords) const;
  // ⟨δ, e_i⟩ for each electric basis vector e_i.
  std::vector<long long> theta_shift(const std::vector<long long>& magnetic_coords) const;
  long long pairing(const Charge& a, const Charge& b) const;
  bool operator==(const ExtendedContext& o) const;
};

ExtendedContext make_context(const RefinedBPSStructure& b, const EMSplitting& s);

// Σ f_δ(τ,θ)·y_δ with δ in magnetic coordinates.
struct ExtendedElement {
  std::shared_ptr<const ExtendedContext> ctx;
  std::map<std::vector<long long>, CoefficientFunction> terms;

  static ExtendedElement scalar(std::shared_ptr<const ExtendedContext> ctx, CoefficientFunction f);
  static ExtendedElement monomial(std::shared_ptr<const ExtendedContext> ctx, std::vector<long long> delta,
                                  CoefficientFunction f = {});
  std::vector<long long> zero_degree() const;
  // Coefficient of y_δ evaluated; 0 when absent.
  Value eval(const std::vector<long long>& delta, cplx tau, const std::vector<cplx>& theta) const;
};

ExtendedElement ext_mul(const ExtendedElement& a, const ExtendedElement& b);
ExtendedElement ext_add(const ExtendedElement& a, const ExtendedElement& b);
// Inverse of a single monomial f·y_δ.
ExtendedElement ext_inverse(const ExtendedElement& monomial);

ExtendedElement embed(const QuantumTorusElement& a, std::shared_ptr<const ExtendedContext> ctx);

// Grading-preserving automorphism stored by its multipliers on the magnetic basis,
// with an optional θ-translation acting on coefficients.
struct GradedAutomorphism {
  std::shared_ptr<const ExtendedContext> ctx;
  std::vector<CoefficientFunction> multipliers;  // one per magnetic basis vector
  std::optional<std::vector<cplx>> translation;

  CoefficientFunction act(const CoefficientFunction& f) const;
  // A(y_δ) = M_δ·y_δ.
  CoefficientFunction multiplier(const std::vector<long long>& delta) const;
  ExtendedElement apply(const ExtendedElement& x) const;

  static GradedAutomorphism identity(std::shared_ptr<const ExtendedContext> ctx);
  GradedAutomorphism inverse() const;
  nlohmann::json to_json() const;
};

// (A∘B)(x) = A(B(x)).
GradedAutomorphism compose(const GradedAutomorphism& a, const GradedAutomorphism& b);

GradedAutomorphism eps_z(const RefinedBPSStructure& b, std::shared_ptr<const ExtendedContext> ctx, cplx t);
GradedAutomorphism s_q_ray(const RefinedBPSStructure& b, std::shared_ptr<const ExtendedContext> ctx,
                           const QuadraticRefinement& sigma, const Ray& ray);
GradedAutomorphism ad(const CoefficientFunction& u, std::shared_ptr<const ExtendedContext> ctx);

// DT_q(ℓ) = ∏_{γ∈ℓ} ∏_n E_q(−q^{(n+1)/2} y_γ)^{−Ω_n(γ)} in the degree-0 subalgebra.
CoefficientFunction dt_product(const RefinedBPSStructure& b, const ExtendedContext& ctx, const Ray& ray);

nlohmann::json to_json(const ExtendedElement& x);
ExtendedElement extended_from_json(const nlohmann::json& j, std::shared_ptr<const ExtendedContext> ctx);

}  // namespace qrh
