#pragma once

#include <boost/rational.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrh/value.hpp"

namespace qrh {

using Charge = std::vector<long long>;
using Rational = boost::rational<long long>;
// Σ_n c_n L^{n/2}, keyed by n; zero coefficients are never stored.
using RefinedPoly = std::map<int, Rational>;
using IntMatrix = std::vector<std::vector<long long>>;

struct EMSplitting {
  std::vector<Charge> electric_basis;
  std::vector<Charge> magnetic_basis;
  int theta_space_dim = 0;  // = electric_basis.size()
};

struct RefinedBPSStructure {
  int rank = 0;
  IntMatrix skew_form;
  std::vector<cplx> central_charge;  // Z on the standard basis
  std::map<Charge, RefinedPoly> omega;
  std::optional<EMSplitting> splitting;

  long long pairing(const Charge& a, const Charge& b) const;
  cplx Z(const Charge& g) const;
  const RefinedPoly* omega_at(const Charge& g) const;  // nullptr when Ω(γ) = 0
  std::vector<Charge> active_classes() const;           // sorted
  void validate() const;                                // throws Error
};

struct Classification {
  bool finite = false, uncoupled = false, palindromic = false, integral = false;
  bool all() const { return finite && uncoupled && palindromic && integral; }
};

struct Ray {
  cplx phase;
  std::vector<Charge> classes;
};

// σ(γ) = (−1)^{Σ γ_i c_i + Σ_{i<j} γ_i γ_j S_ij}.
class QuadraticRefinement {
 public:
  QuadraticRefinement(IntMatrix skew, std::vector<int> basis_bits);
  int operator()(const Charge& g) const;
  const std::vector<int>& basis_bits() const { return bits_; }

 private:
  IntMatrix skew_;
  std::vector<int> bits_;
};

struct KappaSet {
  int epsilon = 0;
  std::vector<double> halves;  // ε(2j−1)/2, j = 1..|⟨β,γ⟩|
};

RefinedBPSStructure doubled_a1(cplx z);
Classification classify(const RefinedBPSStructure& b);
std::vector<Ray> active_rays(const RefinedBPSStructure& b);
QuadraticRefinement canonical_refinement(const RefinedBPSStructure& b);
EMSplitting em_splitting(const RefinedBPSStructure& b, const std::optional<EMSplitting>& proposed = {});
KappaSet kappa_set(const RefinedBPSStructure& b, const Charge& beta, const Charge& gamma);

// Coordinates of γ in electric_basis ∪ magnetic_basis (electric first). Throws when γ
// is not an integral combination.
std::vector<long long> em_coordinates(const EMSplitting& s, const Charge& g);

// Block sum of structures on ℤ^{n₁} ⊕ ℤ^{n₂}.
RefinedBPSStructure direct_sum(const RefinedBPSStructure& a, const RefinedBPSStructure& b);

Charge operator+(const Charge& a, const Charge& b);
Charge operator-(const Charge& a);
Charge operator*(long long k, const Charge& a);

}  // namespace qrh
