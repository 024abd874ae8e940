#pragma once

#include <vector>

#include "qrh/value.hpp"

namespace qrh {

struct Constants {
  double zeta_prime_minus_one;  // ζ'(−1)
  double log_rho;               // log ρ, ρ = √(2π)·e^{−ζ'(−1)}
  double rho;
};

// Computed on first use by Euler-Maclaurin; initialization is thread-safe.
const Constants& constants();

// ζ'(−1) by Euler-Maclaurin from cut-off n with j_max correction terms.
double zeta_prime_minus_one_em(int n, int j_max);

// Principal branch on ℂ∖ℝ≤0; pole signal at non-positive integers.
Value log_gamma(cplx z);

// log G(z) with log G(z+1) = log Γ(z) + log G(z) built in; zero signal at z ∈ ℤ≤0.
Value log_barnes_g(cplx z);

// Direct sum plus Euler-Maclaurin tail, one lattice direction at a time.
// Requires Re a_i > 0 and Re s > N; validation oracle only.
cplx barnes_zeta(int N, cplx s, cplx x, const std::vector<cplx>& a);

// log x with the cut along the ray opposite to the bisector of the periods.
// Agrees with the principal log on the periods themselves.
cplx sector_log(cplx x, const std::vector<cplx>& a);

// Throws domain error unless ω₁,ω₂ ∉ ℝ≤0 and |Arg ω₁ − Arg ω₂| < π.
void check_double_periods(cplx w1, cplx w2);

Value log_gamma1(cplx x, cplx a);

struct Gamma2Options {
  double radius_factor = 10.0;  // shift until |X| and dist(X, pole cone) ≥ this·max|ω|
  int extra_shifts = 0;
  int max_shifts = 200000;
};

Value log_gamma2(cplx x, cplx w1, cplx w2, const Gamma2Options& opt = {});

struct ModifiedGammaArgs {
  cplx w;
  cplx eta;
  cplx omega{1.0};
};

struct DoubleGammaArgs {
  cplx w;
  cplx eta;
  cplx omega1{1.0};
  cplx omega2{1.0};
};

struct QDilogArgs {
  cplx q;
  cplx x;
};

// Λ(w,η|ω); log(w/ω) is taken as log w − log ω.
Value log_lambda(const ModifiedGammaArgs& a);
Value lambda_fn(const ModifiedGammaArgs& a);

Value log_f(const DoubleGammaArgs& a, const Gamma2Options& opt = {});
Value f_fn(const DoubleGammaArgs& a, const Gamma2Options& opt = {});

// E_q(x) = ∏_{k≥0}(1 − q^k x), |q| < 1.
cplx quantum_dilog(const QDilogArgs& a);

Value log_delta(cplx w, cplx eta);
Value delta_fn(cplx w, cplx eta);
Value log_upsilon(cplx w, cplx theta);
Value upsilon_fn(cplx w, cplx theta);

// Partial sums of the large-|w| expansions of log Λ and log F.
cplx asymptotic_log_lambda(cplx w, cplx eta, cplx omega, int K);
cplx asymptotic_log_f(cplx w, cplx eta, cplx w1, cplx w2, int K);

// The second Stirling approximant for log Γ_N(x+δ|a), N ∈ {1,2}:
// log_poly(x)·log x + poly(x) + Σ_k inv[k−1]·x^{−k}.
struct StirlingExpansion {
  std::vector<cplx> log_poly;  // coefficients in x of the log x prefactor
  std::vector<cplx> poly;      // polynomial part, coefficients in x
  std::vector<cplx> inv;       // coefficients of x^{−1..−K}
};

StirlingExpansion second_stirling_expansion(int N, cplx delta, const std::vector<cplx>& a, int K);
cplx gammaN_second_stirling(int N, cplx x, cplx delta, const std::vector<cplx>& a, int K);

}  // namespace qrh
