#pragma once

#include <vector>

#include "qrh/bps.hpp"
#include "qrh/value.hpp"

namespace qrh {

// A structure that is finite, uncoupled, palindromic and integral, with the data
// the solution needs.
struct RHInstance {
  RefinedBPSStructure structure;
  EMSplitting splitting;
  QuadraticRefinement refinement;
  std::vector<Ray> rays;
};

RHInstance make_instance(const RefinedBPSStructure& b, const std::optional<EMSplitting>& s = {});

// Doubled A₁ evaluation point: side = +1 or −1 picks Ψ± on ℂ*∖iℓ±.
struct EvaluationPoint {
  cplx t;
  int side = 1;
  cplx tau{0, 1};
  cplx theta{0};
};

// True when t lies on the excluded ray iℓ± = i·ℝ>0·(±z).
bool on_excluded_ray(cplx z, cplx t, int side);

// Multiplier of y_{nα∨} under Ψ±(t); n may be negative.
Value solve_a1(cplx z, const EvaluationPoint& p, int n = 1);
Value log_solve_a1(cplx z, const EvaluationPoint& p, int n = 1);

// ψ±(t) = F(±z/(2πit), (1+τ)/2 ∓ θ | 1, τ)^{−1}.
Value adjoint_psi_a1(cplx z, const EvaluationPoint& p);
Value log_adjoint_psi_a1(cplx z, const EvaluationPoint& p);

struct Residual {
  double value = 0;
  bool excluded = false;  // a pole or zero of one of the factors was hit
};

// |LHS/RHS − 1| for the jump identity; the branch is chosen by the sign of Re(t/z).
Residual verify_jump_a1(cplx z, cplx t, cplx tau, cplx theta);

struct LimitOptions {
  double t0_scale = 1e-3;  // t₀ = t0_scale·(±z)·e^{iφ}
  double t0_phase = 0;
  int zero_steps = 12;
  int growth_decades = 6;
};

struct LimitReport {
  std::vector<double> zero_residuals;  // |Ψ(y_{α∨}) multiplier − 1| at t₀·2^{−j}, j = 1..steps
  double zero_limit_residual = 0;      // last of the above
  bool monotone_tail = false;          // decreasing over the last 6 steps
  double growth_exponent = 0;          // max_j |log|mult|| / log|t| at t = 10^j·(±z/|z|)
};

LimitReport verify_limits_a1(cplx z, int side, cplx tau, cplx theta, const LimitOptions& opt = {});

// General case on the half-plane H_r centred on the non-active ray r (a phase).
// theta holds θ(e_i) on the electric basis of the instance's splitting.
Value solve_general(const RHInstance& inst, cplx r, cplx t, cplx tau, const std::vector<cplx>& theta,
                    const Charge& beta);
Value log_solve_general(const RHInstance& inst, cplx r, cplx t, cplx tau, const std::vector<cplx>& theta,
                        const Charge& beta);
Value adjoint_general(const RHInstance& inst, cplx r, cplx t, cplx tau, const std::vector<cplx>& theta);
Value log_adjoint_general(const RHInstance& inst, cplx r, cplx t, cplx tau, const std::vector<cplx>& theta);

// The active classes entering the product for H_r.
std::vector<Charge> classes_in_half_plane(const RHInstance& inst, cplx r);

struct ExtrapolationOptions {
  double s0 = 0.1;  // first step of the path
  int levels = 4;   // Richardson levels (levels + 1 samples)
};

struct HamiltonianLimit {
  Value closed;                  // −2πi·log Δ(±z/(2πit), ½ ∓ θ)
  cplx extrapolated{};           // Richardson limit of (2πiτ)·log ψ± along τ = i·s₀·2^{−j}
  std::vector<cplx> samples;     // (2πiτ_j)·log ψ±
};

HamiltonianLimit hamiltonian_limit(cplx z, cplx t, cplx theta, int side, const ExtrapolationOptions& opt = {});
Value hamiltonian(cplx z, cplx t, cplx theta, int side);

struct TauFunctionLimit {
  Value upsilon;       // Υ(±z/(2πit), ∓θ)
  Value f_inverse;     // F(±z/(2πit), 1 ∓ θ | 1, 1)^{−1}
  Value w_power_form;  // (±z/(2πit))^{−1/12}·Υ(±z/(2πit), ∓θ)
  cplx extrapolated{}; // Richardson limit of ψ± along τ = 1 + i·2^{−j}
};

TauFunctionLimit tau_function_limit(cplx z, cplx t, cplx theta, int side, const ExtrapolationOptions& opt = {0.5, 4});

struct PoleLocation {
  int n = 0;
  int side = 0;             // the Ψ± whose multiplier is singular there
  SignalKind kind{};        // pole or zero of that multiplier
  cplx predicted{};         // z/(2πi(n + θ + (1+τ)/2))
  cplx detected{};          // root of the reciprocal (or of the multiplier) by Newton iteration
  bool signalled = false;   // evaluation at the predicted point raised a signal
};

std::vector<PoleLocation> pole_locations_a1(cplx z, cplx tau, cplx theta, int nmax = 3);

// Richardson extrapolation to h → 0 of values at h_j = h₀·2^{−j}, error ~ Σ c_k h^k.
cplx richardson(const std::vector<cplx>& values);

}  // namespace qrh
