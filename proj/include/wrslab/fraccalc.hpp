#pragma once

#include "wrslab/paths.hpp"

namespace wrs {

/// Order and window for the one-sided fractional derivative pair.
/// gamma may be anything in (0, 1) but must stay below the Hoelder exponent
/// of any weight path it is applied to (checked per operation); the
/// remainder-rate machinery always works in the window (1/2, alpha).
struct FracSpec {
  double gamma;
  double a;
  double b;

  FracSpec(double gamma_, double a_, double b_);
};

/// Left Riemann-Liouville derivative of order gamma of f_a := f - f(a),
/// evaluated at s in (a, b):
///
///   (1/Gamma(1-gamma)) [ (f(s)-f(a))/(s-a)^gamma
///                        + gamma * int_a^s (f(s)-f(y))/(s-y)^{gamma+1} dy ].
///
/// The singular integral is computed on panels refined geometrically toward
/// y = s (`refinement` panels per decade, split additionally at grid kinks),
/// 4-point Gauss per panel, with the innermost grid cell integrated in
/// closed form against the local linear slope. f is piecewise linear
/// between its grid samples.
double frac_deriv_left(const WeightPath& f, const FracSpec& spec, double s,
                       long refinement = 8);

/// Explicit constant of the Hoelder bound
/// |frac_deriv_left(f, s)| <= C * holder_norm * (s-a)^{alpha-gamma}:
/// C = (1/Gamma(1-gamma)) * (1 + gamma/(alpha-gamma)).
double frac_deriv_left_bound_constant(double alpha, double gamma);

/// Right derivative of order 1-gamma of (g)_{b-} := g - g(b-) at s, for a
/// step path g.  Exact jump-sum evaluation, no quadrature: with
/// t_{k-1} < s < t_k and B the grid index of b,
///
///   (1/Gamma(gamma)) [ (g(t_{k-1}) - g(b-)) / (b-s)^{1-gamma}
///       - sum_{l=k+1}^{B} (g(t_{k-1}) - g(t_{l-1}))
///                         ((t_l-s)^{gamma-1} - (t_{l-1}-s)^{gamma-1}) ],
///
/// where g(b-) = g(t_{B-1}).  b must be a grid value; s must not be one.
double frac_deriv_right_step(const StepProcess& g, const FracSpec& spec, double s);

struct IbpCheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
};

/// Integration-by-parts identity for the Stieltjes integral against a step
/// path on a grid-aligned window [a, b):
///
///   int_{[a,b)} (f(s)-f(a)) dg(s)  =  int_a^b D_left(s) * (-D_right(s)) ds.
///
/// lhs is the exact finite sum over the jumps in [a, b).  rhs integrates the
/// product of the two one-sided derivatives with `quad_points` midpoint
/// panels per grid cell, graded toward each cell's right edge where the
/// step-side derivative has its integrable singularity.  The right-sided
/// derivative enters the pairing with reversed orientation (the minus sign);
/// this is the convention the underlying identity carries for real-valued
/// one-sided derivatives, and it is what the numerics confirm.
IbpCheckResult ibp_identity_check(const WeightPath& f, const StepProcess& g,
                                  const FracSpec& spec, long quad_points,
                                  long inner_refinement = 8);

}  // namespace wrs
