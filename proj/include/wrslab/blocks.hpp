#pragma once

#include <vector>

#include "wrslab/paths.hpp"
#include "wrslab/rng.hpp"

namespace wrs {

/// Coarse/fine block partition: block edges u_j = j/n, boundary indices
/// beta[j] = smallest integer >= m*u_j, and block index sets
/// I(j) = { i : 1 <= i <= count, u_{j-1} <= i/m < u_j }
///      = { max(beta[j-1], 1), ..., beta[j]-1 }.
/// Everything is built in integer arithmetic, so membership is exact.
struct BlockScheme {
  long n = 1;
  long m = 1;
  long count = 1;                 // [mT] of the underlying grid
  std::vector<long> beta;         // beta[j] = ceil(m*j/n), j = 0..num_blocks
  long num_complete = 0;          // blocks fully inside {1..count}

  BlockScheme(const UniformGrid& grid, long n_);

  double u(long j) const { return static_cast<double>(j) / static_cast<double>(n); }
  /// First and one-past-last index of block j (1-based block, i in [lo, hi)).
  long block_lo(long j) const { return std::max(beta[j - 1], 1L); }
  long block_hi(long j) const { return std::min(beta[j], count + 1); }
  /// Block containing index i (so that u_{j-1} <= i/m < u_j).
  long block_of(long i) const { return (n * i) / m + 1; }
};

/// All four components of the big/small-block splitting of the weighted sum,
/// tabulated on the full time grid (index k = 0..count, t = t_k).  With
/// J = [n t] the splitting reads, exactly,
///
///   total(t) = main(t) + remainder(t) + edge(t) + frozen_partial(t)
///
/// where main and remainder run over the complete blocks j <= J, and the
/// currently open block J+1 contributes its oscillation part (edge) plus its
/// frozen-weight part (frozen_partial = f(u_J) * partial increment sum).
struct DecompositionResult {
  Vector total;
  Vector main_term;
  Vector remainder;
  Vector edge_term;
  Vector frozen_partial;
};

/// Endpoint-weighted sum sum_{i<=[mt]} f(t_i) xi_i.
double weighted_sum(const WeightPath& f, const StepProcess& g, double t);
/// Forward variant with left-endpoint weights f(t_{i-1}).
double weighted_sum_forward(const WeightPath& f, const StepProcess& g, double t);

DecompositionResult decompose(const WeightPath& f, const StepProcess& g,
                              const BlockScheme& scheme);

/// sup over the grid of |remainder(t)| (the remainder is a grid step
/// function, so the grid max is the true sup).
double remainder_sup(const DecompositionResult& result);

/// Sample of the limiting integral: forward Euler sum of f against a fresh
/// Brownian path on a grid refined by fine_factor, f piecewise linear.
/// The Brownian stream is independent of every other generator stream for
/// the same SeedSpec.
double ito_reference(const WeightPath& f, const SeedSpec& seed,
                     long fine_factor = 16);

}  // namespace wrs
