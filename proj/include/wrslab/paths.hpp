#pragma once

#include <iosfwd>
#include <string>

#include "wrslab/numeric.hpp"

namespace wrs {

/// Uniform grid t_i = i/m on [0, T]. count = floor(m*T) is fixed up so that
/// t_count <= T < t_count + 1/m holds in double arithmetic.
struct UniformGrid {
  long m = 1;
  double T = 1.0;
  long count = 1;

  UniformGrid(long m_, double T_);

  double t(long i) const { return static_cast<double>(i) / static_cast<double>(m); }
  /// Spacing between t_j and t_i computed as (j-i)/m.
  double dt(long i, long j) const {
    return static_cast<double>(j - i) / static_cast<double>(m);
  }

  /// Largest k with t_k <= t (indices clamped to [0, count]). Exact with
  /// respect to the represented grid values, so index_at(t(k)) == k.
  long index_at(double t) const;

  bool operator==(const UniformGrid& o) const {
    return m == o.m && T == o.T && count == o.count;
  }
};

/// Row of a triangular array together with its cumulative step path.
/// increments[i-1] is the mass placed at t_i (i = 1..count); cumulative is
/// the running sum with cumulative[0] = 0. The path value at t is
/// cumulative[index_at(t)]: right-continuous, jump at t_i included.
///
/// cumulative is the plain left-to-right running sum. Differencing it
/// recovers increments bit-exactly whenever the increments are multiples of
/// a common power of two (all +-1/sqrt(m) rows with m an even power of two);
/// for general real increments the reconstruction is exact to one ulp per
/// entry.
struct StepProcess {
  UniformGrid grid;
  Vector increments;  // length count
  Vector cumulative;  // length count + 1

  static StepProcess from_increments(const UniformGrid& grid, Vector increments);

  double operator()(double t) const { return eval_step(*this, t); }
  friend double eval_step(const StepProcess& g, double t);

  /// sup over the grid of |g(t)|.
  double sup_abs() const { return cumulative.cwiseAbs().maxCoeff(); }
};

double eval_step(const StepProcess& g, double t);

enum class HolderMode { automatic, exact, windowed };

/// Discrete Hoelder norm: max over grid pairs i<j of
/// |values[j]-values[i]| / ((j-i)/m)^alpha. A lower bound for the continuum
/// norm. The exact mode enumerates all pairs in O(count^2); automatic
/// switches to a windowed scan (pairs with j-i <= max(count/4, 4096)) above
/// count = 4096, which is again a lower bound.
double holder_norm_estimate(const Vector& values, const UniformGrid& grid,
                            double alpha, HolderMode mode = HolderMode::automatic);

/// Grid samples of an alpha-Hoelder weight process, alpha in (1/2, 1].
/// holder_norm is the discrete estimate above.
struct WeightPath {
  UniformGrid grid;
  Vector values;  // length count + 1, values[i] = f(t_i)
  double alpha = 1.0;
  double holder_norm = 0.0;

  static WeightPath from_values(const UniformGrid& grid, Vector values, double alpha,
                                HolderMode mode = HolderMode::automatic);

  /// f(t) by linear interpolation between grid samples; exact at nodes.
  /// Interpolation preserves the discrete Hoelder constant for alpha <= 1.
  double value_at(double t) const;
};

/// CSV with columns (index, t, value) at 17 significant digits.
void write_path_csv(std::ostream& os, const Vector& values, const UniformGrid& grid);
void write_path_csv_file(const std::string& file, const Vector& values,
                         const UniformGrid& grid);
/// Reads a path CSV written by write_path_csv; returns values and fills grid.
Vector read_path_csv(std::istream& is, UniformGrid* grid_out = nullptr);
Vector read_path_csv_file(const std::string& file, UniformGrid* grid_out = nullptr);

}  // namespace wrs
