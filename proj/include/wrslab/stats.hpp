#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "wrslab/blocks.hpp"
#include "wrslab/pvariation.hpp"

namespace wrs {

/// Standard normal CDF via erfc; relative accuracy of the library erfc
/// (well below 1e-10 over the double range).
double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov statistic against the standard normal CDF.
double ks_statistic(const Vector& samples);
/// Two-sample KS statistic (sup distance of the empirical CDFs).
double ks_statistic(const Vector& a, const Vector& b);
/// Classical asymptotic critical value c(level) / sqrt(n); supported levels
/// are 0.05 (c = 1.36) and 0.01 (c = 1.63).
double ks_critical_value(double level, long n);

/// Self-normalized weighted sum: weighted_sum(f, g, T) divided by the
/// discrete conditional standard deviation sqrt(sum_{i=1..[mT]} f(t_i)^2/m).
/// Standard normal in the limit, also for random weights.
double mixed_normal_stat(const WeightPath& f, const StepProcess& g);

/// Both sides of the characteristic-function identity behind mixed-normal
/// convergence against a bounded F-measurable functional h:
/// lhs(u) = E[e^{iuX} h],  rhs(u) = E[e^{-u^2 V/2} h],  V = sum f(t_i)^2/m.
struct StableCheckReport {
  Vector u_grid;
  std::vector<std::complex<double>> lhs;
  std::vector<std::complex<double>> rhs;
  Vector gap;        // |lhs - rhs| per u
  Vector std_error;  // MC standard error of the paired difference per u
  double max_abs_gap = 0.0;
};

/// Paired ensembles: fs[r] and gs[r] are the weight and step row of replica
/// r. h must be bounded. Requires at least 100 replicas. Reductions run in
/// replica order with compensated summation, so the report is independent
/// of thread count; at u = 0 both sides reduce to the same average of h,
/// bit for bit.
StableCheckReport stable_cf_check(const std::vector<WeightPath>& fs,
                                  const std::vector<StepProcess>& gs,
                                  const std::function<double(const WeightPath&)>& h,
                                  const Vector& u_grid);

/// Scalar core of the check, for callers that compute the per-replica
/// weighted sums X, conditional variances V and functional values H
/// themselves (avoids retaining whole path ensembles).
StableCheckReport stable_cf_check(const Vector& X, const Vector& V,
                                  const Vector& H, const Vector& u_grid);

/// Bounded functionals used as the default test family.
double h_one(const WeightPath& f);
double h_clipped_sup(const WeightPath& f);      // min(sup|f|, 2)/2
double h_clipped_midpoint(const WeightPath& f); // min(|f(T/2)|, 2)/2

struct TightnessEstimate {
  struct Cell {
    long j = 0;
    long gap = 0;
    double fourth_moment = 0.0;  // empirical E|g(t_k)-g(t_j)|^4
    double ratio = 0.0;          // fourth_moment / ((k-j)/m)^2
    double std_error = 0.0;      // MC error of ratio
  };
  std::vector<Cell> cells;
  double constant = 0.0;   // max ratio over the lattice
  double std_error = 0.0;  // MC error at the maximizing cell
};

/// Empirical fourth-moment ratio over a logarithmic (j, k) lattice:
/// gaps k-j in {1, 2, 4, ..., m/2}, block starts j in {0, m/4, m/2}.
/// Requires at least 1000 replicas.
TightnessEstimate tightness_constant(
    const std::function<StepProcess(const SeedSpec&)>& make_row, long m,
    long replicas, const SeedSpec& seed);
TightnessEstimate tightness_constant(const GeneratorSpec& gen, long m,
                                     long replicas, const SeedSpec& seed);

/// Least-squares fit of log(mean sup-remainder) against log(n).
struct RateFit {
  std::vector<long> n_values;
  Vector mean_sup;            // untruncated Monte Carlo means per n
  Vector mean_sup_truncated;  // means over replicas with G <= K
  double trunc_K = 0.0;       // 2 * median of the per-replica Hoelder norms
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;  // some mean vanished; fit left as NaN
};

/// Monte Carlo decay of sup_t |remainder(t)| in the block count n at fixed
/// m. Requires m >= 32 * max(n): the fine grid must be asymptotically ahead
/// of the block scheme for the measured decay to be the n-rate.
RateFit rate_experiment(const WeightSpec& weight, const GeneratorSpec& gen, long m,
                        const std::vector<long>& n_values, long replicas,
                        const SeedSpec& seed, double T = 1.0);

}  // namespace wrs
