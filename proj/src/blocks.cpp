#include "wrslab/blocks.hpp"

#include <cmath>
#include <stdexcept>

namespace wrs {

BlockScheme::BlockScheme(const UniformGrid& grid, long n_)
    : n(n_), m(grid.m), count(grid.count) {
  if (n < 1) throw std::domain_error("BlockScheme: n must be positive");
  if (n > m) throw std::domain_error("BlockScheme: n must not exceed m");
  // Blocks up to the one containing the final index, plus the open block
  // beyond it when the final index sits exactly on a block edge.
  const long j_last = block_of(count);
  beta.resize(static_cast<std::size_t>(j_last) + 1);
  for (long j = 0; j <= j_last; ++j) {
    beta[static_cast<std::size_t>(j)] = (m * j + n - 1) / n;  // ceil(m*j/n)
  }
  num_complete =
      (beta[static_cast<std::size_t>(j_last)] - 1 <= count) ? j_last : j_last - 1;
}

namespace {

void require_same_grid(const WeightPath& f, const StepProcess& g) {
  if (!(f.grid == g.grid)) {
    throw std::domain_error("weight and step process live on different grids");
  }
}

}  // namespace

double weighted_sum(const WeightPath& f, const StepProcess& g, double t) {
  require_same_grid(f, g);
  const long k = f.grid.index_at(t);
  if (!(t >= 0.0) || !(t <= f.grid.T)) {
    throw std::domain_error("weighted_sum: t outside [0, T]");
  }
  double acc = 0.0;
  for (long i = 1; i <= k; ++i) acc += f.values[i] * g.increments[i - 1];
  return acc;
}

double weighted_sum_forward(const WeightPath& f, const StepProcess& g, double t) {
  require_same_grid(f, g);
  const long k = f.grid.index_at(t);
  if (!(t >= 0.0) || !(t <= f.grid.T)) {
    throw std::domain_error("weighted_sum_forward: t outside [0, T]");
  }
  double acc = 0.0;
  for (long i = 1; i <= k; ++i) acc += f.values[i - 1] * g.increments[i - 1];
  return acc;
}

DecompositionResult decompose(const WeightPath& f, const StepProcess& g,
                              const BlockScheme& scheme) {
  require_same_grid(f, g);
  if (scheme.m != f.grid.m || scheme.count != f.grid.count) {
    throw std::domain_error("decompose: scheme built for a different grid");
  }
  const long count = f.grid.count;
  DecompositionResult r{Vector::Zero(count + 1), Vector::Zero(count + 1),
                        Vector::Zero(count + 1), Vector::Zero(count + 1),
                        Vector::Zero(count + 1)};

  double total = 0.0;
  double main_acc = 0.0;      // complete blocks, frozen weights
  double rem_acc = 0.0;       // complete blocks, oscillation parts
  double edge_acc = 0.0;      // open block, oscillation part
  double partial_inc = 0.0;   // open block, raw increment sum
  long cur_J = 0;             // J = [n t_k]; open block is cur_J + 1
  double f_u = f.value_at(scheme.u(0));

  for (long k = 1; k <= count; ++k) {
    const long Jk = (scheme.n * k) / scheme.m;
    while (cur_J < Jk) {
      // Block cur_J + 1 is complete; fold its accumulators. Empty blocks
      // fold zeros.
      rem_acc += edge_acc;
      main_acc += f_u * partial_inc;
      edge_acc = 0.0;
      partial_inc = 0.0;
      ++cur_J;
      f_u = f.value_at(scheme.u(cur_J));
    }
    const double xi = g.increments[k - 1];
    total += f.values[k] * xi;
    edge_acc += (f.values[k] - f_u) * xi;
    partial_inc += xi;

    r.total[k] = total;
    r.main_term[k] = main_acc;
    r.remainder[k] = rem_acc;
    r.edge_term[k] = edge_acc;
    r.frozen_partial[k] = f_u * partial_inc;
  }
  return r;
}

double remainder_sup(const DecompositionResult& result) {
  return result.remainder.cwiseAbs().maxCoeff();
}

double ito_reference(const WeightPath& f, const SeedSpec& seed, long fine_factor) {
  if (fine_factor < 1) {
    throw std::domain_error("ito_reference: fine_factor must be positive");
  }
  const UniformGrid fine(f.grid.m * fine_factor, f.grid.T);
  Rng rng(seed, stream_salt::kBrownianRef);
  const double sd = 1.0 / std::sqrt(static_cast<double>(fine.m));
  double acc = 0.0;
  for (long l = 1; l <= fine.count; ++l) {
    acc += f.value_at(fine.t(l - 1)) * sd * rng.gaussian();
  }
  return acc;
}

}  // namespace wrs
