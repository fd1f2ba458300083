#pragma once

#include <optional>
#include <vector>

#include "wrslab/blocks.hpp"
#include "wrslab/generators.hpp"
#include "wrslab/paths.hpp"

namespace wrs {

/// Variation order and window. Endpoints must sit on the grid when the query
/// is applied to a step process.
struct PvarQuery {
  double p;
  double a;
  double b;

  PvarQuery(double p_, double a_, double b_) : p(p_), a(a_), b(b_) {
    if (!(p >= 1.0)) throw std::domain_error("PvarQuery: p must be >= 1");
    if (!(a < b)) throw std::domain_error("PvarQuery: interval must satisfy a < b");
  }
};

/// Strong p-variation of the polygonal/step skeleton given by `values`:
/// ( sup over subsequences of sum |v_{i_k} - v_{i_{k-1}}|^p )^{1/p}.
/// Exact: O(N^2) dynamic programming over the local-extrema subsequence
/// (dropping points between their neighbours never shrinks any partition
/// sum, by convexity of x -> |x|^p for p >= 1). p = 1 short-circuits to the
/// adjacent-increment total variation, which is the exact supremum.
double pvar(const Vector& values, double p);

/// p-variation of a step path over the grid-aligned window [a, b]
/// (path values g(t_i) for t_i in [a, b], jump at b included).
double pvar(const StepProcess& path, const PvarQuery& query);

/// Exhaustive oracle over all endpoint-anchored subsequences. Refuses
/// beyond N = 14 points.
double pvar_brute(const Vector& values, double p);

/// Per complete block j: |sum_{i in I(j)} (f(t_i) - f(u_{j-1})) xi_i| divided
/// by ( (1/alpha)-variation of f on the block ) * ( (1/beta)-variation of g ),
/// with 0/0 -> 0. Requires the Young pairing condition alpha + beta > 1.
/// The classical bound constant for this ratio is 1 + zeta(alpha + beta).
std::vector<double> love_young_ratio(const WeightPath& f, const StepProcess& g,
                                     const BlockScheme& scheme, double beta);

/// Generator handle for scan-style experiments over step rows.
struct GeneratorSpec {
  enum class Kind { rademacher, qv };
  Kind kind = Kind::rademacher;
  double hurst = 0.5;     // qv
  bool normalize = true;  // qv

  static GeneratorSpec rademacher() { return {Kind::rademacher, 0.0, false}; }
  static GeneratorSpec qv(double hurst, bool normalize = true) {
    return {Kind::qv, hurst, normalize};
  }

  StepProcess make(const UniformGrid& grid, const SeedSpec& seed) const {
    if (kind == Kind::rademacher) return gen_rademacher(grid, seed);
    return gen_qv_step(FbmSpec(hurst, grid), seed, normalize);
  }
};

/// Reusable row factory: precomputes the Gaussian synthesizer and the
/// normalization constant once, then draws rows per SeedSpec. Thread-safe
/// after construction. Same streams as GeneratorSpec::make.
class RowSampler {
 public:
  RowSampler(const GeneratorSpec& spec, const UniformGrid& grid);
  StepProcess operator()(const SeedSpec& seed) const;

 private:
  GeneratorSpec spec_;
  UniformGrid grid_;
  std::optional<FgnSynthesizer> synth_;
  double qv_denom_ = 1.0;  // sqrt(m) * (sigma_H when normalizing)
};

struct PvarScanResult {
  struct PerM {
    long m = 0;
    Vector pvars;          // one entry per replica
    Vector sup_norms;      // sup_t |g_m(t)| per replica
    double mean_pvar = 0.0;
    double mean_sup = 0.0;
    double lepingle_ratio = 0.0;  // mean_pvar / mean_sup
  };
  double p = 0.0;
  std::vector<PerM> per_m;
};

/// Samples of the full-interval p-variation of g_m on [0, T] per grid size,
/// with the martingale ratio E[pvar] / E[sup |g_m|]. Requires p > 2.
PvarScanResult pvar_distribution_scan(const GeneratorSpec& gen, double p,
                                      const std::vector<long>& m_values,
                                      long replicas, const SeedSpec& seed,
                                      double T = 1.0);

}  // namespace wrs
