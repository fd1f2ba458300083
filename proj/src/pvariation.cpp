#include "wrslab/pvariation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wrslab/numeric.hpp"

namespace wrs {

namespace {

/// Keeps endpoints and strict direction changes; every dropped point lies
/// between its neighbours, so no partition sum can decrease.
std::vector<double> extrema_skeleton(const Vector& v) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  out.push_back(v[0]);
  for (Index i = 1; i + 1 < v.size(); ++i) {
    const double prev = out.back();
    if ((v[i] - prev) * (v[i + 1] - v[i]) < 0.0) out.push_back(v[i]);
  }
  if (v.size() > 1) out.push_back(v[v.size() - 1]);
  return out;
}

double pvar_dp(const std::vector<double>& v, double p) {
  const std::size_t n = v.size();
  std::vector<double> best(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double bi = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double cand = best[j] + std::pow(std::abs(v[i] - v[j]), p);
      if (cand > bi) bi = cand;
    }
    best[i] = bi;
  }
  return std::pow(best[n - 1], 1.0 / p);
}

}  // namespace

double pvar(const Vector& values, double p) {
  if (!(p >= 1.0)) {
    throw std::domain_error("pvar: p must be >= 1 (not a variation norm below)");
  }
  if (values.size() < 2) return 0.0;
  if (p == 1.0) {
    // Triangle equality: adjacent increments attain the supremum exactly.
    double acc = 0.0;
    for (Index i = 1; i < values.size(); ++i) acc += std::abs(values[i] - values[i - 1]);
    return acc;
  }
  return pvar_dp(extrema_skeleton(values), p);
}

double pvar(const StepProcess& path, const PvarQuery& query) {
  const UniformGrid& grid = path.grid;
  const long A = grid.index_at(std::max(query.a, 0.0));
  const long B = grid.index_at(std::min(query.b, grid.T));
  if (grid.t(A) != query.a || grid.t(B) != query.b) {
    throw std::domain_error("pvar: interval endpoints must sit on the grid");
  }
  if (B == A) return 0.0;
  return pvar(path.cumulative.segment(A, B - A + 1), query.p);
}

double pvar_brute(const Vector& values, double p) {
  if (!(p >= 1.0)) throw std::domain_error("pvar_brute: p must be >= 1");
  const Index n = values.size();
  if (n > 14) {
    throw std::domain_error("pvar_brute: refuses more than 14 points");
  }
  if (n < 2) return 0.0;
  const Index interior = n - 2;
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << interior); ++mask) {
    double sum = 0.0;
    double prev = values[0];
    for (Index i = 1; i + 1 < n; ++i) {
      if (mask & (1ULL << (i - 1))) {
        sum += std::pow(std::abs(values[i] - prev), p);
        prev = values[i];
      }
    }
    sum += std::pow(std::abs(values[n - 1] - prev), p);
    best = std::max(best, sum);
  }
  return std::pow(best, 1.0 / p);
}

std::vector<double> love_young_ratio(const WeightPath& f, const StepProcess& g,
                                     const BlockScheme& scheme, double beta) {
  if (!(f.grid == g.grid)) {
    throw std::domain_error("love_young_ratio: weight and step grids differ");
  }
  if (!(f.alpha + beta > 1.0)) {
    throw std::domain_error(
        "love_young_ratio: Young pairing requires alpha + beta > 1");
  }
  if (!(beta > 0.0)) throw std::domain_error("love_young_ratio: beta must be positive");
  const double pf = 1.0 / f.alpha;
  const double pg = 1.0 / beta;

  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(scheme.num_complete));
  for (long j = 1; j <= scheme.num_complete; ++j) {
    const long lo = scheme.block_lo(j);
    const long hi = scheme.block_hi(j);  // one past last
    const double ul = scheme.u(j - 1);
    const double ur = scheme.u(j);
    const double f_ul = f.value_at(ul);

    double stieltjes = 0.0;
    for (long i = lo; i < hi; ++i) {
      stieltjes += (f.values[i] - f_ul) * g.increments[i - 1];
    }

    // Skeletons over the closed block [u_{j-1}, u_j]: interpolated edge
    // values plus every grid sample strictly inside.
    std::vector<double> fv{f_ul};
    std::vector<double> gv{eval_step(g, ul)};
    for (long i = f.grid.index_at(ul) + 1; i <= f.grid.count && f.grid.t(i) < ur;
         ++i) {
      fv.push_back(f.values[i]);
      gv.push_back(g.cumulative[i]);
    }
    fv.push_back(f.value_at(ur));
    gv.push_back(eval_step(g, std::min(ur, g.grid.T)));

    auto to_vec = [](const std::vector<double>& s) {
      Vector v(static_cast<Index>(s.size()));
      for (std::size_t i = 0; i < s.size(); ++i) v[static_cast<Index>(i)] = s[i];
      return v;
    };
    const double vf = pvar(to_vec(fv), pf);
    const double vg = pvar(to_vec(gv), pg);
    const double denom = vf * vg;
    if (denom == 0.0) {
      ratios.push_back(stieltjes == 0.0
                           ? 0.0
                           : std::numeric_limits<double>::infinity());
    } else {
      ratios.push_back(std::abs(stieltjes) / denom);
    }
  }
  return ratios;
}

RowSampler::RowSampler(const GeneratorSpec& spec, const UniformGrid& grid)
    : spec_(spec), grid_(grid) {
  if (spec.kind == GeneratorSpec::Kind::qv) {
    if (!(spec.hurst < 0.75)) {
      throw std::domain_error(
          "RowSampler: quadratic-variation rows require hurst < 3/4");
    }
    synth_.emplace(FbmSpec(spec.hurst, grid));
    qv_denom_ = std::sqrt(static_cast<double>(grid.m)) *
                (spec.normalize ? sigma_H(spec.hurst) : 1.0);
  }
}

StepProcess RowSampler::operator()(const SeedSpec& seed) const {
  if (spec_.kind == GeneratorSpec::Kind::rademacher) {
    return gen_rademacher(grid_, seed);
  }
  Rng rng(seed, stream_salt::kFgn);
  const Vector fgn = synth_->sample(rng);
  const double m2H =
      std::pow(static_cast<double>(grid_.m), 2.0 * spec_.hurst);
  Vector inc(fgn.size());
  for (Index i = 0; i < fgn.size(); ++i) {
    inc[i] = (m2H * fgn[i] * fgn[i] - 1.0) / qv_denom_;
  }
  return StepProcess::from_increments(grid_, std::move(inc));
}

PvarScanResult pvar_distribution_scan(const GeneratorSpec& gen, double p,
                                      const std::vector<long>& m_values,
                                      long replicas, const SeedSpec& seed,
                                      double T) {
  if (!(p > 2.0)) {
    throw std::domain_error(
        "pvar_distribution_scan: requires p > 2 (finite p-variation of the "
        "Brownian limit and the martingale moment bound both need it)");
  }
  if (replicas < 1) {
    throw std::domain_error("pvar_distribution_scan: replicas must be positive");
  }
  PvarScanResult result;
  result.p = p;
  for (const long m : m_values) {
    const UniformGrid grid(m, T);
    const RowSampler sample(gen, grid);
    PvarScanResult::PerM row;
    row.m = m;
    row.pvars.resize(replicas);
    row.sup_norms.resize(replicas);
    parallel_for(replicas, [&](Index r) {
      const StepProcess g =
          sample(seed.with_replica(static_cast<std::uint64_t>(r)));
      row.pvars[r] = pvar(g.cumulative, p);
      row.sup_norms[r] = g.sup_abs();
    });
    NeumaierSum sp, ss;
    for (long r = 0; r < replicas; ++r) {
      sp.add(row.pvars[r]);
      ss.add(row.sup_norms[r]);
    }
    row.mean_pvar = sp.value() / static_cast<double>(replicas);
    row.mean_sup = ss.value() / static_cast<double>(replicas);
    row.lepingle_ratio = row.mean_sup > 0.0 ? row.mean_pvar / row.mean_sup : 0.0;
    result.per_m.push_back(std::move(row));
  }
  return result;
}

}  // namespace wrs
