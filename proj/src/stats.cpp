#include "wrslab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "wrslab/numeric.hpp"

namespace wrs {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(const Vector& samples) {
  if (samples.size() < 10) {
    throw std::domain_error("ks_statistic: need at least 10 samples");
  }
  std::vector<double> x(samples.data(), samples.data() + samples.size());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = normal_cdf(x[i]);
    d = std::max(d, cdf - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - cdf);
  }
  return d;
}

double ks_statistic(const Vector& a, const Vector& b) {
  if (a.size() < 10 || b.size() < 10) {
    throw std::domain_error("ks_statistic: need at least 10 samples per set");
  }
  std::vector<double> xa(a.data(), a.data() + a.size());
  std::vector<double> xb(b.data(), b.data() + b.size());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    const double v = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] <= v) ++i;
    while (j < xb.size() && xb[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(double level, long n) {
  double c = 0.0;
  if (level == 0.05) {
    c = 1.36;
  } else if (level == 0.01) {
    c = 1.63;
  } else {
    throw std::domain_error("ks_critical_value: supported levels are 0.05, 0.01");
  }
  return c / std::sqrt(static_cast<double>(n));
}

double mixed_normal_stat(const WeightPath& f, const StepProcess& g) {
  if (!(f.grid == g.grid)) {
    throw std::domain_error("mixed_normal_stat: weight and step grids differ");
  }
  double v = 0.0;
  for (long i = 1; i <= f.grid.count; ++i) v += f.values[i] * f.values[i];
  v /= static_cast<double>(f.grid.m);
  if (!(v > 0.0)) {
    throw std::domain_error("mixed_normal_stat: zero conditional variance");
  }
  return weighted_sum(f, g, f.grid.T) / std::sqrt(v);
}

double h_one(const WeightPath&) { return 1.0; }

double h_clipped_sup(const WeightPath& f) {
  return std::min(f.values.cwiseAbs().maxCoeff(), 2.0) / 2.0;
}

double h_clipped_midpoint(const WeightPath& f) {
  return std::min(std::abs(f.value_at(0.5 * f.grid.T)), 2.0) / 2.0;
}

StableCheckReport stable_cf_check(const std::vector<WeightPath>& fs,
                                  const std::vector<StepProcess>& gs,
                                  const std::function<double(const WeightPath&)>& h,
                                  const Vector& u_grid) {
  if (fs.size() != gs.size()) {
    throw std::domain_error("stable_cf_check: ensembles must be paired");
  }
  const long R = static_cast<long>(fs.size());
  Vector X(R), V(R), H(R);
  for (long r = 0; r < R; ++r) {
    const WeightPath& f = fs[static_cast<std::size_t>(r)];
    const StepProcess& g = gs[static_cast<std::size_t>(r)];
    X[r] = weighted_sum(f, g, f.grid.T);
    double v = 0.0;
    for (long i = 1; i <= f.grid.count; ++i) v += f.values[i] * f.values[i];
    V[r] = v / static_cast<double>(f.grid.m);
    H[r] = h(f);
  }
  return stable_cf_check(X, V, H, u_grid);
}

StableCheckReport stable_cf_check(const Vector& X, const Vector& V,
                                  const Vector& H, const Vector& u_grid) {
  const long R = X.size();
  if (V.size() != R || H.size() != R) {
    throw std::domain_error("stable_cf_check: ensembles must be paired");
  }
  if (R < 100) {
    throw std::domain_error("stable_cf_check: need at least 100 replicas");
  }
  StableCheckReport rep;
  rep.u_grid = u_grid;
  rep.gap.resize(u_grid.size());
  rep.std_error.resize(u_grid.size());
  for (Index iu = 0; iu < u_grid.size(); ++iu) {
    const double u = u_grid[iu];
    NeumaierSum lre, lim, rre, dre2, dim2;
    for (long r = 0; r < R; ++r) {
      const double cl = std::cos(u * X[r]) * H[r];
      const double sl = std::sin(u * X[r]) * H[r];
      const double cr = std::exp(-0.5 * u * u * V[r]) * H[r];
      lre.add(cl);
      lim.add(sl);
      rre.add(cr);
      dre2.add((cl - cr) * (cl - cr));
      dim2.add(sl * sl);
    }
    const double Rd = static_cast<double>(R);
    const std::complex<double> l(lre.value() / Rd, lim.value() / Rd);
    const std::complex<double> rv(rre.value() / Rd, 0.0);
    rep.lhs.push_back(l);
    rep.rhs.push_back(rv);
    rep.gap[iu] = std::abs(l - rv);
    const double mre = l.real() - rv.real();
    const double mim = l.imag();
    const double var_re = std::max(0.0, dre2.value() / Rd - mre * mre);
    const double var_im = std::max(0.0, dim2.value() / Rd - mim * mim);
    rep.std_error[iu] = std::sqrt((var_re + var_im) / Rd);
  }
  rep.max_abs_gap = rep.gap.size() > 0 ? rep.gap.maxCoeff() : 0.0;
  return rep;
}

TightnessEstimate tightness_constant(
    const std::function<StepProcess(const SeedSpec&)>& make_row, long m,
    long replicas, const SeedSpec& seed) {
  if (replicas < 1000) {
    throw std::domain_error("tightness_constant: need at least 1000 replicas");
  }
  std::vector<long> gaps;
  for (long gap = 1; gap <= m / 2; gap *= 2) gaps.push_back(gap);
  const std::vector<long> starts{0, m / 4, m / 2};

  struct CellKey {
    long j, gap;
  };
  std::vector<CellKey> keys;
  long count_hint = 0;
  for (long j : starts) {
    for (long gap : gaps) {
      if (j + gap <= m) keys.push_back({j, gap});
    }
  }
  count_hint = static_cast<long>(keys.size());

  // Per-replica fourth powers, stored per cell, reduced in replica order.
  Matrix s4(count_hint, replicas);
  parallel_for(replicas, [&](Index r) {
    const StepProcess g =
        make_row(seed.with_replica(static_cast<std::uint64_t>(r)));
    for (long c = 0; c < count_hint; ++c) {
      const auto [j, gap] = keys[static_cast<std::size_t>(c)];
      const long k = std::min(j + gap, g.grid.count);
      const double inc = g.cumulative[k] - g.cumulative[j];
      s4(c, r) = inc * inc * inc * inc;
    }
  });

  TightnessEstimate est;
  const double md = static_cast<double>(m);
  for (long c = 0; c < count_hint; ++c) {
    NeumaierSum sum, sumsq;
    for (long r = 0; r < replicas; ++r) {
      sum.add(s4(c, r));
      sumsq.add(s4(c, r) * s4(c, r));
    }
    const double Rd = static_cast<double>(replicas);
    const double mean = sum.value() / Rd;
    const double var = std::max(0.0, sumsq.value() / Rd - mean * mean);
    const auto [j, gap] = keys[static_cast<std::size_t>(c)];
    const double scale = (static_cast<double>(gap) / md) *
                         (static_cast<double>(gap) / md);
    TightnessEstimate::Cell cell;
    cell.j = j;
    cell.gap = gap;
    cell.fourth_moment = mean;
    cell.ratio = mean / scale;
    cell.std_error = std::sqrt(var / Rd) / scale;
    est.cells.push_back(cell);
    if (cell.ratio > est.constant) {
      est.constant = cell.ratio;
      est.std_error = cell.std_error;
    }
  }
  return est;
}

TightnessEstimate tightness_constant(const GeneratorSpec& gen, long m,
                                     long replicas, const SeedSpec& seed) {
  const UniformGrid grid(m, 1.0);
  const RowSampler sample(gen, grid);
  return tightness_constant([&](const SeedSpec& s) { return sample(s); }, m,
                            replicas, seed);
}

RateFit rate_experiment(const WeightSpec& weight, const GeneratorSpec& gen, long m,
                        const std::vector<long>& n_values, long replicas,
                        const SeedSpec& seed, double T) {
  if (n_values.size() < 2) {
    throw std::domain_error("rate_experiment: need at least 2 block counts");
  }
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) {
      throw std::domain_error("rate_experiment: n values must be strictly increasing");
    }
  }
  const long n_max = n_values.back();
  if (m < 32 * n_max) {
    throw std::domain_error(
        "rate_experiment: requires m >= 32 * max(n); the grid limit is taken "
        "first, so the fine grid must dominate the block scheme");
  }
  if (replicas < 2) {
    throw std::domain_error("rate_experiment: need at least 2 replicas");
  }

  const UniformGrid grid(m, T);
  std::vector<BlockScheme> schemes;
  schemes.reserve(n_values.size());
  for (long n : n_values) schemes.emplace_back(grid, n);

  const long N = static_cast<long>(n_values.size());
  Matrix sups(N, replicas);
  Vector holder_norms(replicas);
  const WeightSampler sample_weight(weight, grid);
  const RowSampler sample_row(gen, grid);
  parallel_for(replicas, [&](Index r) {
    const SeedSpec rs = seed.with_replica(static_cast<std::uint64_t>(r));
    const WeightPath f = sample_weight(rs);
    const StepProcess g = sample_row(rs);
    holder_norms[r] = f.holder_norm;
    for (long ni = 0; ni < N; ++ni) {
      sups(ni, r) = remainder_sup(decompose(f, g, schemes[static_cast<std::size_t>(ni)]));
    }
  });

  std::vector<double> sorted_norms(holder_norms.data(),
                                   holder_norms.data() + replicas);
  std::sort(sorted_norms.begin(), sorted_norms.end());
  const double K = 2.0 * sorted_norms[static_cast<std::size_t>(replicas / 2)];

  RateFit fit;
  fit.n_values = n_values;
  fit.mean_sup.resize(N);
  fit.mean_sup_truncated.resize(N);
  fit.trunc_K = K;
  for (long ni = 0; ni < N; ++ni) {
    NeumaierSum all, trunc;
    long kept = 0;
    for (long r = 0; r < replicas; ++r) {
      all.add(sups(ni, r));
      if (holder_norms[r] <= K) {
        trunc.add(sups(ni, r));
        ++kept;
      }
    }
    fit.mean_sup[ni] = all.value() / static_cast<double>(replicas);
    fit.mean_sup_truncated[ni] =
        kept > 0 ? trunc.value() / static_cast<double>(kept) : 0.0;
  }

  fit.degenerate = (fit.mean_sup.minCoeff() <= 0.0);
  if (fit.degenerate) {
    fit.slope = fit.intercept = fit.r_squared =
        std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  Vector lx(N), ly(N);
  for (long ni = 0; ni < N; ++ni) {
    lx[ni] = std::log(static_cast<double>(n_values[static_cast<std::size_t>(ni)]));
    ly[ni] = std::log(fit.mean_sup[ni]);
  }
  const double mx = lx.mean();
  const double my = ly.mean();
  const double sxx = (lx.array() - mx).square().sum();
  const double sxy = ((lx.array() - mx) * (ly.array() - my)).sum();
  const double syy = (ly.array() - my).square().sum();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace wrs
