#include "wrslab/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "wrslab/fraccalc.hpp"
#include "wrslab/stats.hpp"

namespace wrs {

namespace {

namespace fs = std::filesystem;

constexpr const char* kArtifactVersion = "wrs-lab 1.0.0";
constexpr const char* kCsvSchema = "# wrs-lab csv v1";

/// Collects files written by a run so a failed run can clean up after
/// itself.
class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    fs::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    const fs::path p = dir_ / name;
    written_.push_back(p);
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open for writing: " + p.string());
    os << std::setprecision(17);
    return os;
  }

  void discard_written() {
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

void write_manifest(OutputDir& out, const ExperimentConfig& cfg,
                    const std::vector<std::string>& artifacts) {
  auto os = out.open("manifest.txt");
  os << "# wrs-lab manifest v1\n";
  os << "version = " << kArtifactVersion << "\n";
  os << "experiment = " << experiment_name(cfg.experiment) << "\n";
  os << "master_seed = " << cfg.master_seed << "\n";
  os << "replicas = " << cfg.replicas << "\n";
  if (!cfg.m_list.empty()) {
    os << "m =";
    for (std::size_t i = 0; i < cfg.m_list.size(); ++i) {
      os << (i ? "," : " ") << cfg.m_list[i];
    }
    os << "\n";
  } else {
    os << "m = " << cfg.m << "\n";
  }
  if (!cfg.n_list.empty()) {
    os << "n =";
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
      os << (i ? "," : " ") << cfg.n_list[i];
    }
    os << "\n";
  }
  os << "[generator]\n";
  os << "kind = "
     << (cfg.generator.kind == GeneratorSpec::Kind::rademacher ? "rademacher" : "qv")
     << "\n";
  if (cfg.generator.kind == GeneratorSpec::Kind::qv) {
    os << "hurst = " << fmt(cfg.generator.hurst) << "\n";
    os << "normalize = " << (cfg.generator.normalize ? "true" : "false") << "\n";
  }
  os << "[weight]\n";
  switch (cfg.weight.kind) {
    case WeightSpec::Kind::linear:
      os << "kind = linear\n";
      break;
    case WeightSpec::Kind::polynomial: {
      os << "kind = polynomial\ncoeffs =";
      for (std::size_t i = 0; i < cfg.weight.coeffs.size(); ++i) {
        os << (i ? "," : " ") << fmt(cfg.weight.coeffs[i]);
      }
      os << "\n";
      break;
    }
    case WeightSpec::Kind::fbm_sample:
      os << "kind = fbm\nhurst = " << fmt(cfg.weight.hurst) << "\n";
      break;
  }
  if (cfg.experiment == ExperimentKind::identity) {
    os << "[identity]\nquad_points = " << cfg.quad_points
       << "\nrefinement = " << cfg.refinement << "\ngamma =";
    for (std::size_t i = 0; i < cfg.gammas.size(); ++i) {
      os << (i ? "," : " ") << fmt(cfg.gammas[i]);
    }
    os << "\n";
  }
  if (cfg.experiment == ExperimentKind::pvar_scan) {
    os << "[pvar]\np = " << fmt(cfg.p) << "\n";
  }
  if (cfg.experiment == ExperimentKind::stable_cf) {
    os << "[stable-cf]\nu =";
    for (std::size_t i = 0; i < cfg.u_grid.size(); ++i) {
      os << (i ? "," : " ") << fmt(cfg.u_grid[i]);
    }
    os << "\n";
  }
  os << "threads_requested = " << cfg.threads << "\n";
  os << "artifacts =";
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    os << (i ? "," : " ") << artifacts[i];
  }
  os << "\n";
}

// ---------------------------------------------------------------------------
// clt: mixed-normal statistic of the weighted sum against N(0,1).

bool run_clt(const ExperimentConfig& cfg, OutputDir& out, std::ostream& log) {
  const UniformGrid grid(cfg.m, 1.0);
  Vector stats(cfg.replicas);
  const WeightSampler sample_weight(cfg.weight, grid);
  const RowSampler sample_row(cfg.generator, grid);
  parallel_for(cfg.replicas, [&](Index r) {
    const SeedSpec rs{cfg.master_seed, static_cast<std::uint64_t>(r)};
    const WeightPath f = sample_weight(rs);
    const StepProcess g = sample_row(rs);
    stats[r] = mixed_normal_stat(f, g);
  });
  const double ks = ks_statistic(stats);
  const bool pass = ks <= thresholds::kCltKsMax;

  auto rep = out.open("replicas.csv");
  rep << kCsvSchema << "\nreplica,mixed_normal_stat\n";
  for (Index r = 0; r < stats.size(); ++r) rep << r << ',' << stats[r] << '\n';

  auto agg = out.open("aggregate.csv");
  agg << kCsvSchema << "\nreplicas,ks,threshold,pass\n";
  agg << cfg.replicas << ',' << ks << ',' << thresholds::kCltKsMax << ','
      << (pass ? 1 : 0) << '\n';

  auto sum = out.open("summary.txt");
  sum << "clt: ks = " << fmt(ks) << " threshold = " << fmt(thresholds::kCltKsMax)
      << " replicas = " << cfg.replicas << " -> " << verdict(pass) << "\n";
  log << "clt: ks = " << ks << " (threshold " << thresholds::kCltKsMax << ") "
      << verdict(pass) << "\n";
  return pass;
}

// ---------------------------------------------------------------------------
// identity: fractional integration-by-parts quadrature against the exact
// Stieltjes sum, one row per (seed, gamma, quad_points).

bool run_identity(const ExperimentConfig& cfg, OutputDir& out, std::ostream& log) {
  const UniformGrid grid(cfg.m, 1.0);
  const WeightPath f0 = gen_weight(cfg.weight, grid, SeedSpec{cfg.master_seed, 0});
  const std::vector<long> qps{cfg.quad_points / 2, cfg.quad_points};

  struct Row {
    long seed_idx, quad_points;
    double gamma, lhs, rhs, abs_err, rel_err;
  };
  const long n_gamma = static_cast<long>(cfg.gammas.size());
  std::vector<Row> rows(static_cast<std::size_t>(cfg.replicas * n_gamma * 2));
  parallel_for(cfg.replicas * n_gamma, [&](Index idx) {
    const long seed_idx = idx / n_gamma;
    const double gamma = cfg.gammas[static_cast<std::size_t>(idx % n_gamma)];
    const SeedSpec rs{cfg.master_seed, static_cast<std::uint64_t>(seed_idx)};
    const WeightPath f =
        cfg.weight.kind == WeightSpec::Kind::fbm_sample ? gen_weight(cfg.weight, grid, rs) : f0;
    const StepProcess g = gen_rademacher(grid, rs);
    const FracSpec spec(gamma, 0.0, grid.t(grid.count));
    for (std::size_t qi = 0; qi < qps.size(); ++qi) {
      const auto res = ibp_identity_check(f, g, spec, qps[qi], cfg.refinement);
      const double rel =
          res.lhs != 0.0 ? res.abs_err / std::abs(res.lhs) : res.abs_err;
      rows[static_cast<std::size_t>(idx) * 2 + qi] =
          Row{seed_idx, qps[qi], gamma, res.lhs, res.rhs, res.abs_err, rel};
    }
  });

  auto rep = out.open("replicas.csv");
  rep << kCsvSchema << "\nseed,gamma,quad_points,lhs,rhs,abs_err,rel_err\n";
  for (const Row& r : rows) {
    rep << r.seed_idx << ',' << r.gamma << ',' << r.quad_points << ',' << r.lhs
        << ',' << r.rhs << ',' << r.abs_err << ',' << r.rel_err << '\n';
  }

  // Per gamma: max relative error at full quad_points, and whether the
  // error decreased for every seed when quad_points doubled.
  bool pass = true;
  auto agg = out.open("aggregate.csv");
  agg << kCsvSchema << "\ngamma,quad_points,max_rel_err,decreasing,pass\n";
  auto sum = out.open("summary.txt");
  for (long gi = 0; gi < n_gamma; ++gi) {
    const double gamma = cfg.gammas[static_cast<std::size_t>(gi)];
    double max_rel = 0.0;
    bool decreasing = true;
    for (long s = 0; s < cfg.replicas; ++s) {
      const std::size_t base = static_cast<std::size_t>((s * n_gamma + gi) * 2);
      const Row& half = rows[base];
      const Row& full = rows[base + 1];
      max_rel = std::max(max_rel, full.rel_err);
      const double floor = thresholds::kIdentityAbsFloor;
      if (full.abs_err > half.abs_err && full.abs_err > floor) decreasing = false;
    }
    const bool ok = max_rel <= thresholds::kIdentityRelErr && decreasing;
    pass = pass && ok;
    agg << gamma << ',' << cfg.quad_points << ',' << max_rel << ','
        << (decreasing ? 1 : 0) << ',' << (ok ? 1 : 0) << '\n';
    sum << "identity gamma = " << fmt(gamma) << ": max_rel_err = " << fmt(max_rel)
        << " threshold = " << fmt(thresholds::kIdentityRelErr)
        << " decreasing = " << (decreasing ? "yes" : "no") << " -> " << verdict(ok)
        << "\n";
    log << "identity gamma=" << gamma << ": max_rel_err = " << max_rel << " "
        << verdict(ok) << "\n";
  }
  sum << "identity overall -> " << verdict(pass) << "\n";
  return pass;
}

// ---------------------------------------------------------------------------
// rate: log-log decay of E[sup |remainder|] in the block count.

bool run_rate(const ExperimentConfig& cfg, OutputDir& out, std::ostream& log) {
  const SeedSpec seed{cfg.master_seed, 0};
  const RateFit fit = rate_experiment(cfg.weight, cfg.generator, cfg.m, cfg.n_list,
                                      cfg.replicas, seed);
  // Per-replica artifact is recomputed here (cheap relative to the fit) so
  // every aggregate row can be rebuilt from it.
  const UniformGrid grid(cfg.m, 1.0);
  std::vector<BlockScheme> schemes;
  for (long n : cfg.n_list) schemes.emplace_back(grid, n);
  const long N = static_cast<long>(cfg.n_list.size());
  Matrix sups(N, cfg.replicas);
  Vector norms(cfg.replicas);
  const WeightSampler sample_weight(cfg.weight, grid);
  const RowSampler sample_row(cfg.generator, grid);
  parallel_for(cfg.replicas, [&](Index r) {
    const SeedSpec rs = seed.with_replica(static_cast<std::uint64_t>(r));
    const WeightPath f = sample_weight(rs);
    const StepProcess g = sample_row(rs);
    norms[r] = f.holder_norm;
    for (long ni = 0; ni < N; ++ni) {
      sups(ni, r) = remainder_sup(decompose(f, g, schemes[static_cast<std::size_t>(ni)]));
    }
  });

  auto rep = out.open("replicas.csv");
  rep << kCsvSchema << "\nn,replica,remainder_sup,holder_norm\n";
  for (long ni = 0; ni < N; ++ni) {
    for (long r = 0; r < cfg.replicas; ++r) {
      rep << cfg.n_list[static_cast<std::size_t>(ni)] << ',' << r << ','
          << sups(ni, r) << ',' << norms[r] << '\n';
    }
  }

  auto agg = out.open("aggregate.csv");
  agg << kCsvSchema << "\nn,mean_sup,mean_sup_truncated\n";
  for (long ni = 0; ni < N; ++ni) {
    agg << cfg.n_list[static_cast<std::size_t>(ni)] << ',' << fit.mean_sup[ni] << ','
        << fit.mean_sup_truncated[ni] << '\n';
  }

  const double alpha = cfg.weight.declared_alpha();
  const double threshold = -(alpha - 0.5) + thresholds::kRateSlopeSlack;
  const bool pass = !fit.degenerate && fit.slope <= threshold;
  auto sum = out.open("summary.txt");
  if (fit.degenerate) {
    sum << "rate: degenerate (a mean sup-remainder vanished; no fit)\n";
  } else {
    sum << "rate: slope = " << fmt(fit.slope) << " threshold = " << fmt(threshold)
        << " intercept = " << fmt(fit.intercept)
        << " r_squared = " << fmt(fit.r_squared) << " trunc_K = " << fmt(fit.trunc_K)
        << " -> " << verdict(pass) << "\n";
  }
  log << "rate: slope = " << fit.slope << " (threshold " << threshold << ") "
      << verdict(pass) << "\n";
  return pass;
}

// ---------------------------------------------------------------------------
// pvar-scan: distribution of the strong p-variation across grid sizes.

bool run_pvar_scan(const ExperimentConfig& cfg, OutputDir& out, std::ostream& log) {
  const SeedSpec seed{cfg.master_seed, 0};
  const PvarScanResult scan =
      pvar_distribution_scan(cfg.generator, cfg.p, cfg.m_list, cfg.replicas, seed);

  auto rep = out.open("replicas.csv");
  rep << kCsvSchema << "\nm,replica,pvar,supnorm\n";
  for (const auto& row : scan.per_m) {
    for (Index r = 0; r < row.pvars.size(); ++r) {
      rep << row.m << ',' << r << ',' << row.pvars[r] << ',' << row.sup_norms[r]
          << '\n';
    }
  }

  bool pass = true;
  auto agg = out.open("aggregate.csv");
  agg << kCsvSchema << "\nm,mean_pvar,mean_sup,lepingle_ratio,ks_vs_prev\n";
  auto sum = out.open("summary.txt");
  double max_ratio = 0.0;
  double max_ks = 0.0;
  for (std::size_t i = 0; i < scan.per_m.size(); ++i) {
    const auto& row = scan.per_m[i];
    double ks = 0.0;
    if (i > 0) ks = ks_statistic(scan.per_m[i - 1].pvars, row.pvars);
    max_ratio = std::max(max_ratio, row.lepingle_ratio);
    max_ks = std::max(max_ks, ks);
    agg << row.m << ',' << row.mean_pvar << ',' << row.mean_sup << ','
        << row.lepingle_ratio << ',' << ks << '\n';
  }
  const bool ratio_ok = max_ratio <= thresholds::kLepingleRatioMax;
  const bool ks_ok = max_ks <= thresholds::kPvarKsMax;
  pass = ratio_ok && ks_ok;
  sum << "pvar-scan: p = " << fmt(cfg.p) << " max_lepingle_ratio = " << fmt(max_ratio)
      << " (<= " << fmt(thresholds::kLepingleRatioMax) << ") -> " << verdict(ratio_ok)
      << "\n";
  sum << "pvar-scan: max cross-m ks = " << fmt(max_ks) << " (<= "
      << fmt(thresholds::kPvarKsMax) << ") -> " << verdict(ks_ok) << "\n";
  sum << "pvar-scan overall -> " << verdict(pass) << "\n";
  log << "pvar-scan: max ratio = " << max_ratio << ", max ks = " << max_ks << " "
      << verdict(pass) << "\n";
  return pass;
}

// ---------------------------------------------------------------------------
// tightness: fourth-moment lattice constant per grid size.

bool run_tightness(const ExperimentConfig& cfg, OutputDir& out, std::ostream& log) {
  const SeedSpec seed{cfg.master_seed, 0};
  std::vector<TightnessEstimate> ests;
  for (long m : cfg.m_list) {
    ests.push_back(tightness_constant(cfg.generator, m, cfg.replicas, seed));
  }

  auto rep = out.open("replicas.csv");
  rep << kCsvSchema << "\nm,j,gap,mean_fourth,ratio,std_error\n";
  for (std::size_t i = 0; i < ests.size(); ++i) {
    for (const auto& c : ests[i].cells) {
      rep << cfg.m_list[i] << ',' << c.j << ',' << c.gap << ',' << c.fourth_moment
          << ',' << c.ratio << ',' << c.std_error << '\n';
    }
  }

  auto agg = out.open("aggregate.csv");
  agg << kCsvSchema << "\nm,constant,std_error\n";
  for (std::size_t i = 0; i < ests.size(); ++i) {
    agg << cfg.m_list[i] << ',' << ests[i].constant << ',' << ests[i].std_error
        << '\n';
  }

  bool pass = true;
  auto sum = out.open("summary.txt");
  if (cfg.generator.kind == GeneratorSpec::Kind::rademacher) {
    for (std::size_t i = 0; i < ests.size(); ++i) {
      const bool ok = ests[i].constant >= thresholds::kTightRademacherLo &&
                      ests[i].constant <= thresholds::kTightRademacherHi;
      pass = pass && ok;
      sum << "tightness m = " << cfg.m_list[i]
          << ": constant = " << fmt(ests[i].constant) << " in ["
          << fmt(thresholds::kTightRademacherLo) << ", "
          << fmt(thresholds::kTightRademacherHi) << "] -> " << verdict(ok) << "\n";
    }
  } else {
    double lo = ests[0].constant, hi = ests[0].constant;
    for (const auto& e : ests) {
      if (!std::isfinite(e.constant)) pass = false;
      lo = std::min(lo, e.constant);
      hi = std::max(hi, e.constant);
    }
    const double spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
    const bool ok = pass && spread <= thresholds::kTightQvRelSpread;
    pass = ok;
    sum << "tightness qv: constants in [" << fmt(lo) << ", " << fmt(hi)
        << "] relative spread = " << fmt(spread) << " (<= "
        << fmt(thresholds::kTightQvRelSpread) << ") -> " << verdict(ok) << "\n";
  }
  sum << "tightness overall -> " << verdict(pass) << "\n";
  log << "tightness: " << verdict(pass) << "\n";
  return pass;
}

// ---------------------------------------------------------------------------
// stable-cf: characteristic-function gap against the mixed-normal limit.

bool run_stable_cf(const ExperimentConfig& cfg, OutputDir& out, std::ostream& log) {
  const UniformGrid grid(cfg.m, 1.0);
  const long R = cfg.replicas;
  Vector X(R), V(R), Hone(R), Hsup(R);
  const WeightSampler sample_weight(cfg.weight, grid);
  const RowSampler sample_row(cfg.generator, grid);
  parallel_for(R, [&](Index r) {
    const SeedSpec rs{cfg.master_seed, static_cast<std::uint64_t>(r)};
    const WeightPath f = sample_weight(rs);
    const StepProcess g = sample_row(rs);
    X[r] = weighted_sum(f, g, grid.T);
    double v = 0.0;
    for (long i = 1; i <= grid.count; ++i) v += f.values[i] * f.values[i];
    V[r] = v / static_cast<double>(grid.m);
    Hone[r] = h_one(f);
    Hsup[r] = h_clipped_sup(f);
  });

  Vector u(static_cast<Index>(cfg.u_grid.size()));
  for (std::size_t i = 0; i < cfg.u_grid.size(); ++i) {
    u[static_cast<Index>(i)] = cfg.u_grid[i];
  }

  struct Named {
    const char* name;
    const Vector& h;
  };
  const std::vector<Named> family{{"one", Hone}, {"clipped_sup", Hsup}};

  auto rep = out.open("replicas.csv");
  rep << kCsvSchema << "\nreplica,weighted_sum,cond_variance,h_one,h_clipped_sup\n";
  for (long r = 0; r < R; ++r) {
    rep << r << ',' << X[r] << ',' << V[r] << ',' << Hone[r] << ',' << Hsup[r]
        << '\n';
  }

  bool pass = true;
  auto agg = out.open("aggregate.csv");
  agg << kCsvSchema << "\nh,u,lhs_re,lhs_im,rhs_re,gap,std_error,pass\n";
  auto sum = out.open("summary.txt");
  for (const auto& named : family) {
    const StableCheckReport repc = stable_cf_check(X, V, named.h, u);
    bool ok = true;
    for (Index iu = 0; iu < u.size(); ++iu) {
      const bool cell_ok =
          repc.gap[iu] <= thresholds::kStableCfSigmas * repc.std_error[iu];
      ok = ok && cell_ok;
      agg << named.name << ',' << u[iu] << ',' << repc.lhs[static_cast<std::size_t>(iu)].real()
          << ',' << repc.lhs[static_cast<std::size_t>(iu)].imag() << ','
          << repc.rhs[static_cast<std::size_t>(iu)].real() << ',' << repc.gap[iu] << ','
          << repc.std_error[iu] << ',' << (cell_ok ? 1 : 0) << '\n';
    }
    pass = pass && ok;
    sum << "stable-cf h = " << named.name
        << ": max_gap = " << fmt(repc.max_abs_gap) << " (<= "
        << fmt(thresholds::kStableCfSigmas) << " MC sigma per u) -> " << verdict(ok)
        << "\n";
    log << "stable-cf h=" << named.name << ": max gap = " << repc.max_abs_gap << " "
        << verdict(ok) << "\n";
  }
  sum << "stable-cf overall -> " << verdict(pass) << "\n";
  return pass;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.threads != 0) set_default_threads(cfg.threads);
  OutputDir out(cfg.output_dir);
  bool pass = false;
  try {
    switch (cfg.experiment) {
      case ExperimentKind::clt:
        pass = run_clt(cfg, out, log);
        break;
      case ExperimentKind::identity:
        pass = run_identity(cfg, out, log);
        break;
      case ExperimentKind::rate:
        pass = run_rate(cfg, out, log);
        break;
      case ExperimentKind::pvar_scan:
        pass = run_pvar_scan(cfg, out, log);
        break;
      case ExperimentKind::tightness:
        pass = run_tightness(cfg, out, log);
        break;
      case ExperimentKind::stable_cf:
        pass = run_stable_cf(cfg, out, log);
        break;
    }
  } catch (...) {
    out.discard_written();
    throw;
  }
  write_manifest(out, cfg, {"replicas.csv", "aggregate.csv", "summary.txt"});
  return pass ? exit_code::kPass : exit_code::kAcceptanceFail;
}

}  // namespace wrs
