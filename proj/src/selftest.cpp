#include <cmath>
#include <ostream>
#include <sstream>

#include "wrslab/experiments.hpp"
#include "wrslab/fraccalc.hpp"
#include "wrslab/stats.hpp"

namespace wrs {

namespace {

struct Selftest {
  std::ostream& log;
  int failures = 0;

  void check(const char* name, bool ok, const std::string& detail = "") {
    if (ok) {
      log << "[ok]   " << name << "\n";
    } else {
      ++failures;
      log << "[FAIL] " << name << (detail.empty() ? "" : " (" + detail + ")")
          << "\n";
    }
  }

  static bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
  }
};

Vector to_vector(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

int selftest(std::ostream& log) {
  Selftest t{log};

  {  // step evaluation on the two-jump row
    const UniformGrid grid(2, 1.0);
    const StepProcess g = StepProcess::from_increments(grid, to_vector({1.0, -1.0}));
    t.check("eval_step before first jump", eval_step(g, 0.25) == 0.0);
    t.check("eval_step jump included at t_1", eval_step(g, 0.5) == 1.0);
    t.check("eval_step telescopes at T", eval_step(g, 1.0) == 0.0);
  }

  {  // Hoelder estimate against direct pair enumeration
    const UniformGrid grid(4, 1.0);
    Vector lin(5);
    for (long i = 0; i <= 4; ++i) lin[i] = grid.t(i);
    t.check("holder norm of linear path", holder_norm_estimate(lin, grid, 1.0) == 1.0);
    t.check("holder norm of constant path",
            holder_norm_estimate(Vector::Zero(5), grid, 0.8) == 0.0);
  }

  {  // Rademacher support and reproducibility
    const UniformGrid grid(256, 1.0);
    const SeedSpec seed{20240901, 0};
    const StepProcess a = gen_rademacher(grid, seed);
    const StepProcess b = gen_rademacher(grid, seed);
    bool support = true;
    for (long i = 0; i < grid.count; ++i) {
      support = support && std::abs(a.increments[i]) == 1.0 / 16.0;
    }
    t.check("rademacher support is +-1/sqrt(m)", support);
    t.check("rademacher reproducible",
            (a.increments.array() == b.increments.array()).all());
    const StepProcess c = gen_rademacher(grid, seed.with_replica(1));
    t.check("rademacher replicas differ",
            !(a.increments.array() == c.increments.array()).all());
  }

  {  // sigma_H trivial value and coarse monotonicity
    t.check("sigma_H(1/2) = sqrt(2)", sigma_H(0.5) == std::sqrt(2.0));
    bool mono = true;
    double prev = sigma_H(0.5);
    for (double h = 0.55; h < 0.75; h += 0.05) {
      const double cur = sigma_H(h);
      mono = mono && cur > prev;
      prev = cur;
    }
    t.check("sigma_H increasing on [1/2, 3/4)", mono);
  }

  {  // p-variation DP against the exhaustive oracle
    bool all = true;
    std::string detail;
    for (std::uint64_t inst = 0; inst < 200 && all; ++inst) {
      Rng rng(SeedSpec{777, inst}, 0x51);
      const long n = 4 + static_cast<long>(rng.next_u64() % 9);  // up to 12
      Vector v(n);
      const bool lattice = (rng.next_u64() & 1) != 0;
      v[0] = 0.0;
      for (long i = 1; i < n; ++i) {
        v[i] = v[i - 1] + (lattice ? rng.rademacher() : rng.gaussian());
      }
      const double p = 1.0 + 3.0 * rng.uniform01();
      if (!Selftest::close(pvar(v, p), pvar_brute(v, p), 1e-12)) {
        all = false;
        detail = "instance seed " + std::to_string(inst);
      }
    }
    t.check("pvar DP equals brute force (N <= 12)", all, detail);
    t.check("pvar alternating example",
            Selftest::close(pvar(to_vector({0, 1, 0, 1}), 2.0), std::sqrt(3.0), 1e-12));
    const Vector path = to_vector({0.0, 0.4, -0.3, 0.9, 0.1});
    double tv = 0.0;
    for (Index i = 1; i < path.size(); ++i) tv += std::abs(path[i] - path[i - 1]);
    t.check("pvar at p = 1 is total variation", pvar(path, 1.0) == tv);
  }

  {  // fractional power rule and the step-side hand oracle
    const UniformGrid grid(32, 1.25);
    Vector vals(grid.count + 1);
    for (long i = 0; i <= grid.count; ++i) vals[i] = grid.t(i);
    const WeightPath f = WeightPath::from_values(grid, vals, 1.0);
    const FracSpec spec(0.5, 0.0, 1.25);
    const double got = frac_deriv_left(f, spec, 1.0, 8);
    t.check("left derivative power rule 2/sqrt(pi)",
            Selftest::close(got, 1.1283791670955126, 1e-6),
            "got " + std::to_string(got));

    const UniformGrid g8(8, 1.0);
    Vector inc = Vector::Zero(8);
    inc[6] = 1.0;  // jump at t_7, the last grid point before b = 1
    const StepProcess g = StepProcess::from_increments(g8, inc);
    const FracSpec rspec(0.6, 0.0, 1.0);
    const double s = g8.t(6) + 0.3 / 8.0;
    const double expect = -std::pow(g8.t(7) - s, rspec.gamma - 1.0) /
                          std::tgamma(rspec.gamma);
    t.check("right derivative one-jump closed form",
            Selftest::close(frac_deriv_right_step(g, rspec, s), expect, 1e-12));
  }

  {  // integration-by-parts identity on a single-jump instance
    const UniformGrid grid(8, 1.0);
    Vector vals(grid.count + 1);
    for (long i = 0; i <= grid.count; ++i) vals[i] = grid.t(i);
    const WeightPath f = WeightPath::from_values(grid, vals, 1.0);
    Vector inc = Vector::Zero(8);
    inc[3] = 1.0;
    const StepProcess g = StepProcess::from_increments(grid, inc);
    const auto res = ibp_identity_check(f, g, FracSpec(0.6, 0.0, 1.0), 128);
    t.check("ibp identity on single jump",
            res.abs_err <= 1e-3 * std::abs(res.lhs),
            "lhs " + std::to_string(res.lhs) + " rhs " + std::to_string(res.rhs));
  }

  {  // decomposition recombines to the weighted sum
    bool all = true;
    std::string detail;
    for (std::uint64_t inst = 0; inst < 20 && all; ++inst) {
      const long m = 16L << (inst % 4);
      const UniformGrid grid(m, 1.0);
      const SeedSpec seed{4242, inst};
      const WeightPath f = gen_weight(WeightSpec::fbm_sample(0.75), grid, seed);
      const StepProcess g = gen_rademacher(grid, seed);
      const long n = 2 + static_cast<long>(inst % 7);
      const auto d = decompose(f, g, BlockScheme(grid, n));
      for (long k = 0; k <= grid.count && all; ++k) {
        const double sum =
            d.main_term[k] + d.remainder[k] + d.edge_term[k] + d.frozen_partial[k];
        const double scale = std::max(1.0, std::abs(d.total[k]));
        if (std::abs(sum - d.total[k]) > 1e-10 * scale) {
          all = false;
          detail = "instance seed " + std::to_string(inst) + " k " + std::to_string(k);
        }
      }
    }
    t.check("block decomposition recombines", all, detail);

    const UniformGrid grid(16, 1.0);
    const SeedSpec seed{5, 0};
    const WeightPath f = gen_weight(WeightSpec::linear(), grid, seed);
    const StepProcess g = gen_rademacher(grid, seed);
    const auto d = decompose(f, g, BlockScheme(grid, 16));
    t.check("n = m blocks have zero remainder", d.remainder.cwiseAbs().maxCoeff() == 0.0);
  }

  {  // weighted sums
    const UniformGrid grid(2, 1.0);
    const StepProcess g = StepProcess::from_increments(grid, to_vector({0.25, -1.5}));
    Vector vals = to_vector({0.0, 0.5, 1.0});
    const WeightPath f = WeightPath::from_values(grid, vals, 1.0);
    t.check("endpoint weighted sum",
            weighted_sum(f, g, 1.0) == 0.5 * 0.25 + 1.0 * (-1.5));
    t.check("forward weighted sum",
            weighted_sum_forward(f, g, 1.0) == 0.0 * 0.25 + 0.5 * (-1.5));
  }

  {  // KS basics
    t.check("ks of identical samples is 0",
            ks_statistic(Vector::Zero(64), Vector::Zero(64)) == 0.0);
    t.check("ks of point mass at 0 vs normal is 1/2",
            Selftest::close(ks_statistic(Vector::Zero(100)), 0.5, 1e-12));
  }

  {  // zeta pins
    t.check("zeta(2) = pi^2/6",
            Selftest::close(zeta(2.0), M_PI * M_PI / 6.0, 1e-12));
    t.check("zeta(1.45) reference",
            Selftest::close(zeta(1.45), 2.8311965244511155, 1e-10));
  }

  {  // CSV round trip
    const UniformGrid grid(8, 1.0);
    const StepProcess g = gen_rademacher(grid, SeedSpec{99, 3});
    std::stringstream buf;
    write_path_csv(buf, g.cumulative, grid);
    UniformGrid parsed(1, 1.0);
    const Vector back = read_path_csv(buf, &parsed);
    t.check("path csv round trip",
            (back.array() == g.cumulative.array()).all() && parsed == grid);
  }

  log << (t.failures == 0 ? "selftest: all checks passed\n"
                          : "selftest: FAILURES present\n");
  return t.failures == 0 ? exit_code::kPass : exit_code::kAcceptanceFail;
}

}  // namespace wrs
