#include "wrslab/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wrs {

namespace {

// 4-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGx[4] = {-0.8611363115940526, -0.3399810435848563,
                           0.3399810435848563, 0.8611363115940526};
constexpr double kGw[4] = {0.3478548451374538, 0.6521451548625461,
                           0.6521451548625461, 0.3478548451374538};

// Grid index of a value that must sit on the grid exactly.
long aligned_index(const UniformGrid& grid, double x, const char* what) {
  const long k = grid.index_at(x);
  if (grid.t(k) != x) {
    throw std::domain_error(std::string("fraccalc: ") + what +
                            " must be a grid point");
  }
  return k;
}

}  // namespace

FracSpec::FracSpec(double gamma_, double a_, double b_)
    : gamma(gamma_), a(a_), b(b_) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::domain_error("FracSpec: gamma must lie in (0, 1)");
  }
  if (!(a >= 0.0) || !(a < b)) {
    throw std::domain_error("FracSpec: window must satisfy 0 <= a < b");
  }
}

double frac_deriv_left_bound_constant(double alpha, double gamma) {
  return (1.0 + gamma / (alpha - gamma)) / std::tgamma(1.0 - gamma);
}

double frac_deriv_left(const WeightPath& f, const FracSpec& spec, double s,
                       long refinement) {
  const double gamma = spec.gamma;
  if (!(gamma < f.alpha)) {
    throw std::domain_error(
        "frac_deriv_left: gamma must be below the weight's Hoelder exponent");
  }
  if (!(s > spec.a) || !(s < spec.b) || !(s <= f.grid.T)) {
    throw std::domain_error("frac_deriv_left: s must lie in (a, b)");
  }
  if (refinement < 1) {
    throw std::domain_error("frac_deriv_left: refinement must be positive");
  }

  const double fs = f.value_at(s);
  const double u_max = s - spec.a;

  // Innermost linear segment (the grid cell whose interior reaches s from
  // the left): integral of L * u^{-gamma} in closed form.
  long ks = f.grid.index_at(s);
  if (f.grid.t(ks) == s && ks > 0) --ks;  // s on a node: use the cell below
  const double cell_left = f.grid.t(ks);
  const double slope =
      (f.values[ks + 1] - f.values[ks]) * static_cast<double>(f.grid.m);
  const double u_inner = std::min(u_max, s - cell_left);
  double integral = slope * std::pow(u_inner, 1.0 - gamma) / (1.0 - gamma);

  if (u_inner < u_max) {
    // Panel edges on [u_inner, u_max]: geometric ladder toward u = 0 with
    // `refinement` panels per decade, split at every grid kink.
    std::vector<double> edges;
    edges.push_back(u_inner);
    edges.push_back(u_max);
    const double ratio = std::pow(10.0, -1.0 / static_cast<double>(refinement));
    for (double u = u_max * ratio; u > u_inner; u *= ratio) edges.push_back(u);
    for (long i = f.grid.index_at(spec.a) + 1; i <= ks; ++i) {
      const double u = s - f.grid.t(i);
      if (u > u_inner && u < u_max) edges.push_back(u);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double ul = edges[e], ur = edges[e + 1];
      const double half = 0.5 * (ur - ul), mid = 0.5 * (ur + ul);
      double panel = 0.0;
      for (int q = 0; q < 4; ++q) {
        const double u = mid + half * kGx[q];
        panel += kGw[q] * (fs - f.value_at(s - u)) * std::pow(u, -gamma - 1.0);
      }
      integral += panel * half;
    }
  }

  const double boundary = (fs - f.value_at(spec.a)) * std::pow(u_max, -gamma);
  return (boundary + gamma * integral) / std::tgamma(1.0 - gamma);
}

double frac_deriv_right_step(const StepProcess& g, const FracSpec& spec, double s) {
  const double gamma = spec.gamma;
  const UniformGrid& grid = g.grid;
  const long B = aligned_index(grid, spec.b, "b");
  if (B < 1) throw std::domain_error("frac_deriv_right_step: b below first cell");
  const long A = grid.index_at(spec.a);
  if (B - A < 1) {
    throw std::domain_error(
        "frac_deriv_right_step: window must span at least one grid cell");
  }
  if (!(s > spec.a) || !(s < spec.b)) {
    throw std::domain_error("frac_deriv_right_step: s must lie in (a, b)");
  }
  const long below = grid.index_at(s);
  if (grid.t(below) == s) {
    throw std::domain_error(
        "frac_deriv_right_step: s must not be a grid point (the closed form "
        "assumes t_{k-1} < s < t_k)");
  }
  const long k = below + 1;  // t_{k-1} < s < t_k
  const double g_km1 = g.cumulative[k - 1];
  const double g_bminus = g.cumulative[B - 1];

  double value = (g_km1 - g_bminus) * std::pow(spec.b - s, gamma - 1.0);
  double prev_pow = std::pow(grid.t(k) - s, gamma - 1.0);
  for (long l = k + 1; l <= B; ++l) {
    const double cur_pow = std::pow(grid.t(l) - s, gamma - 1.0);
    value -= (g_km1 - g.cumulative[l - 1]) * (cur_pow - prev_pow);
    prev_pow = cur_pow;
  }
  return value / std::tgamma(gamma);
}

IbpCheckResult ibp_identity_check(const WeightPath& f, const StepProcess& g,
                                  const FracSpec& spec, long quad_points,
                                  long inner_refinement) {
  if (!(f.grid == g.grid)) {
    throw std::domain_error("ibp_identity_check: weight and step grids differ");
  }
  if (quad_points < 1) {
    throw std::domain_error("ibp_identity_check: quad_points must be positive");
  }
  const UniformGrid& grid = g.grid;
  const long A = aligned_index(grid, spec.a, "a");
  const long B = aligned_index(grid, spec.b, "b");

  // Exact Stieltjes sum over the jumps at t_i in [a, b).
  double lhs = 0.0;
  const double fa = f.values[A];
  for (long i = std::max(A, 1L); i <= B - 1; ++i) {
    lhs += (f.values[i] - fa) * g.increments[i - 1];
  }

  // Graded midpoint panels, quad_points per cell, clustered toward each
  // cell's right edge where the step-side derivative blows up like
  // (t_k - s)^{gamma-1}. The grading exponent keeps the composite midpoint
  // rule second order despite the singularity. Midpoints never hit grid
  // points, as the closed form requires. The last cell is skipped: the
  // step-side derivative vanishes identically there.
  const double grading = 1.0 + 2.0 / spec.gamma;
  std::vector<double> offsets(static_cast<std::size_t>(quad_points) + 1);
  for (long q = 0; q <= quad_points; ++q) {
    offsets[static_cast<std::size_t>(q)] =
        std::pow(static_cast<double>(q) / static_cast<double>(quad_points), grading);
  }
  double rhs = 0.0;
  for (long cell = A; cell < B - 1; ++cell) {
    const double right = grid.t(cell + 1);
    const double width = right - grid.t(cell);
    double acc = 0.0;
    for (long q = 0; q < quad_points; ++q) {
      const double d0 = width * offsets[static_cast<std::size_t>(q)];
      const double d1 = width * offsets[static_cast<std::size_t>(q) + 1];
      const double sq = right - 0.5 * (d0 + d1);
      acc += (d1 - d0) * frac_deriv_left(f, spec, sq, inner_refinement) *
             frac_deriv_right_step(g, spec, sq);
    }
    rhs += acc;
  }
  // Reversed orientation of the right-sided derivative in the pairing.
  rhs = -rhs;
  return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace wrs
