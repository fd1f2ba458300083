#include "wrslab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wrs {

UniformGrid::UniformGrid(long m_, double T_) : m(m_), T(T_) {
  if (m < 1) throw std::domain_error("UniformGrid: m must be a positive integer");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw std::domain_error("UniformGrid: horizon T must be positive and finite");
  }
  count = static_cast<long>(std::floor(static_cast<double>(m) * T));
  // Fix up against product rounding so t_count <= T < t_{count+1} exactly.
  while (t(count + 1) <= T) ++count;
  while (count > 0 && t(count) > T) --count;
  if (count < 1) {
    throw std::domain_error("UniformGrid: floor(m*T) must be at least 1");
  }
}

long UniformGrid::index_at(double tq) const {
  long k = static_cast<long>(std::floor(tq * static_cast<double>(m)));
  k = std::clamp(k, 0L, count);
  while (k < count && t(k + 1) <= tq) ++k;
  while (k > 0 && t(k) > tq) --k;
  return k;
}

StepProcess StepProcess::from_increments(const UniformGrid& grid, Vector increments) {
  if (increments.size() != grid.count) {
    throw std::domain_error("StepProcess: increments length must equal grid.count");
  }
  StepProcess g{grid, std::move(increments), Vector::Zero(grid.count + 1)};
  for (long k = 1; k <= grid.count; ++k) {
    g.cumulative[k] = g.cumulative[k - 1] + g.increments[k - 1];
  }
  return g;
}

double eval_step(const StepProcess& g, double t) {
  if (!(t >= 0.0) || !(t <= g.grid.T)) {
    throw std::domain_error("eval_step: t outside [0, T]");
  }
  return g.cumulative[g.grid.index_at(t)];
}

namespace {

double pair_scan(const Vector& values, const UniformGrid& grid, double alpha,
                 long window) {
  const long n = values.size() - 1;  // highest index
  double best = 0.0;
  // One vectorized max per lag: pairs (i, i+d) share the weight (d/m)^-alpha.
  for (long d = 1; d <= window; ++d) {
    const long len = n + 1 - d;
    const double diff_max =
        (values.segment(d, len) - values.segment(0, len)).cwiseAbs().maxCoeff();
    const double w =
        std::pow(static_cast<double>(d) / static_cast<double>(grid.m), -alpha);
    best = std::max(best, diff_max * w);
  }
  return best;
}

}  // namespace

double holder_norm_estimate(const Vector& values, const UniformGrid& grid,
                            double alpha, HolderMode mode) {
  if (values.size() < 2) {
    throw std::domain_error("holder_norm_estimate: need at least 2 grid points");
  }
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw std::domain_error("holder_norm_estimate: alpha must lie in (0, 1]");
  }
  const long n = values.size() - 1;
  long window = n;
  if (mode == HolderMode::windowed ||
      (mode == HolderMode::automatic && n > 4096)) {
    window = std::max<long>(grid.m / 4, 4096);
    window = std::min(window, n);
  }
  return pair_scan(values, grid, alpha, window);
}

WeightPath WeightPath::from_values(const UniformGrid& grid, Vector values,
                                   double alpha, HolderMode mode) {
  if (values.size() != grid.count + 1) {
    throw std::domain_error("WeightPath: values length must equal grid.count + 1");
  }
  if (!(alpha > 0.5) || !(alpha <= 1.0)) {
    throw std::domain_error("WeightPath: alpha must lie in (1/2, 1]");
  }
  const double norm = holder_norm_estimate(values, grid, alpha, mode);
  return WeightPath{grid, std::move(values), alpha, norm};
}

double WeightPath::value_at(double tq) const {
  if (!(tq >= 0.0) || !(tq <= grid.T)) {
    throw std::domain_error("WeightPath::value_at: t outside [0, T]");
  }
  const long k = grid.index_at(tq);
  if (k >= grid.count) return values[grid.count];
  const double tk = grid.t(k);
  if (tq == tk) return values[k];
  const double theta = (tq - tk) * static_cast<double>(grid.m);
  return values[k] + theta * (values[k + 1] - values[k]);
}

void write_path_csv(std::ostream& os, const Vector& values, const UniformGrid& grid) {
  os << "# wrs-lab csv v1\n";
  os << "index,t,value\n";
  os << std::setprecision(17);
  for (Index i = 0; i < values.size(); ++i) {
    os << i << ',' << grid.t(i) << ',' << values[i] << '\n';
  }
}

void write_path_csv_file(const std::string& file, const Vector& values,
                         const UniformGrid& grid) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot open for writing: " + file);
  write_path_csv(os, values, grid);
}

Vector read_path_csv(std::istream& is, UniformGrid* grid_out) {
  std::string line;
  std::vector<double> vals;
  std::vector<double> ts;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("index", 0) == 0) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) continue;
    if (!std::getline(row, cell, ',')) {
      throw std::runtime_error("path csv: malformed row: " + line);
    }
    ts.push_back(std::stod(cell));
    if (!std::getline(row, cell, ',')) {
      throw std::runtime_error("path csv: malformed row: " + line);
    }
    vals.push_back(std::stod(cell));
  }
  if (vals.size() < 2) throw std::runtime_error("path csv: fewer than 2 rows");
  Vector v(static_cast<Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Index>(i)] = vals[i];
  if (grid_out) {
    const double step = ts[1] - ts[0];
    const long m = std::max(1L, static_cast<long>(std::llround(1.0 / step)));
    *grid_out = UniformGrid(m, ts.back());
  }
  return v;
}

Vector read_path_csv_file(const std::string& file, UniformGrid* grid_out) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open for reading: " + file);
  return read_path_csv(is, grid_out);
}

}  // namespace wrs
