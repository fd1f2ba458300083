#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace wrs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Neumaier compensated summation. Used for all Monte Carlo reductions so
/// aggregates do not depend on accumulation noise when replica counts grow.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(const Vector& v) {
  NeumaierSum s;
  for (Index i = 0; i < v.size(); ++i) s.add(v[i]);
  return s.value();
}

/// Riemann zeta for s in (1, 4]: direct summation plus Euler-Maclaurin tail,
/// absolute error below 1e-12 in this range.
double zeta(double s);

/// Runs fn(i) for i in [0, count) across up to max_threads workers.
/// Work is split in contiguous chunks; fn must only write to slot i of
/// preallocated output, so results are identical for any thread count.
void parallel_for(Index count, const std::function<void(Index)>& fn,
                  unsigned max_threads = 0);

/// Global default for parallel_for when max_threads == 0 (CLI --threads).
void set_default_threads(unsigned n);
unsigned default_threads();

}  // namespace wrs
