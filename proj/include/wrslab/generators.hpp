#pragma once

#include <optional>
#include <stdexcept>

#include "wrslab/paths.hpp"
#include "wrslab/rng.hpp"

namespace wrs {

/// Raised when a stationary Gaussian row cannot be synthesized exactly
/// (negative circulant eigenvalue and no Cholesky fallback possible).
struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fractional Gaussian noise row specification. hurst in (0,1) strictly;
/// quadratic-variation statistics additionally require hurst < 3/4.
struct FbmSpec {
  double hurst = 0.5;
  UniformGrid grid{1, 1.0};

  FbmSpec(double hurst_, const UniformGrid& grid_) : hurst(hurst_), grid(grid_) {
    if (!(hurst > 0.0) || !(hurst < 1.0)) {
      throw std::domain_error("FbmSpec: hurst must lie in (0, 1)");
    }
  }
};

/// Autocovariance of unit-variance fGn at integer lag r:
/// rho_H(r) = ((r+1)^{2H} + |r-1|^{2H} - 2 r^{2H}) / 2.
double fgn_autocovariance(double hurst, double lag);

enum class FgnMethod { automatic, circulant, cholesky };

/// Exact synthesizer for stationary fGn rows. Precomputes the circulant
/// spectrum (or the Cholesky factor) once, then samples in O(N log N)
/// (resp. O(N^2)) per draw. Increment variance is (1/m)^{2H}.
class FgnSynthesizer {
 public:
  FgnSynthesizer(const FbmSpec& spec, FgnMethod method = FgnMethod::automatic);

  /// One fGn row of length grid.count. Draw order of the underlying normals
  /// is fixed, so outputs are bit-reproducible given the engine state.
  Vector sample(Rng& rng) const;

  FgnMethod method() const { return method_; }

 private:
  Vector sample_circulant(Rng& rng) const;
  Vector sample_cholesky(Rng& rng) const;

  FbmSpec spec_;
  FgnMethod method_;
  Vector sqrt_eigenvalues;  // circulant: sqrt(lambda_k / (2M)), length M
  Matrix chol_lower;        // cholesky: L with L L^T = Toeplitz(rho)
  double scale_ = 1.0;      // m^{-H}
};

/// Rademacher row: increments +-1/sqrt(m), i.i.d. symmetric.
StepProcess gen_rademacher(const UniformGrid& grid, const SeedSpec& seed);

/// fGn increments on the grid (see FgnSynthesizer). One-shot convenience.
Vector gen_fgn(const FbmSpec& spec, const SeedSpec& seed,
               FgnMethod method = FgnMethod::automatic);

/// Limit standard deviation of the normalized quadratic-variation row:
/// sqrt(2 + 4 sum_{r>=1} rho_H(r)^2). Requires hurst < 3/4. The series is
/// summed directly to r = 2^15 and closed with an Euler-Maclaurin tail of
/// the asymptotic expansion rho_H(r) = H(2H-1) r^{2H-2} (1 + O(r^-2));
/// total absolute error is below 1e-10 on (0, 3/4).
double sigma_H(double hurst);

/// Quadratic-variation step row of an fBm with the given Hurst index:
/// xi_i = (m^{2H} (dB_i)^2 - 1)/sqrt(m), optionally divided by sigma_H so
/// the row's limit is a standard Brownian motion. Requires hurst < 3/4.
StepProcess gen_qv_step(const FbmSpec& spec, const SeedSpec& seed, bool normalize,
                        FgnMethod method = FgnMethod::automatic);

struct WeightSpec {
  enum class Kind { linear, polynomial, fbm_sample };
  Kind kind = Kind::linear;
  std::vector<double> coeffs;  // polynomial: f(t) = sum coeffs[k] t^k
  double hurst = 0.75;         // fbm_sample, must exceed 1/2

  static WeightSpec linear() { return {Kind::linear, {}, 0.0}; }
  static WeightSpec polynomial(std::vector<double> c) {
    return {Kind::polynomial, std::move(c), 0.0};
  }
  static WeightSpec fbm_sample(double hurst) {
    return {Kind::fbm_sample, {}, hurst};
  }

  /// Declared Hoelder exponent: 1 for linear/polynomial, H - 0.01 for fbm.
  double declared_alpha() const {
    return kind == Kind::fbm_sample ? hurst - 0.01 : 1.0;
  }
  /// Whether the path changes across replicas (only the fbm kind draws).
  bool is_random() const { return kind == Kind::fbm_sample; }
};

/// Weight path on the grid. Deterministic kinds ignore the seed entirely;
/// the fbm kind draws from the dedicated weight stream.
WeightPath gen_weight(const WeightSpec& spec, const UniformGrid& grid,
                      const SeedSpec& seed,
                      HolderMode mode = HolderMode::automatic);

/// Reusable weight factory for replica loops: deterministic kinds are built
/// once and copied out, the fbm kind shares one synthesizer across draws.
/// Same streams as gen_weight.
class WeightSampler {
 public:
  WeightSampler(const WeightSpec& spec, const UniformGrid& grid,
                HolderMode mode = HolderMode::automatic);
  WeightPath operator()(const SeedSpec& seed) const;

 private:
  WeightSpec spec_;
  UniformGrid grid_;
  HolderMode mode_;
  std::optional<WeightPath> fixed_;
  std::optional<FgnSynthesizer> synth_;
};

}  // namespace wrs
