#include "wrslab/generators.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <vector>

namespace wrs {

double fgn_autocovariance(double hurst, double lag) {
  const double r = std::abs(lag);
  const double twoH = 2.0 * hurst;
  return 0.5 * (std::pow(r + 1.0, twoH) + std::pow(std::abs(r - 1.0), twoH) -
                2.0 * std::pow(r, twoH));
}

namespace {

constexpr long kCholeskyLimit = 1L << 10;

Matrix fgn_toeplitz(double hurst, long n) {
  Matrix c(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j <= i; ++j) {
      const double v = fgn_autocovariance(hurst, static_cast<double>(i - j));
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

}  // namespace

FgnSynthesizer::FgnSynthesizer(const FbmSpec& spec, FgnMethod method)
    : spec_(spec), method_(method) {
  const long n = spec.grid.count;
  scale_ = std::pow(static_cast<double>(spec.grid.m), -spec.hurst);
  if (method_ == FgnMethod::automatic) {
    method_ = FgnMethod::circulant;
  }
  if (method_ == FgnMethod::circulant) {
    // First row of the length-2N circulant embedding of Toeplitz(rho).
    const long M = 2 * n;
    std::vector<double> row(static_cast<std::size_t>(M));
    for (long k = 0; k <= n; ++k) {
      row[static_cast<std::size_t>(k)] = fgn_autocovariance(spec.hurst, k);
    }
    for (long k = 1; k < n; ++k) {
      row[static_cast<std::size_t>(M - k)] = row[static_cast<std::size_t>(k)];
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, row);
    Vector lambda(M);
    double lmax = 0.0;
    for (long k = 0; k < M; ++k) {
      lambda[k] = spectrum[static_cast<std::size_t>(k)].real();
      lmax = std::max(lmax, lambda[k]);
    }
    const double tol = -1e-12 * std::max(1.0, lmax);
    double lmin = lambda.minCoeff();
    if (lmin < tol) {
      // Embedding not nonnegative definite at this size: fall back to the
      // exact Cholesky route when affordable, otherwise refuse. Never clip.
      if (method == FgnMethod::circulant || n > kCholeskyLimit) {
        throw SynthesisError(
            "fgn synthesis: circulant embedding has negative eigenvalue " +
            std::to_string(lmin) + " and no Cholesky fallback is possible");
      }
      method_ = FgnMethod::cholesky;
    } else {
      // Stored as sqrt(lambda_k / (2M)): the complex bins draw (U + iV) with
      // this deviation, the two real bins (k = 0, M/2) get an extra sqrt(2).
      sqrt_eigenvalues =
          (lambda.cwiseMax(0.0) / (2.0 * static_cast<double>(M))).cwiseSqrt();
      return;
    }
  }
  // Cholesky of the exact Toeplitz covariance.
  Eigen::LLT<Matrix> llt(fgn_toeplitz(spec.hurst, n));
  if (llt.info() != Eigen::Success) {
    throw SynthesisError("fgn synthesis: Cholesky factorization failed");
  }
  chol_lower = llt.matrixL();
}

Vector FgnSynthesizer::sample(Rng& rng) const {
  return method_ == FgnMethod::cholesky ? sample_cholesky(rng)
                                        : sample_circulant(rng);
}

Vector FgnSynthesizer::sample_circulant(Rng& rng) const {
  const long M = sqrt_eigenvalues.size();
  const long n = spec_.grid.count;
  const long half = M / 2;
  std::vector<std::complex<double>> w(static_cast<std::size_t>(M));
  // Fixed draw order: k = 0, then (re, im) pairs for k = 1..M/2-1, then M/2.
  w[0] = sqrt_eigenvalues[0] * std::sqrt(2.0) * rng.gaussian();
  for (long k = 1; k < half; ++k) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    w[static_cast<std::size_t>(k)] = sqrt_eigenvalues[k] * std::complex<double>(re, im);
    w[static_cast<std::size_t>(M - k)] = std::conj(w[static_cast<std::size_t>(k)]);
  }
  w[static_cast<std::size_t>(half)] =
      sqrt_eigenvalues[half] * std::sqrt(2.0) * rng.gaussian();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> x;
  fft.fwd(x, w);
  Vector out(n);
  for (long i = 0; i < n; ++i) out[i] = scale_ * x[static_cast<std::size_t>(i)].real();
  return out;
}

Vector FgnSynthesizer::sample_cholesky(Rng& rng) const {
  const long n = spec_.grid.count;
  Vector z(n);
  for (long i = 0; i < n; ++i) z[i] = rng.gaussian();
  return scale_ * (chol_lower * z);
}

StepProcess gen_rademacher(const UniformGrid& grid, const SeedSpec& seed) {
  Rng rng(seed, stream_salt::kRademacher);
  const double h = 1.0 / std::sqrt(static_cast<double>(grid.m));
  Vector inc(grid.count);
  for (long i = 0; i < grid.count; ++i) inc[i] = h * rng.rademacher();
  return StepProcess::from_increments(grid, std::move(inc));
}

Vector gen_fgn(const FbmSpec& spec, const SeedSpec& seed, FgnMethod method) {
  FgnSynthesizer synth(spec, method);
  Rng rng(seed, stream_salt::kFgn);
  return synth.sample(rng);
}

double sigma_H(double hurst) {
  if (!(hurst > 0.0)) throw std::domain_error("sigma_H: hurst must be positive");
  if (!(hurst < 0.75)) {
    throw std::domain_error(
        "sigma_H: requires hurst < 3/4 (the autocovariance series sum_r "
        "rho_H(r)^2 diverges at the boundary rate)");
  }
  constexpr long R = 1L << 15;
  NeumaierSum head;
  for (long r = 1; r <= R; ++r) {
    const double rho = fgn_autocovariance(hurst, static_cast<double>(r));
    head.add(rho * rho);
  }
  // Tail sum_{r>R} rho^2 via Euler-Maclaurin on the asymptotic expansion
  // rho(r) = c r^{2H-2} (1 + b2 r^{-2} + b4 r^{-4} + O(r^{-6})),
  // c = H(2H-1), b2 = (2H-2)(2H-3)/12,
  // b4 = (2H-2)(2H-3)(2H-4)(2H-5)/360. rho^2 is then a sum of three powers
  // r^{-s}, each summed by integral + boundary corrections at a = R+1.
  const double H = hurst;
  const double c = H * (2.0 * H - 1.0);
  const double b2 = (2.0 * H - 2.0) * (2.0 * H - 3.0) / 12.0;
  const double b4 = (2.0 * H - 2.0) * (2.0 * H - 3.0) * (2.0 * H - 4.0) *
                    (2.0 * H - 5.0) / 360.0;
  const double base = 4.0 - 4.0 * H;  // rho^2 leading power r^{-base}
  const double a = static_cast<double>(R) + 1.0;
  auto power_tail = [a](double s) {
    // sum_{r >= a} r^{-s} = a^{1-s}/(s-1) + a^{-s}/2 + s a^{-s-1}/12 - ...
    return std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) +
           s / 12.0 * std::pow(a, -s - 1.0) -
           s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(a, -s - 3.0);
  };
  double tail = power_tail(base);
  tail += 2.0 * b2 * power_tail(base + 2.0);
  tail += (b2 * b2 + 2.0 * b4) * power_tail(base + 4.0);
  tail *= c * c;
  return std::sqrt(2.0 + 4.0 * (head.value() + tail));
}

StepProcess gen_qv_step(const FbmSpec& spec, const SeedSpec& seed, bool normalize,
                        FgnMethod method) {
  if (!(spec.hurst < 0.75)) {
    throw std::domain_error(
        "gen_qv_step: requires hurst < 3/4 (Brownian limit of the "
        "quadratic-variation row fails beyond it)");
  }
  const Vector fgn = gen_fgn(spec, seed, method);
  const long m = spec.grid.m;
  const double m2H = std::pow(static_cast<double>(m), 2.0 * spec.hurst);
  const double root_m = std::sqrt(static_cast<double>(m));
  const double denom = normalize ? sigma_H(spec.hurst) : 1.0;
  Vector inc(fgn.size());
  for (Index i = 0; i < fgn.size(); ++i) {
    inc[i] = (m2H * fgn[i] * fgn[i] - 1.0) / (root_m * denom);
  }
  return StepProcess::from_increments(spec.grid, std::move(inc));
}

WeightSampler::WeightSampler(const WeightSpec& spec, const UniformGrid& grid,
                             HolderMode mode)
    : spec_(spec), grid_(grid), mode_(mode) {
  if (spec.kind == WeightSpec::Kind::fbm_sample) {
    if (!(spec.hurst > 0.5)) {
      throw std::domain_error("WeightSampler: fbm weight requires hurst > 1/2");
    }
    synth_.emplace(FbmSpec(spec.hurst, grid));
  } else {
    fixed_ = gen_weight(spec, grid, SeedSpec{0, 0}, mode);
  }
}

WeightPath WeightSampler::operator()(const SeedSpec& seed) const {
  if (fixed_) return *fixed_;
  Rng rng(seed, stream_salt::kWeight);
  const Vector fgn = synth_->sample(rng);
  Vector values(grid_.count + 1);
  values[0] = 0.0;
  for (long i = 1; i <= grid_.count; ++i) values[i] = values[i - 1] + fgn[i - 1];
  return WeightPath::from_values(grid_, std::move(values), spec_.hurst - 0.01,
                                 mode_);
}

WeightPath gen_weight(const WeightSpec& spec, const UniformGrid& grid,
                      const SeedSpec& seed, HolderMode mode) {
  Vector values(grid.count + 1);
  switch (spec.kind) {
    case WeightSpec::Kind::linear:
      for (long i = 0; i <= grid.count; ++i) values[i] = grid.t(i);
      return WeightPath::from_values(grid, std::move(values), 1.0, mode);
    case WeightSpec::Kind::polynomial: {
      for (long i = 0; i <= grid.count; ++i) {
        const double t = grid.t(i);
        double acc = 0.0;
        for (auto it = spec.coeffs.rbegin(); it != spec.coeffs.rend(); ++it) {
          acc = acc * t + *it;
        }
        values[i] = acc;
      }
      return WeightPath::from_values(grid, std::move(values), 1.0, mode);
    }
    case WeightSpec::Kind::fbm_sample: {
      if (!(spec.hurst > 0.5)) {
        throw std::domain_error(
            "gen_weight: fbm_sample weight requires hurst > 1/2");
      }
      FgnSynthesizer synth(FbmSpec(spec.hurst, grid));
      Rng rng(seed, stream_salt::kWeight);
      const Vector fgn = synth.sample(rng);
      values[0] = 0.0;
      for (long i = 1; i <= grid.count; ++i) values[i] = values[i - 1] + fgn[i - 1];
      return WeightPath::from_values(grid, std::move(values), spec.hurst - 0.01,
                                     mode);
    }
  }
  throw std::domain_error("gen_weight: unknown weight kind");
}

}  // namespace wrs
