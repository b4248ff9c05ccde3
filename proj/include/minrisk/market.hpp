#pragma once

#include <cstdint>
#include <string>

#include "minrisk/hyperparams.hpp"
#include "minrisk/types.hpp"

namespace minrisk {

/// Shape of the per-period return fluctuations. Every kind is standardized
/// to mean 0 and variance 1 before scaling by sqrt(v_i), so the generated
/// return rates have mean r_i and variance v_i regardless of kind.
struct NoiseSpec {
  enum class Kind { Gaussian, Uniform, Rademacher };
  Kind kind = Kind::Gaussian;
};

/// Quenched randomness of one trial: the centered, 1/sqrt(N)-scaled return
/// matrix and its Gram matrix.
struct MarketSample {
  Matrix x;  // N x p, entries (return - r_i) / sqrt(N)
  Matrix j;  // x * x^T, symmetric, positive definite a.s. for p > N

  Index n_assets() const { return x.rows(); }
  Index n_periods() const { return x.cols(); }
  double period_ratio() const {
    return static_cast<double>(x.cols()) / static_cast<double>(x.rows());
  }
};

/// Generate one market realization. The per-asset mean is subtracted
/// exactly (the centered fluctuation sqrt(v_i) * xi is formed directly),
/// entries are drawn asset-major, and the result is deterministic per seed.
/// Requires n_periods > n_assets.
MarketSample generate_market(const HyperParams& params, Index n_periods,
                             NoiseSpec noise, std::uint64_t rng_seed);

/// Debug dump of the scaled return matrix: a 16-byte header of N and p as
/// 64-bit little-endian counts, then row-major IEEE float64 entries.
void write_market_dump(const MarketSample& sample, const std::string& path);

/// Read back a matrix written by write_market_dump.
Matrix read_market_dump(const std::string& path);

}  // namespace minrisk
