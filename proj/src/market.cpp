#include "minrisk/market.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "minrisk/rng.hpp"

namespace minrisk {

namespace {

double draw_standardized(Rng& rng, NoiseSpec::Kind kind) {
  switch (kind) {
    case NoiseSpec::Kind::Gaussian:
      return rng.normal();
    case NoiseSpec::Kind::Uniform:
      // U(-sqrt(3), sqrt(3)) has unit variance.
      return rng.uniform(-std::sqrt(3.0), std::sqrt(3.0));
    case NoiseSpec::Kind::Rademacher:
      return rng.rademacher();
  }
  throw std::invalid_argument("NoiseSpec: unknown kind");
}

}  // namespace

MarketSample generate_market(const HyperParams& params, Index n_periods,
                             NoiseSpec noise, std::uint64_t rng_seed) {
  params.validate();
  const Index n = params.size();
  if (n_periods <= n)
    throw std::invalid_argument(
        "generate_market: n_periods must exceed n_assets (alpha > 1)");

  Rng rng(rng_seed);
  MarketSample sample;
  sample.x.resize(n, n_periods);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < n; ++i) {
    const double scale = std::sqrt(params.variances[i]) * inv_sqrt_n;
    for (Index mu = 0; mu < n_periods; ++mu)
      sample.x(i, mu) = scale * draw_standardized(rng, noise.kind);
  }

  // J = X X^T accumulated through one symmetric rank update, then mirrored.
  sample.j = Matrix::Zero(n, n);
  sample.j.selfadjointView<Eigen::Lower>().rankUpdate(sample.x);
  sample.j.triangularView<Eigen::StrictlyUpper>() =
      sample.j.transpose().triangularView<Eigen::StrictlyUpper>();
  return sample;
}

void write_market_dump(const MarketSample& sample, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const std::uint64_t n = static_cast<std::uint64_t>(sample.x.rows());
  const std::uint64_t p = static_cast<std::uint64_t>(sample.x.cols());
  // Header and payload are little-endian; this writer targets LE hosts.
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&p), 8);
  for (Index i = 0; i < sample.x.rows(); ++i)
    for (Index mu = 0; mu < sample.x.cols(); ++mu) {
      const double value = sample.x(i, mu);
      out.write(reinterpret_cast<const char*>(&value), 8);
    }
  if (!out) throw std::runtime_error("short write: " + path);
}

Matrix read_market_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::uint64_t n = 0, p = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&p), 8);
  if (!in || n == 0 || p == 0 || n > (1u << 30) || p > (1u << 30))
    throw std::runtime_error("bad market dump header: " + path);
  Matrix x(static_cast<Index>(n), static_cast<Index>(p));
  for (Index i = 0; i < x.rows(); ++i)
    for (Index mu = 0; mu < x.cols(); ++mu) {
      double value = 0;
      in.read(reinterpret_cast<char*>(&value), 8);
      x(i, mu) = value;
    }
  if (!in) throw std::runtime_error("truncated market dump: " + path);
  return x;
}

}  // namespace minrisk
