#pragma once

// ADC quantization model and probability mass functions over its bins.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <json.hpp>

#include "qrng/bitio.hpp"
#include "qrng/error.hpp"

namespace qrng {

/// N-bit sampler over [lo, hi). Bins are lower-inclusive half-open
/// intervals of width (hi - lo) / 2^N; out-of-range voltages saturate.
struct SamplerConfig {
  unsigned bit_depth = 5;
  double lo = -5.0;
  double hi = 5.0;

  std::size_t bins() const { return std::size_t{1} << bit_depth; }
  double width() const { return (hi - lo) / static_cast<double>(bins()); }

  /// Lower edge of bin i; edge(bins()) == hi.
  double edge(std::size_t i) const { return lo + width() * static_cast<double>(i); }

  void validate() const {
    detail::require(bit_depth >= 1 && bit_depth <= 16, "bit depth must be in 1..16");
    detail::require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "sampling range requires lo < hi");
  }

  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

inline std::size_t quantize(double v, const SamplerConfig& config) {
  detail::require(std::isfinite(v), "quantize: non-finite sample");
  const double pos = std::floor((v - config.lo) / config.width());
  if (pos < 0.0) return 0;
  const auto top = config.bins() - 1;
  if (pos >= static_cast<double>(top)) return top;
  return static_cast<std::size_t>(pos);
}

class QuantizedDistribution {
 public:
  QuantizedDistribution(SamplerConfig config, std::vector<double> probabilities)
      : config_(config), p_(std::move(probabilities)) {
    config_.validate();
    detail::require(p_.size() == config_.bins(), "distribution size must equal 2^N bins");
    double total = 0.0;
    for (double x : p_) {
      detail::require(std::isfinite(x) && x >= 0.0, "probabilities must be finite and non-negative");
      total += x;
    }
    detail::require(std::abs(total - 1.0) <= 1e-9, "probabilities must sum to 1");
  }

  const SamplerConfig& config() const noexcept { return config_; }
  std::span<const double> probabilities() const noexcept { return p_; }
  double operator[](std::size_t i) const noexcept { return p_[i]; }
  std::size_t size() const noexcept { return p_.size(); }

 private:
  SamplerConfig config_;
  std::vector<double> p_;
};

inline double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Gaussian N(mu, sigma^2) integrated over each bin. The edge bins take
/// the tails beyond [lo, hi], as a saturating ADC would.
inline QuantizedDistribution ideal_gaussian(double mu, double sigma, const SamplerConfig& config) {
  config.validate();
  detail::require(std::isfinite(mu), "ideal_gaussian: mu must be finite");
  detail::require(std::isfinite(sigma) && sigma > 0.0, "ideal_gaussian: sigma must be > 0");
  const std::size_t bins = config.bins();
  std::vector<double> cdf(bins + 1);
  cdf.front() = 0.0;
  cdf.back() = 1.0;
  for (std::size_t i = 1; i < bins; ++i) cdf[i] = standard_normal_cdf((config.edge(i) - mu) / sigma);
  std::vector<double> p(bins);
  for (std::size_t i = 0; i < bins; ++i) p[i] = cdf[i + 1] - cdf[i];
  return {config, std::move(p)};
}

/// Relative frequencies of bin indices.
inline QuantizedDistribution empirical(std::span<const std::size_t> samples, const SamplerConfig& config) {
  config.validate();
  detail::require(!samples.empty(), "empirical: no samples");
  std::vector<std::uint64_t> counts(config.bins(), 0);
  for (auto s : samples) {
    detail::require(s < counts.size(), "empirical: bin index out of range");
    ++counts[s];
  }
  std::vector<double> p(counts.size());
  const auto total = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(counts[i]) / total;
  return {config, std::move(p)};
}

inline QuantizedDistribution empirical(const SymbolSequence& symbols, const SamplerConfig& config) {
  config.validate();
  detail::require(symbols.bit_depth() == config.bit_depth, "empirical: symbol depth differs from sampler");
  detail::require(!symbols.empty(), "empirical: no samples");
  std::vector<std::uint64_t> counts(config.bins(), 0);
  for (auto s : symbols.symbols()) ++counts[s];
  std::vector<double> p(counts.size());
  const auto total = static_cast<double>(symbols.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(counts[i]) / total;
  return {config, std::move(p)};
}

inline void to_json(nlohmann::json& j, const SamplerConfig& c) {
  j = nlohmann::json{{"bit_depth", c.bit_depth}, {"lo", c.lo}, {"hi", c.hi}};
}

inline void to_json(nlohmann::json& j, const QuantizedDistribution& d) {
  const auto& c = d.config();
  j = nlohmann::json{{"bit_depth", c.bit_depth},
                     {"lo", c.lo},
                     {"hi", c.hi},
                     {"probabilities", std::vector<double>(d.probabilities().begin(), d.probabilities().end())}};
}

}  // namespace qrng
