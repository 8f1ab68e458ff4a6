#pragma once

// Laser phase-noise source with an optional photodiode-coefficient attack.
//
// Honest detector:   V  = alpha_0 * I
// Attacked detector: V' = alpha_e * (1 - I / (beta_e * I_max)) * I
//
// I ~ N(0, sigma_q^2 + sigma_c^2). Classical noise is folded into the
// variance of I; only variances enter the entropy analysis.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrng/bitio.hpp"
#include "qrng/distributions.hpp"
#include "qrng/error.hpp"
#include "qrng/rng.hpp"

namespace qrng {

enum class DetectorMode { honest, attacked };

inline const char* to_string(DetectorMode m) { return m == DetectorMode::honest ? "honest" : "attacked"; }

struct AttackParams {
  double alpha_0 = 1.0;
  double alpha_e = 0.99;
  double beta_e = 2.0;
  double i_max = 5.0;

  void validate() const {
    detail::require(std::isfinite(alpha_0) && std::isfinite(alpha_e), "detector coefficients must be finite");
    detail::require(std::isfinite(beta_e) && beta_e != 0.0, "beta_e must be non-zero");
    detail::require(std::isfinite(i_max) && i_max > 0.0, "i_max must be > 0");
  }
};

struct SourceModel {
  double sigma_q = 1.0;
  double sigma_c = 0.0;
  DetectorMode mode = DetectorMode::honest;
  AttackParams attack{};
  std::uint64_t rng_seed = 0;

  double sigma_total() const { return std::sqrt(sigma_q * sigma_q + sigma_c * sigma_c); }

  void validate() const {
    detail::require(std::isfinite(sigma_q) && std::isfinite(sigma_c), "noise deviations must be finite");
    detail::require(sigma_q >= 0.0 && sigma_c >= 0.0, "noise deviations must be >= 0");
    detail::require(sigma_q > 0.0 || sigma_c > 0.0, "sigma_q and sigma_c cannot both be zero");
    attack.validate();
  }
};

inline double detector_response(double intensity, const AttackParams& params, DetectorMode mode) {
  if (mode == DetectorMode::honest) return params.alpha_0 * intensity;
  return params.alpha_e * intensity - params.alpha_e * intensity * intensity / (params.beta_e * params.i_max);
}

/// Quantized symbols plus the moments of the pre-quantization voltage.
struct Simulation {
  SymbolSequence symbols;
  double voltage_mean = 0.0;
  double voltage_variance = 0.0;
};

/// Deterministic in (model, config, count). Voltage moments use Welford's
/// update so 1e7+ samples do not lose precision.
inline Simulation simulate(const SourceModel& model, const SamplerConfig& config, std::size_t count) {
  model.validate();
  config.validate();
  detail::require(config.bit_depth <= 8, "simulated symbols are stored one per octet (N <= 8)");
  detail::require(count > 0, "simulate: count must be > 0");

  Xoshiro256 rng(model.rng_seed);
  GaussianSampler gauss;
  const double sigma = model.sigma_total();
  std::vector<std::uint8_t> symbols(count);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double intensity = sigma * gauss(rng);
    const double v = detector_response(intensity, model.attack, model.mode);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
    symbols[k] = static_cast<std::uint8_t>(quantize(v, config));
  }
  const double variance = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  return {SymbolSequence(config.bit_depth, std::move(symbols)), mean, variance};
}

inline SymbolSequence generate_symbols(const SourceModel& model, const SamplerConfig& config, std::size_t count) {
  return simulate(model, config, count).symbols;
}

/// sigma_q^2 = sigma_{q+c}^2 - sigma_c^2, from laser-on and laser-off runs.
inline double classical_variance_subtraction(double var_total, double var_classical) {
  detail::require(var_total >= 0.0 && var_classical >= 0.0, "variances must be >= 0");
  detail::require(var_classical <= var_total, "classical variance exceeds total variance (unphysical measurement)");
  return var_total - var_classical;
}

inline void to_json(nlohmann::json& j, const AttackParams& a) {
  j = nlohmann::json{{"alpha_0", a.alpha_0}, {"alpha_e", a.alpha_e}, {"beta_e", a.beta_e}, {"i_max", a.i_max}};
}

inline void to_json(nlohmann::json& j, const SourceModel& m) {
  j = nlohmann::json{{"sigma_q", m.sigma_q},
                     {"sigma_c", m.sigma_c},
                     {"mode", to_string(m.mode)},
                     {"attack", m.attack},
                     {"rng_seed", m.rng_seed}};
}

}  // namespace qrng
