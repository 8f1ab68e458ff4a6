#pragma once

// Min-entropy accounting against a distribution the eavesdropper may have
// reshaped while keeping its variance.
//
//   H_min(P)      = -log2 max_x P(x)
//   d(P, P')      = 1/2 sum_x |P(x) - P'(x)|           (full bin domain)
//   dH_m(d, N)    = log2(d * 2^(N+1) + 1)
//   H_min^modify  = max(0, H_min(P) - dH_m)
//
// For any P' on the same 2^N bins, H_min(P) - dH_m <= H_min(P'): the
// attacker's mutual-information gain never exceeds the modification term.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <json.hpp>

#include "qrng/distributions.hpp"
#include "qrng/error.hpp"

namespace qrng {

struct EntropyReport {
  unsigned bit_depth = 0;
  double h_min_ideal = 0.0;
  double h_min_empirical = 0.0;
  double stat_distance = 0.0;
  double distance_slack = 1.0;
  double delta_h_m = 0.0;
  double h_min_modified = 0.0;
  double mutual_info_bound = 0.0;
  std::size_t sample_count = 0;
};

inline double min_entropy(const QuantizedDistribution& dist) {
  const auto p = dist.probabilities();
  return -std::log2(*std::max_element(p.begin(), p.end()));
}

inline double statistical_distance(const QuantizedDistribution& p, const QuantizedDistribution& q) {
  detail::require(p.config() == q.config(), "statistical_distance: sampler configurations differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

inline double modification_term(double d, unsigned bit_depth) {
  detail::require(d >= 0.0 && d <= 1.0, "modification_term: distance must lie in [0, 1]");
  detail::require(bit_depth >= 1, "modification_term: bit depth must be >= 1");
  return std::log2(std::ldexp(d, static_cast<int>(bit_depth) + 1) + 1.0);
}

inline double modified_min_entropy(double h_ideal, double d, unsigned bit_depth) {
  return std::max(0.0, h_ideal - modification_term(d, bit_depth));
}

/// I(G:E) = H_min(x) - H'_min(x'). Negative means no leakage.
inline double mutual_information_bound(double h_ideal, double h_actual) { return h_ideal - h_actual; }

/// H^q = H^{q+c} - H^c, floored at zero.
inline double conditional_quantum_min_entropy(double h_total, double h_classical) {
  detail::require(h_total >= 0.0 && h_classical >= 0.0, "entropies must be >= 0");
  return std::max(0.0, h_total - h_classical);
}

/// Audits `observed` against the `ideal` model. `distance_slack` (>= 1)
/// inflates d before computing the modification term, for callers who
/// want a finite-size margin; 1.0 leaves d as measured.
inline EntropyReport entropy_report(const QuantizedDistribution& ideal, const QuantizedDistribution& observed,
                                    std::size_t sample_count, double distance_slack = 1.0) {
  detail::require(distance_slack >= 1.0 && std::isfinite(distance_slack), "distance slack must be >= 1");
  EntropyReport r;
  r.bit_depth = ideal.config().bit_depth;
  r.h_min_ideal = min_entropy(ideal);
  r.h_min_empirical = min_entropy(observed);
  r.stat_distance = statistical_distance(ideal, observed);
  r.distance_slack = distance_slack;
  r.delta_h_m = modification_term(std::min(1.0, r.stat_distance * distance_slack), r.bit_depth);
  r.h_min_modified = std::max(0.0, r.h_min_ideal - r.delta_h_m);
  r.mutual_info_bound = mutual_information_bound(r.h_min_ideal, r.h_min_empirical);
  r.sample_count = sample_count;
  return r;
}

inline void to_json(nlohmann::json& j, const EntropyReport& r) {
  j = nlohmann::json{{"bit_depth", r.bit_depth},
                     {"h_min_ideal", r.h_min_ideal},
                     {"h_min_empirical", r.h_min_empirical},
                     {"stat_distance", r.stat_distance},
                     {"distance_slack", r.distance_slack},
                     {"delta_h_m", r.delta_h_m},
                     {"h_min_modified", r.h_min_modified},
                     {"mutual_info_bound", r.mutual_info_bound},
                     {"sample_count", r.sample_count}};
}

}  // namespace qrng
