#pragma once

// Random distribution pairs for the entropy soundness checks.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qrng/distributions.hpp"
#include "qrng/rng.hpp"

namespace gen {

/// Random pmf; larger `concentration` gives spikier distributions.
inline qrng::QuantizedDistribution random_distribution(const qrng::SamplerConfig& c, qrng::Xoshiro256& rng,
                                                       double concentration) {
  std::vector<double> p(c.bins());
  double total = 0.0;
  for (auto& x : p) total += x = std::pow(rng.uniform(), concentration);
  if (total == 0.0) p[0] = total = 1.0;
  for (auto& x : p) x /= total;
  return {c, p};
}

/// Moves up to `scale` of every other bin's mass into one bin, half the
/// time the most likely one.
inline qrng::QuantizedDistribution perturb(const qrng::QuantizedDistribution& base, qrng::Xoshiro256& rng,
                                           double scale) {
  std::vector<double> p(base.probabilities().begin(), base.probabilities().end());
  const std::size_t to =
      rng.below(2) ? static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()) : rng.below(p.size());
  double moved = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == to) continue;
    const double take = p[i] * scale * rng.uniform();
    p[i] -= take;
    moved += take;
  }
  p[to] += moved;
  double total = 0.0;
  for (double x : p) total += x;
  for (auto& x : p) x /= total;
  return {base.config(), p};
}

/// Pair number `t` of the soundness suite at one bit depth.
inline std::pair<qrng::QuantizedDistribution, qrng::QuantizedDistribution> soundness_pair(const qrng::SamplerConfig& c,
                                                                                          qrng::Xoshiro256& rng, int t) {
  auto p = t % 3 == 0 ? qrng::ideal_gaussian(rng.uniform() - 0.5, 0.3 + 2.0 * rng.uniform(), c)
                      : random_distribution(c, rng, 1.0 + 8.0 * rng.uniform());
  auto q = t % 2 ? random_distribution(c, rng, 1.0 + 8.0 * rng.uniform())
                 : perturb(p, rng, std::pow(10.0, -6.0 * rng.uniform()));
  return {std::move(p), std::move(q)};
}

}  // namespace gen
