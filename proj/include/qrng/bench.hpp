#pragma once

// Timing harness: naive vs transform extraction, block-length sweep over a
// fixed amount of raw data, and transform cost at 2^s vs 2^s + 1.
//
// Every timed run is checked first: compare_methods refuses to record a
// timing whose output disagrees with the other method.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qrng/bitio.hpp"
#include "qrng/error.hpp"
#include "qrng/extractor.hpp"
#include "qrng/pipeline.hpp"
#include "qrng/rng.hpp"

namespace qrng::bench {

struct TimingRecord {
  std::string method;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  double median_seconds = 0.0;
  double min_seconds = 0.0;
  bool timed_out = false;
};

struct SweepRecord {
  std::size_t block_n = 0;
  std::size_t total_bits = 0;
  double total_seconds = 0.0;
  std::size_t blocks = 0;
  std::size_t key_bits = 0;
};

struct CompareOptions {
  double gamma = 0.5;
  std::size_t trials = 3;
  double naive_budget_seconds = 60.0;
  bool include_modified = false;
  std::uint64_t rng_seed = 1;
};

class MethodMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

inline TimingRecord summarize(std::string method, std::size_t n, std::size_t m, std::vector<double> times) {
  TimingRecord r{std::move(method), n, m, times.size(), 0.0, 0.0, false};
  if (times.empty()) return r;
  std::sort(times.begin(), times.end());
  const std::size_t k = times.size();
  r.median_seconds = k % 2 ? times[k / 2] : 0.5 * (times[k / 2 - 1] + times[k / 2]);
  r.min_seconds = times.front();
  return r;
}

}  // namespace detail

/// For each n: m = floor(gamma * n); one untimed warm-up, then `trials`
/// timed runs per method on identical random inputs. A naive run that
/// exceeds the budget marks the record timed out and stops further naive
/// trials at that n.
inline std::vector<TimingRecord> compare_methods(const std::vector<std::size_t>& n_list, const CompareOptions& opt) {
  qrng::detail::require(opt.trials >= 3, "compare_methods needs at least 3 trials");
  qrng::detail::require(opt.gamma > 0.0 && opt.gamma < 1.0, "gamma must lie in (0, 1)");
  std::vector<TimingRecord> out;
  Xoshiro256 rng(opt.rng_seed);
  for (std::size_t n : n_list) {
    const auto m = static_cast<std::size_t>(std::floor(opt.gamma * static_cast<double>(n)));
    qrng::detail::require(m >= 1 && m < n, "gamma * n must give 1 <= m < n for n = " + std::to_string(n));
    const ExtractorParams params{n, m, Variant::standard};
    std::vector<double> naive_t, fft_t, mod_t;
    bool timed_out = false;
    for (std::size_t trial = 0; trial <= opt.trials; ++trial) {
      const bool warmup = trial == 0;
      const Seed seed = Seed::random(rng, params.seed_length());
      const BitSequence raw = BitSequence::random(rng, n);

      auto t0 = detail::Clock::now();
      const BitSequence fast = extract_fft(seed, raw, params);
      const double fft_s = detail::elapsed(t0);

      std::optional<BitSequence> slow;
      double naive_s = 0.0;
      if (!timed_out) {
        const auto budget = std::chrono::duration_cast<detail::Clock::duration>(
            std::chrono::duration<double>(opt.naive_budget_seconds));
        t0 = detail::Clock::now();
        slow = extract_naive_until(seed, raw, params, t0 + budget);
        naive_s = detail::elapsed(t0);
        if (!slow) timed_out = true;
      }
      if (slow && *slow != fast)
        throw MethodMismatch("naive and fft keys differ at n = " + std::to_string(n));

      double mod_s = 0.0;
      if (opt.include_modified) {
        const Seed short_seed(seed.bits().slice(0, n));
        t0 = detail::Clock::now();
        const BitSequence mod = extract_modified(short_seed, raw, m);
        mod_s = detail::elapsed(t0);
        if (mod != extract_modified_naive(short_seed, raw, m))
          throw MethodMismatch("modified fft and direct evaluation differ at n = " + std::to_string(n));
      }
      if (warmup) continue;
      fft_t.push_back(fft_s);
      if (slow) naive_t.push_back(naive_s);
      if (opt.include_modified) mod_t.push_back(mod_s);
    }
    auto naive = detail::summarize("naive", n, m, naive_t);
    naive.timed_out = timed_out;
    if (timed_out) naive.trials = 0, naive.median_seconds = naive.min_seconds = 0.0;
    out.push_back(std::move(naive));
    out.push_back(detail::summarize("fft", n, m, fft_t));
    if (opt.include_modified) out.push_back(detail::summarize("modified", n, m, mod_t));
  }
  return out;
}

/// Processes the same `total_bits` of pseudorandom raw data once per block
/// length and records the wall time of process_stream. `config.block_n` is
/// overridden per entry.
inline std::vector<SweepRecord> sweep_block_lengths(std::size_t total_bits, const std::vector<std::size_t>& n_list,
                                                    PipelineConfig config, std::uint64_t rng_seed = 1) {
  qrng::detail::require(!n_list.empty(), "sweep needs at least one block length");
  qrng::detail::require(total_bits >= *std::max_element(n_list.begin(), n_list.end()),
                        "total bits must cover the largest block length");
  Xoshiro256 rng(rng_seed);
  const BitSequence raw = BitSequence::random(rng, total_bits);
  std::vector<SweepRecord> out;
  for (std::size_t n : n_list) {
    config.block_n = n;
    const auto seeds = SeedSource::from_master(derive_seed(rng_seed, n), config.seed_policy);
    const auto t0 = detail::Clock::now();
    auto [key, report] = process_stream(raw, config, seeds);
    const double secs = detail::elapsed(t0);
    out.push_back({n, total_bits, secs, report.blocks_processed, key.size()});
  }
  return out;
}

/// Transform-only cost of a GF(2) circular convolution at each length.
inline std::vector<TimingRecord> power_of_two_probe(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                                    std::size_t trials, std::uint64_t rng_seed = 1) {
  qrng::detail::require(pairs.empty() || trials >= 3, "power_of_two_probe needs at least 3 trials");
  std::vector<TimingRecord> out;
  Xoshiro256 rng(rng_seed);
  for (const auto& [pow2, other] : pairs) {
    for (std::size_t len : {pow2, other}) {
      const BitSequence a = BitSequence::random(rng, len);
      const BitSequence b = BitSequence::random(rng, len);
      CirculantHasher hasher(a);
      hasher.convolve(b);
      std::vector<double> times;
      for (std::size_t t = 0; t < trials; ++t) {
        const auto t0 = detail::Clock::now();
        hasher.convolve(b);
        times.push_back(detail::elapsed(t0));
      }
      out.push_back(detail::summarize("fft", len, 0, std::move(times)));
    }
  }
  return out;
}

inline std::string timing_csv(const std::vector<TimingRecord>& records) {
  std::ostringstream os;
  os << "method,n,m,trials,median_s,min_s\n" << std::setprecision(9);
  for (const auto& r : records) {
    os << r.method << ',' << r.n << ',' << r.m << ',' << r.trials << ',';
    if (r.timed_out)
      os << "timeout,timeout\n";
    else
      os << r.median_seconds << ',' << r.min_seconds << '\n';
  }
  return os.str();
}

inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os << "block_n,total_bits,total_s\n" << std::setprecision(9);
  for (const auto& r : records) os << r.block_n << ',' << r.total_bits << ',' << r.total_seconds << '\n';
  return os.str();
}

inline std::string timing_table(const std::vector<TimingRecord>& records) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "# method" << std::right << std::setw(12) << "n" << std::setw(12) << "m"
     << std::setw(8) << "trials" << std::setw(16) << "median_s" << std::setw(16) << "min_s" << '\n';
  for (const auto& r : records) {
    os << std::left << std::setw(10) << r.method << std::right << std::setw(12) << r.n << std::setw(12) << r.m
       << std::setw(8) << r.trials;
    if (r.timed_out)
      os << std::setw(16) << "timeout" << std::setw(16) << "timeout" << '\n';
    else
      os << std::scientific << std::setprecision(4) << std::setw(16) << r.median_seconds << std::setw(16)
         << r.min_seconds << std::defaultfloat << '\n';
  }
  return os.str();
}

inline std::string sweep_table(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "# block_n" << std::right << std::setw(14) << "total_bits" << std::setw(12)
     << "blocks" << std::setw(14) << "key_bits" << std::setw(14) << "total_s" << '\n';
  for (const auto& r : records)
    os << std::left << std::setw(12) << r.block_n << std::right << std::setw(14) << r.total_bits << std::setw(12)
       << r.blocks << std::setw(14) << r.key_bits << std::setw(14) << std::fixed << std::setprecision(4)
       << r.total_seconds << std::defaultfloat << '\n';
  return os.str();
}

/// Index of the fastest sweep entry.
inline std::size_t fastest(const std::vector<SweepRecord>& records) {
  qrng::detail::require(!records.empty(), "no sweep records");
  return static_cast<std::size_t>(std::min_element(records.begin(), records.end(),
                                                   [](const auto& a, const auto& b) {
                                                     return a.total_seconds < b.total_seconds;
                                                   }) -
                                  records.begin());
}

}  // namespace qrng::bench
