#pragma once

// Stream post-processing: entropy audit, block segmentation, per-block
// extraction and key assembly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrng/bitio.hpp"
#include "qrng/distributions.hpp"
#include "qrng/entropy.hpp"
#include "qrng/error.hpp"
#include "qrng/extractor.hpp"
#include "qrng/rng.hpp"

namespace qrng {

enum class SeedPolicy { fixed_per_run, fresh_per_block };

inline const char* to_string(SeedPolicy p) {
  return p == SeedPolicy::fixed_per_run ? "fixed-seed-per-run" : "fresh-seed-per-block";
}

struct PipelineConfig {
  SamplerConfig sampler{};
  SecurityParams security{};
  std::size_t block_n = std::size_t{1} << 16;
  /// Explicit output length; 0 sizes m from `security`.
  std::size_t out_m = 0;
  Variant variant = Variant::standard;
  SeedPolicy seed_policy = SeedPolicy::fixed_per_run;
  bool audit = true;
  double audit_fraction = 1.0;
  double distance_slack = 1.0;
  unsigned threads = 1;

  /// Checks everything that does not depend on the audit outcome.
  void validate() const {
    sampler.validate();
    detail::require(block_n >= 1, "block length must be >= 1");
    detail::require(audit_fraction > 0.0 && audit_fraction <= 1.0, "audit fraction must lie in (0, 1]");
    detail::require(threads >= 1, "thread count must be >= 1");
  }

  ExtractorParams extractor_params() const {
    ExtractorParams p{block_n, out_m ? out_m : output_length(block_n, security), variant};
    p.validate();
    return p;
  }
};

/// Supplies the hash seed for each block. With fixed_per_run every block
/// shares one seed; otherwise block b gets a seed from derive_seed(master, b).
class SeedSource {
 public:
  static SeedSource fixed(Seed seed) {
    SeedSource s;
    s.fixed_ = std::move(seed);
    return s;
  }

  static SeedSource from_master(std::uint64_t master, SeedPolicy policy) {
    SeedSource s;
    s.master_ = master;
    s.policy_ = policy;
    return s;
  }

  SeedPolicy policy() const noexcept { return fixed_ ? SeedPolicy::fixed_per_run : policy_; }

  Seed seed_for_block(std::size_t index, std::size_t length) const {
    if (fixed_) {
      detail::require(fixed_->size() == length, "fixed seed has length " + std::to_string(fixed_->size()) +
                                                    ", extractor needs " + std::to_string(length));
      return *fixed_;
    }
    Xoshiro256 rng(policy_ == SeedPolicy::fixed_per_run ? master_ : derive_seed(master_, index));
    return Seed::random(rng, length);
  }

 private:
  std::optional<Seed> fixed_;
  std::uint64_t master_ = 0;
  SeedPolicy policy_ = SeedPolicy::fixed_per_run;
};

struct RunReport {
  std::optional<EntropyReport> entropy;
  ExtractorParams extractor{};
  std::size_t blocks_processed = 0;
  std::size_t tail_bits_dropped = 0;
  std::size_t total_output_bits = 0;
  unsigned threads = 1;
  std::vector<std::pair<std::string, double>> stage_seconds;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Min-entropy audit on a uniform subsample of ceil(fraction * count)
/// symbols drawn without replacement. Reads the symbols; never consumes them.
inline EntropyReport audit_min_entropy(const SymbolSequence& symbols, const QuantizedDistribution& ideal,
                                       double fraction, Xoshiro256& rng, double distance_slack = 1.0) {
  detail::require(fraction > 0.0 && fraction <= 1.0, "audit fraction must lie in (0, 1]");
  detail::require(symbols.bit_depth() == ideal.config().bit_depth, "symbol depth differs from the ideal model");
  const std::size_t total = symbols.size();
  const auto wanted = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(total)));
  detail::require(wanted > 0, "audit subsample is empty");

  std::vector<std::uint64_t> counts(ideal.size(), 0);
  std::size_t taken = 0;
  if (wanted >= total) {
    for (auto s : symbols.symbols()) ++counts[s];
    taken = total;
  } else {
    // Selection sampling: symbol i is kept with probability
    // (still needed) / (still available).
    for (std::size_t i = 0; i < total && taken < wanted; ++i) {
      if (rng.below(total - i) < wanted - taken) {
        ++counts[symbols[i]];
        ++taken;
      }
    }
  }
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(counts[i]) / static_cast<double>(taken);
  return entropy_report(ideal, QuantizedDistribution(ideal.config(), std::move(p)), taken, distance_slack);
}

/// Splits `raw` into floor(len / block_n) blocks, hashes each and
/// concatenates the keys in block order. A trailing partial block is
/// dropped and counted. The output is independent of config.threads.
inline std::pair<BitSequence, RunReport> process_stream(const BitSequence& raw, const PipelineConfig& config,
                                                        const SeedSource& seeds) {
  config.validate();
  detail::require(raw.size() >= config.block_n, "raw stream is shorter than one block");
  const auto start = std::chrono::steady_clock::now();
  const ExtractorParams params = config.extractor_params();
  const std::size_t blocks = raw.size() / params.n;

  RunReport report;
  report.extractor = params;
  report.blocks_processed = blocks;
  report.tail_bits_dropped = raw.size() - blocks * params.n;
  report.total_output_bits = blocks * params.m;
  report.threads = static_cast<unsigned>(std::min<std::size_t>(config.threads, blocks));

  BitSequence key;
  if (seeds.policy() == SeedPolicy::fixed_per_run && report.threads == 1) {
    BlockExtractor extractor(seeds.seed_for_block(0, params.seed_length()), params);
    for (std::size_t b = 0; b < blocks; ++b) key.append(extractor.extract(raw, b * params.n));
  } else {
    std::vector<BitSequence> outputs(blocks);
    std::optional<BlockExtractor> shared;
    if (seeds.policy() == SeedPolicy::fixed_per_run)
      shared.emplace(seeds.seed_for_block(0, params.seed_length()), params);
    auto worker = [&](std::size_t first, std::exception_ptr& error) {
      try {
        std::optional<BlockExtractor> local;
        if (shared) local.emplace(shared->clone());
        for (std::size_t b = first; b < blocks; b += report.threads) {
          if (!shared) local.emplace(seeds.seed_for_block(b, params.seed_length()), params);
          outputs[b] = local->extract(raw, b * params.n);
        }
      } catch (...) {
        error = std::current_exception();
      }
    };
    std::vector<std::exception_ptr> errors(report.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < report.threads; ++t) pool.emplace_back(worker, t, std::ref(errors[t]));
    worker(0, errors[0]);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& out : outputs) key.append(out);
  }
  report.stage_seconds.emplace_back("extract", detail::seconds_since(start));
  return {std::move(key), std::move(report)};
}

/// Audit (when enabled), size m from the modified min-entropy, then extract
/// from the symbols' bit expansion.
inline std::pair<BitSequence, RunReport> run_pipeline(const SymbolSequence& symbols, const QuantizedDistribution& ideal,
                                                      PipelineConfig config, const SeedSource& seeds,
                                                      Xoshiro256& audit_rng) {
  config.validate();
  std::optional<EntropyReport> entropy;
  double audit_seconds = 0.0;
  if (config.audit) {
    const auto start = std::chrono::steady_clock::now();
    entropy = audit_min_entropy(symbols, ideal, config.audit_fraction, audit_rng, config.distance_slack);
    audit_seconds = detail::seconds_since(start);
    if (!(entropy->h_min_modified > 0.0))
      throw ValidationError("audit leaves no extractable min-entropy (h_min_modified = 0)");
    config.security.h_min = entropy->h_min_modified;
  }
  config.security.bit_depth = symbols.bit_depth();
  auto [key, report] = process_stream(symbols_to_bits(symbols), config, seeds);
  report.entropy = entropy;
  if (config.audit) report.stage_seconds.insert(report.stage_seconds.begin(), {"audit", audit_seconds});
  return {std::move(key), std::move(report)};
}

inline void to_json(nlohmann::json& j, const RunReport& r) {
  j = nlohmann::json{{"extractor", r.extractor},
                     {"blocks_processed", r.blocks_processed},
                     {"tail_bits_dropped", r.tail_bits_dropped},
                     {"total_output_bits", r.total_output_bits},
                     {"threads", r.threads}};
  j["entropy"] = r.entropy ? nlohmann::json(*r.entropy) : nlohmann::json(nullptr);
  auto& times = j["wall_time_s"] = nlohmann::json::object();
  for (const auto& [stage, s] : r.stage_seconds) times[stage] = s;
}

}  // namespace qrng
