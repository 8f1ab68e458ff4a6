// qrngpp: command-line front end for the post-processing toolkit.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrng/qrng.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kPaperDemoSeed = 20190601;
constexpr std::size_t kPaperDemoSamples = 10'000'000;

struct Globals {
  std::optional<std::uint64_t> rng_seed;
  bool quiet = false;
  bool json_out = false;
};

struct SamplerFlags {
  unsigned bit_depth = 5;
  double lo = -5.0;
  double hi = 5.0;

  void add(CLI::App* app) {
    app->add_option("--bit-depth", bit_depth, "ADC resolution N (bits per sample)")->capture_default_str();
    app->add_option("--lo", lo, "lower edge of the ADC range (V)")->capture_default_str();
    app->add_option("--hi", hi, "upper edge of the ADC range (V)")->capture_default_str();
  }

  qrng::SamplerConfig config() const {
    qrng::SamplerConfig c{bit_depth, lo, hi};
    c.validate();
    return c;
  }
};

struct ModelFlags {
  std::string mode = "honest";
  double sigma_q = 1.0;
  double sigma_c = 0.0;
  qrng::AttackParams attack{};

  void add(CLI::App* app) {
    app->add_option("--mode", mode, "detector model")->check(CLI::IsMember({"honest", "attacked"}))->capture_default_str();
    app->add_option("--sigma-q", sigma_q, "quantum noise standard deviation (V)")->capture_default_str();
    app->add_option("--sigma-c", sigma_c, "classical noise standard deviation (V)")->capture_default_str();
    app->add_option("--alpha0", attack.alpha_0, "honest detector gain (V per unit intensity)")->capture_default_str();
    app->add_option("--alpha-e", attack.alpha_e, "attacked detector gain (V per unit intensity)")->capture_default_str();
    app->add_option("--beta-e", attack.beta_e, "attacked saturation factor (dimensionless)")->capture_default_str();
    app->add_option("--i-max", attack.i_max, "attacked saturation intensity (intensity units)")->capture_default_str();
  }

  qrng::SourceModel model(std::uint64_t seed) const {
    qrng::SourceModel m{sigma_q, sigma_c, mode == "attacked" ? qrng::DetectorMode::attacked : qrng::DetectorMode::honest,
                        attack, seed};
    m.validate();
    return m;
  }
};

struct IdealFlags {
  double mu = 0.0;
  double sigma = 1.0;

  void add(CLI::App* app) {
    app->add_option("--ideal-mu", mu, "mean of the ideal Gaussian model (V)")->capture_default_str();
    app->add_option("--ideal-sigma", sigma, "standard deviation of the ideal Gaussian model (V)")->capture_default_str();
  }
};

struct ExtractFlags {
  std::size_t block_n = std::size_t{1} << 16;
  std::size_t out_m = 0;
  double h_min = 0.0;
  double log2_epsilon = -50.0;
  std::string variant = "standard";
  std::string seed_policy = "fixed";
  unsigned threads = 1;

  void add(CLI::App* app, bool with_h_min) {
    app->add_option("--block-n", block_n, "extractor input block length n (bits)")->capture_default_str();
    app->add_option("--out-m", out_m, "output bits per block m; 0 derives m from the entropy (bits)")->capture_default_str();
    if (with_h_min) app->add_option("--h-min", h_min, "min-entropy per sample used to size m (bits per sample)");
    app->add_option("--log2-epsilon", log2_epsilon, "security parameter as log2(epsilon), e.g. -50")->capture_default_str();
    app->add_option("--variant", variant, "extractor construction")
        ->check(CLI::IsMember({"standard", "modified"}))
        ->capture_default_str();
    app->add_option("--seed-policy", seed_policy, "hash seed per run or per block")
        ->check(CLI::IsMember({"fixed", "fresh"}))
        ->capture_default_str();
    app->add_option("--threads", threads, "worker threads for block extraction (count)")->capture_default_str();
  }

  qrng::PipelineConfig pipeline(unsigned bit_depth) const {
    qrng::PipelineConfig c;
    c.block_n = block_n;
    c.out_m = out_m;
    c.security = {bit_depth, h_min, std::exp2(log2_epsilon)};
    c.variant = qrng::parse_variant(variant);
    c.seed_policy = seed_policy == "fixed" ? qrng::SeedPolicy::fixed_per_run : qrng::SeedPolicy::fresh_per_block;
    c.threads = threads;
    c.validate();
    return c;
  }
};

std::vector<std::size_t> powers_of_two(unsigned lo, unsigned hi) {
  std::vector<std::size_t> out;
  for (unsigned s = lo; s <= hi; ++s) out.push_back(std::size_t{1} << s);
  return out;
}

class Cli {
 public:
  explicit Cli(Globals& g) : g_(g) {}

  std::uint64_t seed() {
    if (!resolved_) {
      if (g_.rng_seed) {
        resolved_ = *g_.rng_seed;
      } else {
        std::random_device rd;
        resolved_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        std::cerr << "rng-seed: " << *resolved_ << '\n';
      }
    }
    return *resolved_;
  }

  /// Text to stdout unless --quiet; --json-out replaces it with `report`.
  void emit(const std::string& text, const json& report) const {
    if (g_.json_out)
      std::cout << report.dump(2) << '\n';
    else if (!g_.quiet)
      std::cout << text;
  }

 private:
  Globals& g_;
  std::optional<std::uint64_t> resolved_;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string entropy_text(const qrng::EntropyReport& r) {
  std::ostringstream os;
  os << "samples            " << r.sample_count << '\n'
     << "h_min ideal        " << fmt(r.h_min_ideal) << " bits\n"
     << "h_min empirical    " << fmt(r.h_min_empirical) << " bits\n"
     << "mutual info bound  " << fmt(r.mutual_info_bound) << " bits\n"
     << "stat distance      " << fmt(r.stat_distance, 6) << '\n'
     << "delta_h_m          " << fmt(r.delta_h_m) << " bits\n"
     << "h_min modified     " << fmt(r.h_min_modified) << " bits\n";
  return os.str();
}

std::string run_text(const qrng::RunReport& r) {
  std::ostringstream os;
  os << "blocks             " << r.blocks_processed << " x n=" << r.extractor.n << " -> m=" << r.extractor.m << " ("
     << qrng::to_string(r.extractor.variant) << ")\n"
     << "tail bits dropped  " << r.tail_bits_dropped << '\n'
     << "output bits        " << r.total_output_bits << '\n';
  for (const auto& [stage, s] : r.stage_seconds) os << "time " << std::left << std::setw(14) << stage << fmt(s, 3) << " s\n";
  return os.str();
}

qrng::SeedSource seed_source(Cli& cli, const qrng::PipelineConfig& config, const std::string& seed_file,
                             const std::string& seed_out) {
  const auto params = config.extractor_params();
  if (!seed_file.empty()) {
    qrng::detail::require(config.seed_policy == qrng::SeedPolicy::fixed_per_run,
                          "--seed-file needs --seed-policy fixed");
    auto bits = qrng::load_bits(seed_file, params.seed_length());
    qrng::detail::require(bits.size() == params.seed_length(),
                          "seed file holds " + std::to_string(bits.size()) + " bits, extractor needs " +
                              std::to_string(params.seed_length()));
    return qrng::SeedSource::fixed(qrng::Seed(std::move(bits)));
  }
  auto src = qrng::SeedSource::from_master(qrng::derive_seed(cli.seed(), 2), config.seed_policy);
  if (!seed_out.empty()) {
    qrng::detail::require(config.seed_policy == qrng::SeedPolicy::fixed_per_run, "--seed-out needs --seed-policy fixed");
    qrng::store_bits(src.seed_for_block(0, params.seed_length()).bits(), seed_out);
  }
  return src;
}

// ---- subcommands -----------------------------------------------------------

struct SimulateCmd {
  SamplerFlags sampler;
  ModelFlags model;
  std::size_t count = 1'000'000;
  std::string out;
  std::string bits_out;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("simulate", "simulate detector voltages and write N-bit ADC symbols");
    sampler.add(sub);
    model.add(sub);
    sub->add_option("--count", count, "number of samples")->capture_default_str();
    sub->add_option("-o,--out", out, "symbol file (one octet per symbol)")->required();
    sub->add_option("--bits-out", bits_out, "also write the LSB-first bit expansion here");
  }

  void run(Cli& cli) const {
    const auto config = sampler.config();
    const auto m = model.model(qrng::derive_seed(cli.seed(), 0));
    qrng::detail::require(count > 0, "--count must be > 0");
    const auto sim = qrng::simulate(m, config, count);
    qrng::store_symbols(sim.symbols, out);
    if (!bits_out.empty()) qrng::store_bits(qrng::symbols_to_bits(sim.symbols), bits_out);
    json report{{"model", m}, {"sampler", config}, {"count", count}, {"voltage_mean", sim.voltage_mean},
                {"voltage_variance", sim.voltage_variance}, {"out", out}};
    cli.emit("wrote " + std::to_string(count) + " symbols to " + out + "\nvoltage mean " + fmt(sim.voltage_mean, 5) +
                 ", variance " + fmt(sim.voltage_variance, 5) + '\n',
             report);
  }
};

struct AnalyzeCmd {
  SamplerFlags sampler;
  IdealFlags ideal;
  std::string input;
  double fraction = 1.0;
  double slack = 1.0;
  std::string out;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("analyze-entropy", "audit a symbol file against the ideal Gaussian model");
    sub->add_option("symbols", input, "symbol file")->required();
    sampler.add(sub);
    ideal.add(sub);
    sub->add_option("--fraction", fraction, "share of symbols audited, in (0, 1]")->capture_default_str();
    sub->add_option("--distance-slack", slack, "multiplier (>= 1) applied to the statistical distance")
        ->capture_default_str();
    sub->add_option("--report", out, "also write the JSON report here");
  }

  void run(Cli& cli) const {
    const auto config = sampler.config();
    const auto model = qrng::ideal_gaussian(ideal.mu, ideal.sigma, config);
    qrng::detail::require(fraction > 0.0 && fraction <= 1.0, "--fraction must lie in (0, 1]");
    qrng::detail::require(slack >= 1.0, "--distance-slack must be >= 1");
    const auto symbols = qrng::load_symbols(input, config.bit_depth);
    qrng::Xoshiro256 rng(qrng::derive_seed(cli.seed(), 1));
    const auto report = qrng::audit_min_entropy(symbols, model, fraction, rng, slack);
    const json j = report;
    if (!out.empty()) std::ofstream(out) << j.dump(2) << '\n';
    // The report is JSON by contract; text mode still prints it.
    cli.emit(j.dump(2) + '\n', j);
  }
};

struct ExtractCmd {
  ExtractFlags flags;
  unsigned bit_depth = 5;
  std::string input;
  std::string out;
  std::string seed_file;
  std::string seed_out;
  std::size_t max_bits = qrng::kAllBits;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("extract", "hash a raw bitstream into a key with Toeplitz extraction");
    sub->add_option("input", input, "raw bitstream file (LSB-first)")->required();
    flags.add(sub, true);
    sub->add_option("--bit-depth", bit_depth, "ADC resolution N the entropy refers to (bits per sample)")
        ->capture_default_str();
    sub->add_option("--max-bits", max_bits, "read at most this many raw bits");
    sub->add_option("-o,--out", out, "key file (LSB-first)")->required();
    sub->add_option("--seed-file", seed_file, "hash seed bits (LSB-first); default derives from --rng-seed");
    sub->add_option("--seed-out", seed_out, "write the derived hash seed here");
  }

  void run(Cli& cli) const {
    const auto config = flags.pipeline(bit_depth);
    // Sizes and checks n, m before any file is touched.
    (void)config.extractor_params();
    const auto seeds = seed_source(cli, config, seed_file, seed_out);
    const auto raw = qrng::load_bits(input, max_bits);
    auto [key, report] = qrng::process_stream(raw, config, seeds);
    qrng::store_bits(key, out);
    json j = report;
    j["seed_policy"] = qrng::to_string(config.seed_policy);
    j["out"] = out;
    cli.emit(run_text(report), j);
  }
};

struct TestCmd {
  std::string input;
  std::size_t max_bits = qrng::kAllBits;
  qrng::stattests::BatteryParams params;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("test", "run the eight-test statistical battery on a bitstream");
    sub->add_option("input", input, "bitstream file (LSB-first)")->required();
    sub->add_option("--max-bits", max_bits, "test at most this many bits");
    sub->add_option("--block-m", params.block_frequency_m, "block-frequency block length (bits)")->capture_default_str();
    sub->add_option("--apen-m", params.approximate_entropy_m, "approximate-entropy pattern length (bits)")
        ->capture_default_str();
    sub->add_option("--serial-m", params.serial_m, "serial-test pattern length (bits)")->capture_default_str();
    sub->add_option("--min-bits", params.min_bits, "refuse inputs shorter than this (bits)")->capture_default_str();
    sub->add_option("--pass-lo", params.band.lower, "lower edge of the pass band (p-value)")->capture_default_str();
    sub->add_option("--pass-hi", params.band.upper, "upper edge of the pass band (p-value)")->capture_default_str();
  }

  void run(Cli& cli) const {
    qrng::detail::require(params.band.lower >= 0.0 && params.band.lower <= params.band.upper && params.band.upper <= 1.0,
                          "pass band must satisfy 0 <= lo <= hi <= 1");
    const auto bits = qrng::load_bits(input, max_bits);
    const auto report = qrng::stattests::run_battery(bits, params);
    cli.emit(qrng::stattests::format_table(report), json(report));
  }
};

struct BenchCmd {
  CLI::App* compare = nullptr;
  CLI::App* sweep = nullptr;
  CLI::App* pow2 = nullptr;
  unsigned lo_exp = 10, hi_exp = 15;
  unsigned sweep_lo = 12, sweep_hi = 22, total_exp = 30;
  std::vector<unsigned> pow2_exps{10, 12, 14, 16, 18, 20};
  qrng::bench::CompareOptions opt;
  double h_min = 2.5;
  unsigned threads = 1;
  std::string csv;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("bench", "timing harness");
    sub->require_subcommand(1);
    compare = sub->add_subcommand("compare", "naive vs transform extraction at n = 2^lo .. 2^hi");
    compare->add_option("--lo", lo_exp, "smallest n as a power of two (exponent)")->capture_default_str();
    compare->add_option("--hi", hi_exp, "largest n as a power of two (exponent)")->capture_default_str();
    compare->add_option("--gamma", opt.gamma, "extraction ratio m/n")->capture_default_str();
    compare->add_option("--trials", opt.trials, "timed trials per method (count, >= 3)")->capture_default_str();
    compare->add_option("--naive-budget", opt.naive_budget_seconds, "give up on a naive run after this long (s)")
        ->capture_default_str();
    compare->add_flag("--modified", opt.include_modified, "also time the reduced-seed construction");

    sweep = sub->add_subcommand("sweep", "block-length sweep over a fixed amount of raw data");
    sweep->add_option("--lo", sweep_lo, "smallest block length as a power of two (exponent)")->capture_default_str();
    sweep->add_option("--hi", sweep_hi, "largest block length as a power of two (exponent)")->capture_default_str();
    sweep->add_option("--total", total_exp, "raw data size as a power of two (exponent, bits)")->capture_default_str();
    sweep->add_option("--h-min", h_min, "min-entropy used to size m (bits per 5-bit sample)")->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads; > 1 is reported as a parallel sweep (count)")
        ->capture_default_str();

    pow2 = sub->add_subcommand("pow2", "transform cost at L = 2^s vs 2^s + 1");
    pow2->add_option("--exponents", pow2_exps, "values of s")->capture_default_str();
    pow2->add_option("--trials", opt.trials, "timed trials per length (count, >= 3)")->capture_default_str();

    for (auto* s : {compare, sweep, pow2}) s->add_option("--csv", csv, "also write the records as CSV here");
  }

  void write_csv(const std::string& text) const {
    if (csv.empty()) return;
    std::ofstream f(csv);
    if (!f) throw qrng::IoError("cannot open for writing: " + csv);
    f << text;
  }

  void run(Cli& cli) const {
    if (compare->parsed()) {
      qrng::detail::require(lo_exp >= 1 && lo_exp <= hi_exp && hi_exp <= 26, "--lo/--hi must satisfy 1 <= lo <= hi <= 26");
      auto o = opt;
      o.rng_seed = qrng::derive_seed(cli.seed(), 3);
      const auto recs = qrng::bench::compare_methods(powers_of_two(lo_exp, hi_exp), o);
      write_csv(qrng::bench::timing_csv(recs));
      json j = json::array();
      for (const auto& r : recs)
        j.push_back({{"method", r.method}, {"n", r.n}, {"m", r.m}, {"trials", r.trials},
                     {"median_s", r.median_seconds}, {"min_s", r.min_seconds}, {"timed_out", r.timed_out}});
      cli.emit(qrng::bench::timing_table(recs), j);
    } else if (sweep->parsed()) {
      qrng::detail::require(sweep_lo >= 1 && sweep_lo <= sweep_hi && sweep_hi <= total_exp && total_exp <= 34,
                            "sweep exponents must satisfy 1 <= lo <= hi <= total <= 34");
      qrng::PipelineConfig config;
      config.security = {5, h_min, 0x1.0p-50};
      config.threads = threads;
      config.validate();
      const auto recs = qrng::bench::sweep_block_lengths(std::size_t{1} << total_exp, powers_of_two(sweep_lo, sweep_hi),
                                                         config, qrng::derive_seed(cli.seed(), 4));
      write_csv(qrng::bench::sweep_csv(recs));
      json j{{"parallel", threads > 1}, {"threads", threads}, {"records", json::array()}};
      for (const auto& r : recs)
        j["records"].push_back({{"block_n", r.block_n}, {"total_bits", r.total_bits}, {"total_s", r.total_seconds},
                                {"blocks", r.blocks}, {"key_bits", r.key_bits}});
      j["fastest_block_n"] = recs[qrng::bench::fastest(recs)].block_n;
      std::string text = threads > 1 ? "# parallel sweep, " + std::to_string(threads) + " threads\n" : "";
      text += qrng::bench::sweep_table(recs);
      text += "# fastest block_n: " + std::to_string(recs[qrng::bench::fastest(recs)].block_n) + '\n';
      cli.emit(text, j);
    } else {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (unsigned s : pow2_exps) {
        qrng::detail::require(s >= 1 && s <= 26, "pow2 exponents must lie in 1..26");
        pairs.emplace_back(std::size_t{1} << s, (std::size_t{1} << s) + 1);
      }
      const auto recs = qrng::bench::power_of_two_probe(pairs, opt.trials, qrng::derive_seed(cli.seed(), 5));
      write_csv(qrng::bench::timing_csv(recs));
      json j = json::array();
      std::ostringstream text;
      text << qrng::bench::timing_table(recs);
      for (std::size_t i = 0; i + 1 < recs.size(); i += 2) {
        const double ratio = recs[i + 1].median_seconds / recs[i].median_seconds;
        text << "# L=" << recs[i].n << ": (L+1)/L time ratio " << fmt(ratio, 2) << '\n';
        j.push_back({{"pow2", recs[i].n}, {"pow2_median_s", recs[i].median_seconds}, {"other", recs[i + 1].n},
                     {"other_median_s", recs[i + 1].median_seconds}, {"ratio", ratio}});
      }
      cli.emit(text.str(), j);
    }
  }
};

struct RunCmd {
  bool paper_demo = false;
  std::string symbols_in;
  SamplerFlags sampler;
  ModelFlags model;
  IdealFlags ideal;
  ExtractFlags flags;
  std::size_t count = 1'000'000;
  double fraction = 1.0;
  std::string key_out;
  qrng::stattests::BatteryParams battery;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("run", "simulate or load symbols, audit, extract and test in one pass");
    sub->add_flag("--paper-demo", paper_demo,
                  "attacked 5-bit source, 10^7 samples, modified-entropy sizing, full battery, headline numbers");
    sub->add_option("--symbols", symbols_in, "use this symbol file instead of simulating");
    sampler.add(sub);
    model.add(sub);
    ideal.add(sub);
    flags.add(sub, false);
    sub->add_option("--count", count, "simulated samples (count)")->capture_default_str();
    sub->add_option("--audit-fraction", fraction, "share of symbols audited, in (0, 1]")->capture_default_str();
    sub->add_option("-o,--out", key_out, "key file (LSB-first)");
  }

  void run(Cli& cli, bool seed_given) const {
    auto sampler_cfg = sampler.config();
    auto mdl_flags = model;
    auto ex = flags;
    std::size_t n_samples = count;
    std::uint64_t master = 0;
    if (paper_demo) {
      sampler_cfg = qrng::SamplerConfig{};
      mdl_flags = ModelFlags{};
      mdl_flags.mode = "attacked";
      ex.variant = "standard";
      ex.seed_policy = "fixed";
      ex.out_m = 0;
      n_samples = kPaperDemoSamples;
      master = seed_given ? cli.seed() : kPaperDemoSeed;
    } else {
      master = cli.seed();
    }
    auto config = ex.pipeline(sampler_cfg.bit_depth);
    config.sampler = sampler_cfg;
    config.audit = true;
    config.audit_fraction = fraction;
    config.validate();
    const auto ideal_model = qrng::ideal_gaussian(ideal.mu, ideal.sigma, sampler_cfg);

    qrng::SymbolSequence symbols;
    std::optional<qrng::Simulation> sim;
    if (!symbols_in.empty() && !paper_demo) {
      symbols = qrng::load_symbols(symbols_in, sampler_cfg.bit_depth);
    } else {
      qrng::detail::require(n_samples > 0, "--count must be > 0");
      sim = qrng::simulate(mdl_flags.model(qrng::derive_seed(master, 0)), sampler_cfg, n_samples);
      symbols = sim->symbols;
    }
    qrng::Xoshiro256 audit_rng(qrng::derive_seed(master, 1));
    const auto seeds = qrng::SeedSource::from_master(qrng::derive_seed(master, 2), config.seed_policy);
    auto [key, report] = qrng::run_pipeline(symbols, ideal_model, config, seeds, audit_rng);
    if (!key_out.empty()) qrng::store_bits(key, key_out);
    const auto tests = qrng::stattests::run_battery(key, battery);

    const auto& e = *report.entropy;
    json j{{"rng_seed", master}, {"symbols", symbols.size()}, {"run", report}, {"battery", tests}};
    if (sim) j["voltage"] = {{"mean", sim->voltage_mean}, {"variance", sim->voltage_variance}};
    std::ostringstream text;
    if (paper_demo) {
      const double ideal_h = qrng::min_entropy(ideal_model);
      struct Row {
        const char* name;
        double value;
        double reference;
      };
      const Row rows[] = {{"h_min ideal (honest)", ideal_h, 2.99},
                          {"h_min attacked", e.h_min_empirical, 2.94},
                          {"mutual info bound", e.mutual_info_bound, 0.05},
                          {"delta_h_m", e.delta_h_m, 0.10},
                          {"h_min modified", e.h_min_modified, 2.89}};
      json headline = json::array();
      text << "demo: attacked source, " << symbols.size() << " samples, rng-seed " << master << "\n\n";
      text << std::left << std::setw(24) << "quantity" << std::right << std::setw(10) << "measured" << std::setw(10)
           << "reference" << '\n';
      for (const auto& r : rows) {
        text << std::left << std::setw(24) << r.name << std::right << std::setw(10) << fmt(r.value, 3) << std::setw(10)
             << fmt(r.reference, 2) << '\n';
        headline.push_back({{"quantity", r.name}, {"measured", r.value}, {"reference", r.reference}});
      }
      text << std::left << std::setw(24) << "stat distance" << std::right << std::setw(10) << fmt(e.stat_distance, 4)
           << '\n';
      text << "no-leakage check: h_min modified <= h_min attacked: "
           << (e.h_min_modified <= e.h_min_empirical ? "yes" : "NO") << "\n\n";
      j["headline"] = headline;
    } else {
      text << entropy_text(e) << '\n';
    }
    text << run_text(report) << '\n' << qrng::stattests::format_table(tests);
    cli.emit(text.str(), j);
  }
};

int error_exit(const Globals& g, const char* kind, const std::string& message, int code) {
  if (g.json_out)
    std::cerr << json{{"error", {{"type", kind}, {"message", message}}}, {"exit_code", code}}.dump() << '\n';
  else
    std::cerr << "error: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"qrngpp: randomness post-processing for Gaussian-noise QRNGs"};
  app.require_subcommand(1);
  app.add_option("--rng-seed", g.rng_seed, "64-bit master seed; drawn from the system and printed when omitted");
  app.add_flag("-q,--quiet", g.quiet, "suppress text output");
  app.add_flag("--json-out", g.json_out, "print reports (and errors, on stderr) as JSON");
  app.set_help_all_flag("--help-all", "help for every subcommand");

  SimulateCmd simulate;
  AnalyzeCmd analyze;
  ExtractCmd extract;
  TestCmd test;
  BenchCmd bench;
  RunCmd run;
  simulate.add(app);
  analyze.add(app);
  extract.add(app);
  test.add(app);
  bench.add(app);
  run.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit(g, "usage", e.what(), 1);
  }

  Cli cli(g);
  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "simulate") simulate.run(cli);
    else if (name == "analyze-entropy") analyze.run(cli);
    else if (name == "extract") extract.run(cli);
    else if (name == "test") test.run(cli);
    else if (name == "bench") bench.run(cli);
    else run.run(cli, g.rng_seed.has_value());
  } catch (const qrng::ValidationError& e) {
    return error_exit(g, "validation", e.what(), 1);
  } catch (const qrng::IoError& e) {
    return error_exit(g, "io", e.what(), 1);
  } catch (const std::exception& e) {
    return error_exit(g, "runtime", e.what(), 2);
  }
  return 0;
}
