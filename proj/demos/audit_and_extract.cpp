// Simulates an attacked 5-bit source, audits it against the ideal Gaussian
// and hashes the stream with the audited entropy.

#include <iostream>

#include "qrng/qrng.hpp"

int main() {
  const qrng::SamplerConfig adc{};  // N = 5 over [-5, 5] V
  qrng::SourceModel source;
  source.mode = qrng::DetectorMode::attacked;
  source.rng_seed = 1;
  const auto symbols = qrng::generate_symbols(source, adc, 1'000'000);

  qrng::PipelineConfig config;
  config.block_n = 1 << 16;
  qrng::Xoshiro256 audit_rng(2);
  const auto seeds = qrng::SeedSource::from_master(3, qrng::SeedPolicy::fixed_per_run);
  auto [key, report] = qrng::run_pipeline(symbols, qrng::ideal_gaussian(0.0, 1.0, adc), config, seeds, audit_rng);

  const auto& e = *report.entropy;
  std::cout << "h_min ideal     " << e.h_min_ideal << '\n'
            << "h_min observed  " << e.h_min_empirical << '\n'
            << "delta_h_m       " << e.delta_h_m << '\n'
            << "h_min modified  " << e.h_min_modified << '\n'
            << report.blocks_processed << " blocks of " << report.extractor.n << " bits -> " << key.size()
            << " key bits\n";
}
