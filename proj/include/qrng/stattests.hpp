#pragma once

// Eight tests from the NIST SP 800-22 statistical test suite, following
// the suite's reference formulas:
//
//   frequency, block-frequency, runs, longest-run-of-ones,
//   cumulative-sums (forward), discrete-Fourier spectral,
//   approximate-entropy, serial (first p-value).
//
// A test passes when lower <= p <= upper. The default band is the
// two-sided [0.01, 0.99]; set upper = 1 for the suite's one-sided rule.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "qrng/bitio.hpp"
#include "qrng/distributions.hpp"
#include "qrng/error.hpp"
#include "qrng/fft.hpp"

namespace qrng::stattests {

struct PassBand {
  double lower = 0.01;
  double upper = 0.99;

  bool accepts(double p) const { return p >= lower && p <= upper; }
};

struct TestResult {
  std::string name;
  double p_value = 0.0;
  bool pass = false;
};

struct TestReport {
  std::vector<TestResult> results;
  std::size_t input_bits = 0;
  bool all_pass = false;
};

struct BatteryParams {
  std::size_t block_frequency_m = 128;
  unsigned approximate_entropy_m = 10;
  unsigned serial_m = 16;
  std::size_t min_bits = 10000;
  PassBand band{};
};

namespace detail {

inline double igamc(double a, double x) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(a, x);
}

inline double clamp_p(double p) { return std::clamp(std::isfinite(p) ? p : 0.0, 0.0, 1.0); }

inline TestResult make_result(std::string name, double p, const PassBand& band) {
  p = clamp_p(p);
  return {std::move(name), p, band.accepts(p)};
}

/// Frequencies of every overlapping `m`-bit pattern, wrapping the
/// first m - 1 bits around the end. Pattern value reads the oldest bit as
/// the most significant.
inline std::vector<std::uint64_t> pattern_counts(const BitSequence& bits, unsigned m) {
  std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
  if (m == 0) {
    counts[0] = bits.size();
    return counts;
  }
  const std::size_t n = bits.size();
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  std::uint64_t window = 0;
  for (unsigned k = 0; k + 1 < m; ++k) window = (window << 1) | bits[k % n];
  for (std::size_t i = 0; i < n; ++i) {
    window = ((window << 1) | bits[(i + m - 1) % n]) & mask;
    ++counts[window];
  }
  return counts;
}

}  // namespace detail

inline double monobit_p_value(std::size_t ones, std::size_t n) {
  const double s = std::abs(2.0 * static_cast<double>(ones) - static_cast<double>(n));
  return std::erfc(s / std::sqrt(2.0 * static_cast<double>(n)));
}

inline TestResult frequency_monobit(const BitSequence& bits, const PassBand& band = {}, std::size_t min_bits = 100) {
  qrng::detail::require(bits.size() >= std::max<std::size_t>(min_bits, 1), "frequency test needs at least 100 bits");
  return detail::make_result("frequency", monobit_p_value(bits.count_ones(), bits.size()), band);
}

inline TestResult block_frequency(const BitSequence& bits, std::size_t block = 128, const PassBand& band = {}) {
  qrng::detail::require(block >= 1 && bits.size() >= block, "block-frequency test needs at least one block");
  const std::size_t blocks = bits.size() / block;
  double chi2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < block; ++j) ones += bits[b * block + j];
    const double pi = static_cast<double>(ones) / static_cast<double>(block) - 0.5;
    chi2 += pi * pi;
  }
  chi2 *= 4.0 * static_cast<double>(block);
  return detail::make_result("block-frequency", detail::igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0), band);
}

inline TestResult runs(const BitSequence& bits, const PassBand& band = {}) {
  const std::size_t n = bits.size();
  qrng::detail::require(n >= 2, "runs test needs at least 2 bits");
  const double pi = static_cast<double>(bits.count_ones()) / static_cast<double>(n);
  const double nd = static_cast<double>(n);
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(nd)) return detail::make_result("runs", 0.0, band);
  std::size_t v = 1;
  for (std::size_t i = 1; i < n; ++i) v += bits[i] != bits[i - 1];
  const double num = std::abs(static_cast<double>(v) - 2.0 * nd * pi * (1.0 - pi));
  const double den = 2.0 * std::sqrt(2.0 * nd) * pi * (1.0 - pi);
  return detail::make_result("runs", std::erfc(num / den), band);
}

inline TestResult longest_run_of_ones(const BitSequence& bits, const PassBand& band = {}) {
  const std::size_t n = bits.size();
  qrng::detail::require(n >= 128, "longest-run test needs at least 128 bits");
  std::size_t block;
  unsigned first;  // longest-run value of the lowest class
  std::vector<double> pi;
  if (n < 6272) {
    block = 8, first = 1, pi = {0.2148, 0.3672, 0.2305, 0.1875};
  } else if (n < 750000) {
    block = 128, first = 4, pi = {0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124};
  } else {
    block = 10000, first = 10, pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
  }
  const std::size_t blocks = n / block;
  const std::size_t classes = pi.size();
  std::vector<double> v(classes, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    unsigned run = 0, longest = 0;
    for (std::size_t j = 0; j < block; ++j) {
      run = bits[b * block + j] ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    const std::size_t cls = longest <= first ? 0 : std::min<std::size_t>(longest - first, classes - 1);
    v[cls] += 1.0;
  }
  double chi2 = 0.0;
  const auto nb = static_cast<double>(blocks);
  for (std::size_t i = 0; i < classes; ++i) chi2 += (v[i] - nb * pi[i]) * (v[i] - nb * pi[i]) / (nb * pi[i]);
  return detail::make_result("longest-run", detail::igamc(static_cast<double>(classes - 1) / 2.0, chi2 / 2.0), band);
}

/// Forward cumulative sums.
inline TestResult cumulative_sums(const BitSequence& bits, const PassBand& band = {}) {
  const std::size_t n = bits.size();
  qrng::detail::require(n >= 100, "cumulative-sums test needs at least 100 bits");
  long long s = 0, z = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s += bits[i] ? 1 : -1;
    z = std::max(z, std::llabs(s));
  }
  const double nd = static_cast<double>(n), zd = static_cast<double>(z), sq = std::sqrt(nd);
  double sum1 = 0.0, sum2 = 0.0;
  for (auto k = static_cast<long long>((-nd / zd + 1.0) / 4.0); k <= static_cast<long long>((nd / zd - 1.0) / 4.0); ++k)
    sum1 += standard_normal_cdf((4.0 * k + 1.0) * zd / sq) - standard_normal_cdf((4.0 * k - 1.0) * zd / sq);
  for (auto k = static_cast<long long>((-nd / zd - 3.0) / 4.0); k <= static_cast<long long>((nd / zd - 1.0) / 4.0); ++k)
    sum2 += standard_normal_cdf((4.0 * k + 3.0) * zd / sq) - standard_normal_cdf((4.0 * k + 1.0) * zd / sq);
  return detail::make_result("cumulative-sums", 1.0 - sum1 + sum2, band);
}

/// Spectral test: fraction of DFT peaks under the 95% threshold.
inline TestResult discrete_fourier(const BitSequence& bits, const PassBand& band = {}) {
  const std::size_t n = bits.size();
  qrng::detail::require(n >= 1000, "spectral test needs at least 1000 bits");
  fft::RealTransform t(n);
  auto x = t.real();
  for (std::size_t i = 0; i < n; ++i) x[i] = bits[i] ? 1.0 : -1.0;
  t.forward();
  const auto spec = t.spectrum();
  const double nd = static_cast<double>(n);
  const double threshold = std::sqrt(std::log(1.0 / 0.05) * nd);
  std::size_t below = 0;
  for (std::size_t k = 0; k < n / 2; ++k) below += std::abs(spec[k]) < threshold;
  const double expected = 0.95 * nd / 2.0;
  const double d = (static_cast<double>(below) - expected) / std::sqrt(nd * 0.95 * 0.05 / 4.0);
  return detail::make_result("spectral-dft", std::erfc(std::abs(d) / std::sqrt(2.0)), band);
}

inline TestResult approximate_entropy(const BitSequence& bits, unsigned m = 10, const PassBand& band = {}) {
  const std::size_t n = bits.size();
  qrng::detail::require(m >= 1 && m <= 24 && n > (std::size_t{1} << (m + 1)), "approximate-entropy: block length too large");
  const double nd = static_cast<double>(n);
  auto phi = [&](unsigned len) {
    double sum = 0.0;
    for (auto c : detail::pattern_counts(bits, len))
      if (c) {
        const double p = static_cast<double>(c) / nd;
        sum += p * std::log(p);
      }
    return sum;
  };
  const double apen = phi(m) - phi(m + 1);
  const double chi2 = 2.0 * nd * (std::log(2.0) - apen);
  return detail::make_result("approximate-entropy", detail::igamc(std::ldexp(1.0, static_cast<int>(m) - 1), chi2 / 2.0),
                             band);
}

/// Serial test; reports the first p-value (from del psi^2_m).
inline TestResult serial(const BitSequence& bits, unsigned m = 16, const PassBand& band = {}) {
  const std::size_t n = bits.size();
  qrng::detail::require(m >= 2 && m <= 24 && n >= (std::size_t{1} << m), "serial: block length too large");
  const double nd = static_cast<double>(n);
  auto psi2 = [&](unsigned len) {
    if (len == 0) return 0.0;
    double sum = 0.0;
    for (auto c : detail::pattern_counts(bits, len)) sum += static_cast<double>(c) * static_cast<double>(c);
    return std::ldexp(sum, static_cast<int>(len)) / nd - nd;
  };
  const double del = psi2(m) - psi2(m - 1);
  return detail::make_result("serial", detail::igamc(std::ldexp(1.0, static_cast<int>(m) - 2), del / 2.0), band);
}

inline TestReport run_battery(const BitSequence& bits, const BatteryParams& params = {}) {
  const std::size_t floor_bits = std::max<std::size_t>(params.min_bits, 1000);
  qrng::detail::require(bits.size() >= floor_bits, "battery needs at least " + std::to_string(floor_bits) + " bits");
  const auto& band = params.band;
  // Pattern lengths shrink to the usual NIST limits for short inputs:
  // m < floor(log2 n) - 5 (approximate entropy), m < floor(log2 n) - 2 (serial).
  const auto log2n = static_cast<unsigned>(std::bit_width(bits.size()) - 1);
  const unsigned apen_m = std::min(params.approximate_entropy_m, log2n - 6);
  const unsigned serial_m = std::min(params.serial_m, log2n - 3);
  TestReport report;
  report.input_bits = bits.size();
  report.results = {frequency_monobit(bits, band),
                    block_frequency(bits, params.block_frequency_m, band),
                    runs(bits, band),
                    longest_run_of_ones(bits, band),
                    cumulative_sums(bits, band),
                    discrete_fourier(bits, band),
                    approximate_entropy(bits, apen_m, band),
                    serial(bits, serial_m, band)};
  report.all_pass = std::all_of(report.results.begin(), report.results.end(), [](const auto& r) { return r.pass; });
  return report;
}

/// Fixed-width table: test name, p-value, verdict.
inline std::string format_table(const TestReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "test" << std::right << std::setw(12) << "p-value" << "  result\n";
  os << std::string(42, '-') << '\n';
  for (const auto& r : report.results)
    os << std::left << std::setw(22) << r.name << std::right << std::setw(12) << std::fixed << std::setprecision(6)
       << r.p_value << "  " << (r.pass ? "PASS" : "FAIL") << '\n';
  os << std::string(42, '-') << '\n';
  os << "bits: " << report.input_bits << "  overall: " << (report.all_pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

inline void to_json(nlohmann::json& j, const TestResult& r) {
  j = nlohmann::json{{"name", r.name}, {"p_value", r.p_value}, {"pass", r.pass}};
}

inline void to_json(nlohmann::json& j, const TestReport& r) {
  j = nlohmann::json{{"results", r.results}, {"input_bits", r.input_bits}, {"all_pass", r.all_pass}};
}

}  // namespace qrng::stattests
