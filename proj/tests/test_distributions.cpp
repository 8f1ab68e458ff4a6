#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "qrng/distributions.hpp"
#include "qrng/source_sim.hpp"

using namespace qrng;

TEST(Quantize, BinEdges) {
  const SamplerConfig c{};
  EXPECT_EQ(quantize(-5.0, c), 0u);
  EXPECT_EQ(quantize(0.0, c), 16u);
  EXPECT_EQ(quantize(7.3, c), 31u);
  EXPECT_EQ(quantize(-9.0, c), 0u);
  EXPECT_EQ(quantize(5.0, c), 31u);
  EXPECT_EQ(quantize(c.edge(7), c), 7u);
  EXPECT_EQ(quantize(std::nextafter(c.edge(7), -10.0), c), 6u);
  EXPECT_THROW(quantize(std::nan(""), c), ValidationError);
}

TEST(SamplerConfig, Validation) {
  EXPECT_THROW((SamplerConfig{0, -5, 5}.validate()), ValidationError);
  EXPECT_THROW((SamplerConfig{17, -5, 5}.validate()), ValidationError);
  EXPECT_THROW((SamplerConfig{5, 5, -5}.validate()), ValidationError);
  EXPECT_DOUBLE_EQ(SamplerConfig{}.edge(32), 5.0);
}

TEST(QuantizedDistribution, RejectsNonDistributions) {
  const SamplerConfig c{1, -1, 1};
  EXPECT_THROW(QuantizedDistribution(c, {0.5}), ValidationError);
  EXPECT_THROW(QuantizedDistribution(c, {0.6, 0.6}), ValidationError);
  EXPECT_THROW(QuantizedDistribution(c, {1.2, -0.2}), ValidationError);
  EXPECT_THROW(QuantizedDistribution(c, {0.0, 0.0}), ValidationError);
  EXPECT_NO_THROW(QuantizedDistribution(c, {0.25, 0.75}));
}

TEST(IdealGaussian, DeltaLimit) {
  // mu = 0 sits on the edge between bins 15 and 16, so the mass splits.
  const auto at_edge = ideal_gaussian(0.0, 1e-6, SamplerConfig{});
  EXPECT_NEAR(at_edge[15], 0.5, 1e-12);
  EXPECT_NEAR(at_edge[16], 0.5, 1e-12);
  const auto inside = ideal_gaussian(0.15, 1e-6, SamplerConfig{});
  EXPECT_NEAR(inside[16], 1.0, 1e-12);
  EXPECT_EQ(quantize(0.0, SamplerConfig{}), 16u);
}

TEST(IdealGaussian, CentralBinAgainstQuadrature) {
  const SamplerConfig c{};
  const auto d = ideal_gaussian(0.0, 1.0, c);
  const double oracle_mass = oracle::gaussian_mass(0.0, 1.0, c.edge(16), c.edge(17));
  EXPECT_NEAR(d[16], oracle_mass, 1e-10);
  EXPECT_NEAR(d[15], oracle_mass, 1e-10);
  EXPECT_NEAR(*std::max_element(d.probabilities().begin(), d.probabilities().end()), 0.124, 0.002);
}

TEST(IdealGaussian, InteriorBinsAgainstQuadrature) {
  const SamplerConfig c{5, -5, 5};
  const auto d = ideal_gaussian(0.7, 1.3, c);
  for (std::size_t i = 1; i + 1 < c.bins(); ++i)
    EXPECT_NEAR(d[i], oracle::gaussian_mass(0.7, 1.3, c.edge(i), c.edge(i + 1)), 1e-10) << i;
  // Edge bins also carry the tails.
  EXPECT_NEAR(d[0], oracle::gaussian_mass(0.7, 1.3, -40.0, c.edge(1), 20000), 1e-9);
}

TEST(IdealGaussian, SymmetricAboutMidpoint) {
  const auto d = ideal_gaussian(0.0, 1.0, SamplerConfig{});
  for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(d[i], d[31 - i], 1e-12);
  const auto p = d.probabilities();
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
}

TEST(IdealGaussian, RejectsBadSigma) {
  EXPECT_THROW(ideal_gaussian(0.0, 0.0, SamplerConfig{}), ValidationError);
  EXPECT_THROW(ideal_gaussian(0.0, -1.0, SamplerConfig{}), ValidationError);
}

TEST(Empirical, CountsFrequencies) {
  const SamplerConfig c2{2, -1, 1};
  const std::vector<std::size_t> s{3, 3, 3, 3};
  const auto d = empirical(s, c2);
  EXPECT_EQ(d[3], 1.0);
  EXPECT_EQ(d[0] + d[1] + d[2], 0.0);
  const std::vector<std::size_t> half{0, 1};
  const auto h = empirical(half, SamplerConfig{1, -1, 1});
  EXPECT_EQ(h[0], 0.5);
  EXPECT_EQ(h[1], 0.5);
  EXPECT_THROW(empirical(std::vector<std::size_t>{}, c2), ValidationError);
  EXPECT_THROW(empirical(std::vector<std::size_t>{4}, c2), ValidationError);
  EXPECT_THROW(empirical(SymbolSequence(3, {1}), c2), ValidationError);
}

TEST(Empirical, ConvergesToIdealAtTenMillionDraws) {
  const SamplerConfig c{};
  SourceModel model;
  model.rng_seed = 2024;
  const auto symbols = generate_symbols(model, c, 10'000'000);
  const auto ideal = ideal_gaussian(0.0, 1.0, c);
  const auto emp = empirical(symbols, c);
  double d = 0.0;
  for (std::size_t i = 0; i < c.bins(); ++i) d += std::abs(emp[i] - ideal[i]);
  EXPECT_LT(0.5 * d, 0.002);
}
