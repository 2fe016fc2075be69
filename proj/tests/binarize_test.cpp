#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rbte/binarize.hpp"
#include "rbte/error.hpp"

using namespace rbte;
using namespace rbte::binarize;

namespace {

Histogram spikes(std::initializer_list<std::pair<int, std::uint64_t>> bins) {
  Histogram h;
  for (auto [k, n] : bins) {
    h.bins[k] += n;
    h.total += n;
  }
  return h;
}

thin::ThinField thin_of(int w, int h, std::vector<float> v) {
  return {GrayImage(w, h, std::move(v))};
}

BinaryMap random_map(std::mt19937_64& gen, int w, int h, double p) {
  std::bernoulli_distribution b(p);
  BinaryMap m(w, h);
  for (auto& v : m.pixels()) v = b(gen);
  return m;
}

}  // namespace

TEST(Histogram, BinsAndZeros) {
  EXPECT_EQ(Histogram::bin_of(0.0f), 0);
  EXPECT_EQ(Histogram::bin_of(1.0f), 255);
  EXPECT_EQ(Histogram::bin_of(0.5f), 128);
  EXPECT_EQ(Histogram::bin_of(127.0f / 256.0f), 127);
  GrayImage img(4, 1, std::vector<float>{0.0f, 0.0f, 0.5f, 1.0f});
  const auto all = histogram(img, false);
  EXPECT_EQ(all.total, 4u);
  EXPECT_EQ(all.bins[0], 2u);
  const auto nz = histogram(img, true);
  EXPECT_EQ(nz.total, 2u);
  EXPECT_EQ(nz.bins[0], 0u);
  EXPECT_THROW(histogram(GrayImage(3, 3), true), EmptyHistogram);
}

TEST(Otsu, TwoSpikesAndDegenerate) {
  EXPECT_DOUBLE_EQ(otsu(spikes({{51, 100}, {204, 100}})), 52.0 / 256);
  EXPECT_DOUBLE_EQ(otsu(spikes({{90, 10}})), 91.0 / 256);
  Histogram uni;
  for (auto& b : uni.bins) b = 10;
  uni.total = 2560;
  EXPECT_NEAR(otsu(uni), 0.5, 1.0 / 256);
}

TEST(YenLi, BetweenSpikes) {
  const auto h = spikes({{40, 300}, {41, 50}, {200, 80}, {210, 120}});
  for (double t : {yen(h), li(h)}) {
    EXPECT_GE(t, 41.0 / 256);
    EXPECT_LE(t, 200.0 / 256);
  }
  EXPECT_DOUBLE_EQ(yen(spikes({{7, 3}})), 8.0 / 256);
  EXPECT_DOUBLE_EQ(li(spikes({{7, 3}})), 8.0 / 256);
}

TEST(SplitEstimators, MatchOraclesAndScaleInvariant) {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 200; ++i) {
    const auto h = oracle::random_histogram(gen);
    ASSERT_DOUBLE_EQ(otsu(h), Histogram::right_edge(oracle::otsu_bin(h)));
    ASSERT_DOUBLE_EQ(yen(h), Histogram::right_edge(oracle::yen_bin(h)));
    ASSERT_DOUBLE_EQ(li(h), Histogram::right_edge(oracle::li_bin(h)));
    Histogram s = h;
    for (auto& b : s.bins) b *= 7;
    s.total *= 7;
    ASSERT_DOUBLE_EQ(li(s), li(h));
    ASSERT_DOUBLE_EQ(otsu(s), otsu(h));
  }
}

TEST(Isodata, TwoSpikesAndResidual) {
  const auto r = isodata(spikes({{51, 100}, {204, 100}}));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.t, 0.5, 1.0 / 256);
  std::mt19937_64 gen(3);
  for (int i = 0; i < 200; ++i) {
    const auto h = oracle::random_histogram(gen);
    const auto res = isodata(h);
    if (res.converged) ASSERT_LT(oracle::isodata_residual(h, res.t), 1.0 / 512);
  }
}

TEST(Mean, Values) {
  EXPECT_DOUBLE_EQ(mean_threshold(spikes({{0, 1}, {255, 1}})), 0.5);
  EXPECT_DOUBLE_EQ(mean_threshold(spikes({{10, 4}})), Histogram::center(10));
}

TEST(Decision, LowHigh) {
  const auto d = make_decision(Method::Mean, 0.4);
  EXPECT_DOUBLE_EQ(d.low, 0.2);
  EXPECT_DOUBLE_EQ(d.high, 0.6000000000000001);
  EXPECT_DOUBLE_EQ(make_decision(Method::Otsu, 0.9).high, 1.0);
  EXPECT_EQ(parse_method(method_name(Method::Isodata)), Method::Isodata);
  EXPECT_THROW(parse_method("triangle"), DataError);
}

TEST(PickThresholder, Uniform) {
  const std::vector<Method> pool(kAllMethods.begin(), kAllMethods.end());
  Rng rng(55);
  std::array<int, 5> c{};
  for (int i = 0; i < 50000; ++i) ++c[static_cast<int>(pick_thresholder(rng, pool))];
  for (int n : c) {
    EXPECT_GE(n, 9250);
    EXPECT_LE(n, 10750);
  }
}

TEST(Hysteresis, ChainExample) {
  // 0.9 strong, chain of weak pixels, isolated weak pixel far away.
  std::vector<float> v(10, 0.0f);
  v[0] = 0.9f;
  v[1] = 0.4f;
  v[2] = 0.35f;
  v[3] = 0.1f;
  v[5] = 0.4f;
  const auto d = make_decision(Method::Mean, 0.5);  // low 0.25, high 0.75
  const auto m = hysteresis(thin_of(10, 1, v), d);
  EXPECT_TRUE(m(0, 0));
  EXPECT_TRUE(m(1, 0));
  EXPECT_TRUE(m(2, 0));
  EXPECT_FALSE(m(3, 0));
  EXPECT_FALSE(m(5, 0));
}

TEST(Hysteresis, MatchesBfsAndIsMonotone) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 500; ++i) {
    const auto f = oracle::random_field(gen, 24, 24);
    const double t = 0.1 + 0.6 * (i % 7) / 6.0;
    const auto d = make_decision(Method::Otsu, t);
    const auto got = hysteresis({f.strength}, d);
    ASSERT_EQ(got, oracle::hysteresis(f.strength, d.low, d.high));
    const auto lower = hysteresis({f.strength}, make_decision(Method::Otsu, t * 0.9));
    for (std::size_t k = 0; k < got.size(); ++k)
      ASSERT_LE(got.pixels()[k], lower.pixels()[k]);
  }
}

TEST(Components, NineRemovedTenKept) {
  BinaryMap m(20, 20);
  for (int i = 0; i < 9; ++i) m.set(1 + i % 3, 1 + i / 3, true);
  for (int i = 0; i < 10; ++i) m.set(10 + i, 15, true);
  const auto r = remove_small_components(m, 10);
  EXPECT_EQ(r.components_before, 2u);
  EXPECT_EQ(r.components_after, 1u);
  EXPECT_EQ(r.map.count(), 10u);
  EXPECT_TRUE(r.map(10, 15));
  EXPECT_FALSE(r.map(1, 1));
}

TEST(Components, DiagonalIsConnectedAndLabelsAreRasterOrdered) {
  BinaryMap m(4, 4);
  m.set(3, 0, true);
  m.set(2, 1, true);
  m.set(0, 3, true);
  const auto c = label_components(m);
  ASSERT_EQ(c.count(), 2u);
  EXPECT_EQ(c.labels[3], 1);
  EXPECT_EQ(c.labels[1 * 4 + 2], 1);
  EXPECT_EQ(c.labels[3 * 4 + 0], 2);
  EXPECT_EQ(c.sizes[0], 2u);
}

TEST(Components, MatchesBfsAndIsIdempotent) {
  std::mt19937_64 gen(41);
  for (int i = 0; i < 300; ++i) {
    const auto m = random_map(gen, 20 + i % 13, 17, 0.2 + 0.3 * (i % 3));
    const auto sizes = oracle::component_size_per_pixel(m);
    const auto c = label_components(m);
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (!m.pixels()[k]) {
        ASSERT_EQ(c.labels[k], 0);
        continue;
      }
      ASSERT_EQ(c.sizes[c.labels[k] - 1], sizes[k]);
    }
    const auto r = remove_small_components(m, 10);
    ASSERT_EQ(r.map, oracle::remove_small(m, 10));
    ASSERT_EQ(remove_small_components(r.map, 10).map, r.map);
  }
}
