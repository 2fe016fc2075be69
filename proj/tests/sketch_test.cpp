#include <gtest/gtest.h>

#include "rbte/error.hpp"
#include "rbte/sketch.hpp"

using namespace rbte;
using namespace rbte::pipeline;

namespace {

// Dark strokes on a white page: a rectangle outline of the given width.
GrayImage frame_sketch(int w, int h, int margin, int stroke) {
  GrayImage g(w, h, 1.0f);
  for (int y = margin; y < h - margin; ++y)
    for (int x = margin; x < w - margin; ++x) {
      const bool edge = x < margin + stroke || x >= w - margin - stroke ||
                        y < margin + stroke || y >= h - margin - stroke;
      if (edge) g(x, y) = 0.0f;
    }
  return g;
}

}  // namespace

TEST(ThinSketch, BlankPageIsEmpty) {
  EXPECT_EQ(thin_sketch(GrayImage(50, 40, 1.0f), Polarity::DarkOnLight).count(), 0u);
  EXPECT_THROW(prep_sketch_multiscale(GrayImage(50, 40, 1.0f)), BlankSketch);
}

TEST(ThinSketch, OnePixelStrokeSurvives) {
  GrayImage g(40, 40, 1.0f);
  for (int y = 5; y < 35; ++y) g(20, y) = 0.0f;
  const auto m = thin_sketch(g, Polarity::DarkOnLight);
  for (int y = 8; y < 32; ++y) {
    EXPECT_TRUE(m(20, y));
    int n = 0;
    for (int x = 0; x < 40; ++x) n += m(x, y);
    EXPECT_EQ(n, 1);
  }
}

TEST(ThinSketch, ThreePixelStrokeThinsToCentreLine) {
  GrayImage g(40, 40, 0.0f);
  for (int y = 5; y < 35; ++y)
    for (int x = 19; x <= 21; ++x) g(x, y) = 1.0f;
  const auto m = thin_sketch(g, Polarity::LightOnDark);
  for (int y = 8; y < 32; ++y) {
    EXPECT_TRUE(m(20, y));
    EXPECT_FALSE(m(19, y));
    EXPECT_FALSE(m(21, y));
  }
}

TEST(ResizeBinary, OrPoolingKeepsThinLines) {
  BinaryMap m(100, 100);
  for (int y = 0; y < 100; ++y) m.set(37, y, true);
  const auto s = resize_binary(m, 30, 30);
  int cols = 0;
  for (int x = 0; x < 30; ++x) cols += s(x, 15);
  EXPECT_GE(cols, 1);
  for (int y = 0; y < 30; ++y) EXPECT_EQ(s(11, y), true);
  EXPECT_EQ(resize_binary(m, 100, 100), m);
  const auto up = resize_binary(BinaryMap(2, 2, std::vector<std::uint8_t>{1, 0, 0, 1}), 4, 4);
  EXPECT_TRUE(up(0, 0) && up(1, 1) && up(3, 3));
  EXPECT_FALSE(up(3, 0));
}

TEST(Multiscale, ContentSidesAndCentring) {
  const auto maps = prep_sketch_multiscale(frame_sketch(300, 300, 10, 3));
  ASSERT_EQ(maps.size(), 3u);
  const int want[] = {202, 146, 101};
  for (int i = 0; i < 3; ++i) {
    const auto b = bounding_box(maps[i]);
    ASSERT_TRUE(b);
    EXPECT_EQ(b->width(), want[i]);
    EXPECT_EQ(b->height(), want[i]);
    EXPECT_NEAR((b->x0 + b->x1) / 2.0, 111.5, 1.0);
    EXPECT_NEAR((b->y0 + b->y1) / 2.0, 111.5, 1.0);
  }
}

TEST(Multiscale, FullScaleOfSquareMapIsIdentity) {
  BinaryMap m(224, 224);
  for (int i = 0; i < 224; ++i) {
    m.set(i, 0, true);
    m.set(i, 223, true);
    m.set(0, i, true);
    m.set(223, i, true);
  }
  ScaleSet s;
  s.scales = {1.0};
  EXPECT_EQ(place_multiscale(m, s).at(0), m);
  s.scales = {1.5};
  EXPECT_THROW(place_multiscale(m, s), DataError);
}

TEST(SingleScale, OutputSide) {
  const auto m = prep_sketch_single(frame_sketch(120, 80, 5, 2));
  EXPECT_EQ(m.width(), 224);
  EXPECT_EQ(m.height(), 224);
  EXPECT_GT(m.count(), 0u);
}
