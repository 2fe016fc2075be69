#include "rbte/sketch.hpp"

#include <algorithm>
#include <cmath>

#include "rbte/detect.hpp"
#include "rbte/error.hpp"
#include "rbte/kernels.hpp"

namespace rbte::pipeline {

namespace {

// Source index range [lo, hi) feeding output index d along one axis.
struct Span1 {
  int lo;
  int hi;
};

Span1 footprint(int d, int src, int dst) {
  const long long s = src, t = dst;
  if (dst <= src) {
    const int lo = static_cast<int>(d * s / t);
    const int hi = static_cast<int>(((d + 1) * s + t - 1) / t);
    return {lo, std::max(hi, lo + 1)};
  }
  const int i = static_cast<int>(((2LL * d + 1) * s) / (2 * t));
  return {i, i + 1};
}

BinaryMap crop(const BinaryMap& m, const BoundingBox& b) {
  BinaryMap out(b.width(), b.height(), false);
  for (int y = 0; y < b.height(); ++y)
    for (int x = 0; x < b.width(); ++x) out.set(x, y, m(x + b.x0, y + b.y0));
  return out;
}

BinaryMap pad_square(const BinaryMap& m) {
  const int side = std::max(m.width(), m.height());
  if (m.width() == m.height()) return m;
  const int ox = (side - m.width()) / 2, oy = (side - m.height()) / 2;
  BinaryMap out(side, side, false);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) out.set(x + ox, y + oy, m(x, y));
  return out;
}

}  // namespace

void ScaleSet::validate() const {
  if (scales.empty()) throw DataError("scale set is empty");
  for (double s : scales)
    if (!(s > 0.0 && s <= 1.0)) throw DataError("scales must lie in (0,1]");
  if (input_side < 1) throw DataError("input side must be positive");
}

std::optional<BoundingBox> bounding_box(const BinaryMap& map) {
  BoundingBox b{map.width(), map.height(), -1, -1};
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x)
      if (map(x, y)) {
        b.x0 = std::min(b.x0, x);
        b.y0 = std::min(b.y0, y);
        b.x1 = std::max(b.x1, x);
        b.y1 = std::max(b.y1, y);
      }
  if (b.x1 < 0) return std::nullopt;
  return b;
}

BinaryMap resize_binary(const BinaryMap& map, int width, int height) {
  if (width < 1 || height < 1) throw DataError("resize target must be positive");
  if (width == map.width() && height == map.height()) return map;
  std::vector<Span1> cols(width), rows(height);
  for (int x = 0; x < width; ++x) cols[x] = footprint(x, map.width(), width);
  for (int y = 0; y < height; ++y) rows[y] = footprint(y, map.height(), height);

  BinaryMap out(width, height, false);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      bool any = false;
      for (int sy = rows[y].lo; sy < rows[y].hi && !any; ++sy)
        for (int sx = cols[x].lo; sx < cols[x].hi && !any; ++sx) any = map(sx, sy);
      out.set(x, y, any);
    }
  return out;
}

BinaryMap thin_sketch(const GrayImage& sketch, Polarity polarity) {
  const kernels::Extent ext{sketch.width(), sketch.height()};
  std::vector<float> bright(sketch.pixels().begin(), sketch.pixels().end());
  if (polarity == Polarity::DarkOnLight)
    for (auto& v : bright) v = 1.0f - v;
  const GrayImage edges(ext.width, ext.height, std::move(bright));

  // Smoothing gives wide strokes a single ridge line; without it the strict
  // NMS comparison would erase any stroke thicker than one pixel.
  const auto taps = kernels::gaussian_taps(1.0);
  const auto smooth = kernels::gaussian_blur(edges.pixels(), ext, taps);
  const auto orient = detect::ridge_orientation(edges, 1.0);
  const auto thinned = kernels::nms(smooth, orient, ext);

  const float peak = *std::max_element(thinned.begin(), thinned.end());
  BinaryMap out(ext.width, ext.height, false);
  if (!(peak > 0.0f)) return out;
  const float cut = 0.5f * peak;
  auto bits = out.pixels();
  for (std::size_t i = 0; i < thinned.size(); ++i) bits[i] = thinned[i] >= cut ? 1 : 0;
  return out;
}

BinaryMap prep_sketch_single(const GrayImage& sketch, Polarity polarity, int side) {
  const BinaryMap thin = thin_sketch(sketch, polarity);
  return resize_binary(pad_square(thin), side, side);
}

std::vector<BinaryMap> place_multiscale(const BinaryMap& map, const ScaleSet& scales) {
  scales.validate();
  const auto box = bounding_box(map);
  if (!box) throw BlankSketch();
  const BinaryMap square = pad_square(crop(map, *box));

  std::vector<BinaryMap> out;
  out.reserve(scales.scales.size());
  const int side = scales.input_side;
  for (double s : scales.scales) {
    const int n = std::clamp(static_cast<int>(std::lround(s * side)), 1, side);
    const BinaryMap content = resize_binary(square, n, n);
    const int off = (side - n) / 2;
    BinaryMap canvas(side, side, false);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if (content(x, y)) canvas.set(x + off, y + off, true);
    out.push_back(std::move(canvas));
  }
  return out;
}

std::vector<BinaryMap> prep_sketch_multiscale(const GrayImage& sketch,
                                              const ScaleSet& scales,
                                              Polarity polarity) {
  return place_multiscale(thin_sketch(sketch, polarity), scales);
}

}  // namespace rbte::pipeline
