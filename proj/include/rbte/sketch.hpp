#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rbte/image.hpp"

namespace rbte::pipeline {

enum class Polarity { DarkOnLight, LightOnDark };

/// Relative content sizes for multi-scale testing, as fractions of the
/// network input side.
struct ScaleSet {
  std::vector<double> scales{0.90, 0.65, 0.45};
  int input_side = 224;

  void validate() const;
};

struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive
  int width() const noexcept { return x1 - x0 + 1; }
  int height() const noexcept { return y1 - y0 + 1; }
  bool operator==(const BoundingBox&) const = default;
};

std::optional<BoundingBox> bounding_box(const BinaryMap& map);

/// Binary resampling. Shrinking axes take the OR over each output pixel's
/// source footprint so one-pixel strokes cannot fall between samples;
/// enlarging axes use the nearest source pixel.
BinaryMap resize_binary(const BinaryMap& map, int width, int height);

/// Polarity to edges-bright, sigma-1 smoothing, NMS with ridge orientation,
/// then true where the thinned value is >= 0.5 of its maximum. Native size.
BinaryMap thin_sketch(const GrayImage& sketch, Polarity polarity);

/// thin_sketch, zero-padded to square and resized to `side`.
BinaryMap prep_sketch_single(const GrayImage& sketch,
                             Polarity polarity = Polarity::DarkOnLight,
                             int side = 224);

/// thin_sketch, cropped to its bounding box, padded square, resized so the
/// content side is round(scale * side) and centred (floor split) on a
/// side x side canvas. One map per scale. Throws BlankSketch.
std::vector<BinaryMap> prep_sketch_multiscale(
    const GrayImage& sketch, const ScaleSet& scales = {},
    Polarity polarity = Polarity::DarkOnLight);

/// Multi-scale placement of an already binary map.
std::vector<BinaryMap> place_multiscale(const BinaryMap& map,
                                        const ScaleSet& scales);

}  // namespace rbte::pipeline
