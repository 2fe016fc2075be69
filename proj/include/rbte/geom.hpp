#pragma once

#include "rbte/field.hpp"
#include "rbte/random.hpp"

namespace rbte::geom {

struct GeomRanges {
  double angle_lo = -5.0;  // degrees
  double angle_hi = 5.0;
  double area_lo = 0.8;  // fraction of the square's area
  double area_hi = 1.0;
  double aspect_lo = 3.0 / 4.0;  // width / height
  double aspect_hi = 4.0 / 3.0;
  double hflip_prob = 0.5;
  int resize_side = 256;
  int final_side = 224;

  /// Throws DataError on inverted or out-of-domain ranges (|angle| <= 45).
  void validate() const;
};

struct GeomParams {
  double angle_deg = 0.0;
  double crop_area_frac = 1.0;
  double crop_aspect = 1.0;
  double crop_x = 0.0;  // normalized offset within the feasible range
  double crop_y = 0.0;
  bool hflip = false;
  int out_side_resize = 256;
  int out_side_final = 224;

  bool operator==(const GeomParams&) const = default;
};

/// Always consumes exactly six draws: angle, area, log-aspect, x, y, flip.
GeomParams sample_geom(Rng& rng, const GeomRanges& ranges);

/// Zero-pads the short axis (floor split) to a square.
EdgeField pad_to_square(const EdgeField& field);

/// Square input only. Bilinear strength, nearest orientation.
EdgeField resize_bilinear(const EdgeField& field, int side);

/// Rotation about the centre; out-of-bounds reads are zero. Orientation is
/// sampled nearest and shifted by -angle.
EdgeField rotate(const EdgeField& field, double angle_deg);

struct CropRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  bool operator==(const CropRect&) const = default;
};

/// Crop rectangle inside a side x side square. When the requested aspect
/// does not fit, it is pulled toward 1 until both sides fit.
CropRect crop_rect(int side, const GeomParams& p);

/// Crops `crop_rect` and resizes the result to out_side_final squared.
EdgeField random_resized_crop(const EdgeField& field, const GeomParams& p);

/// Mirrors columns when `flag`; orientation theta -> (pi - theta) mod pi.
EdgeField hflip(const EdgeField& field, bool flag);

/// pad -> resize -> rotate -> crop/resize -> flip.
EdgeField augment(const EdgeField& field, const GeomParams& p);

}  // namespace rbte::geom
