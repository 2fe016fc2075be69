#include "rbte/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rbte/error.hpp"
#include "rbte/kernels.hpp"

namespace rbte::geom {

using kernels::Extent;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_range(double lo, double hi, const char* name) {
  if (!(lo <= hi)) throw DataError(std::string("geom range '") + name + "' is inverted");
}

GrayImage clamped(int w, int h, std::vector<float> v) {
  for (auto& x : v) x = std::clamp(x, 0.0f, 1.0f);
  return GrayImage(w, h, std::move(v));
}

}  // namespace

void GeomRanges::validate() const {
  check_range(angle_lo, angle_hi, "angle_deg");
  check_range(area_lo, area_hi, "crop_area");
  check_range(aspect_lo, aspect_hi, "crop_aspect");
  if (std::abs(angle_lo) > 45.0 || std::abs(angle_hi) > 45.0)
    throw DataError("rotation angle range must lie within [-45,45] degrees");
  if (!(area_lo > 0.0 && area_hi <= 1.0))
    throw DataError("crop area range must lie within (0,1]");
  if (!(aspect_lo > 0.0)) throw DataError("crop aspect range must be positive");
  if (!(hflip_prob >= 0.0 && hflip_prob <= 1.0))
    throw DataError("hflip probability must lie within [0,1]");
  if (resize_side < 8 || final_side < 1)
    throw DataError("resize_side must be >= 8 and final_side >= 1");
}

GeomParams sample_geom(Rng& rng, const GeomRanges& r) {
  GeomParams p;
  p.angle_deg = rng.uniform(r.angle_lo, r.angle_hi);
  p.crop_area_frac = rng.uniform(r.area_lo, r.area_hi);
  const double log_aspect = rng.uniform(std::log(r.aspect_lo), std::log(r.aspect_hi));
  p.crop_aspect = r.aspect_lo == r.aspect_hi
                      ? r.aspect_lo
                      : std::clamp(std::exp(log_aspect), r.aspect_lo, r.aspect_hi);
  p.crop_x = rng.uniform01();
  p.crop_y = rng.uniform01();
  p.hflip = rng.bernoulli(r.hflip_prob);
  p.out_side_resize = r.resize_side;
  p.out_side_final = r.final_side;
  return p;
}

EdgeField pad_to_square(const EdgeField& field) {
  const int w = field.width(), h = field.height();
  if (w == h) return field;
  const int side = std::max(w, h);
  const int ox = (side - w) / 2, oy = (side - h) / 2;
  EdgeField out(side, side);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t src = static_cast<std::size_t>(y) * w + x;
      const std::size_t dst = static_cast<std::size_t>(y + oy) * side + (x + ox);
      out.strength.pixels()[dst] = field.strength.pixels()[src];
      out.orientation[dst] = field.orientation[src];
    }
  return out;
}

namespace {

EdgeField resize_to(const EdgeField& field, Extent to) {
  const Extent from{field.width(), field.height()};
  if (from == to) return field;
  auto s = kernels::resize_bilinear(field.strength.pixels(), from, to);
  auto o = kernels::resize_nearest(field.orientation, from, to);
  return EdgeField(clamped(to.width, to.height, std::move(s)), std::move(o));
}

}  // namespace

EdgeField resize_bilinear(const EdgeField& field, int side) {
  if (field.width() != field.height())
    throw DataError("resize_bilinear expects a square field");
  if (side < 1) throw DataError("resize side must be positive");
  return resize_to(field, {side, side});
}

EdgeField rotate(const EdgeField& field, double angle_deg) {
  if (std::abs(angle_deg) > 45.0)
    throw DataError("rotation angle exceeds 45 degrees");
  if (angle_deg == 0.0) return field;
  const Extent ext{field.width(), field.height()};
  const double rad = angle_deg * kDegToRad;
  auto s = kernels::rotate_bilinear(field.strength.pixels(), ext, rad);
  auto o = kernels::rotate_nearest(field.orientation, ext, rad);
  for (auto& t : o) t = fold_angle(static_cast<double>(t) - rad);
  return EdgeField(clamped(ext.width, ext.height, std::move(s)), std::move(o));
}

CropRect crop_rect(int side, const GeomParams& p) {
  const double full = static_cast<double>(side) * side;
  const double area = p.crop_area_frac * full;
  // Both sides fit iff area/side^2 <= aspect <= side^2/area; clamping moves
  // the aspect toward 1 by the least amount.
  const double aspect = std::clamp(p.crop_aspect, area / full, full / area);
  CropRect r;
  r.width = std::clamp(static_cast<int>(std::lround(std::sqrt(area * aspect))), 1, side);
  r.height = std::clamp(static_cast<int>(std::lround(std::sqrt(area / aspect))), 1, side);
  r.x = static_cast<int>(std::lround(std::clamp(p.crop_x, 0.0, 1.0) * (side - r.width)));
  r.y = static_cast<int>(std::lround(std::clamp(p.crop_y, 0.0, 1.0) * (side - r.height)));
  return r;
}

EdgeField random_resized_crop(const EdgeField& field, const GeomParams& p) {
  if (field.width() != field.height())
    throw DataError("random_resized_crop expects a square field");
  const int side = field.width();
  if (side < 8) throw DataError("random_resized_crop needs side >= 8");
  const CropRect r = crop_rect(side, p);

  std::vector<float> s(static_cast<std::size_t>(r.width) * r.height);
  std::vector<float> o(s.size());
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x) {
      const std::size_t src = static_cast<std::size_t>(y + r.y) * side + (x + r.x);
      const std::size_t dst = static_cast<std::size_t>(y) * r.width + x;
      s[dst] = field.strength.pixels()[src];
      o[dst] = field.orientation[src];
    }
  EdgeField crop(GrayImage(r.width, r.height, std::move(s)), std::move(o));
  return resize_to(crop, {p.out_side_final, p.out_side_final});
}

EdgeField hflip(const EdgeField& field, bool flag) {
  if (!flag) return field;
  const int w = field.width(), h = field.height();
  EdgeField out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t src = static_cast<std::size_t>(y) * w + x;
      const std::size_t dst = static_cast<std::size_t>(y) * w + (w - 1 - x);
      out.strength.pixels()[dst] = field.strength.pixels()[src];
      out.orientation[dst] =
          fold_angle(std::numbers::pi - static_cast<double>(field.orientation[src]));
    }
  return out;
}

EdgeField augment(const EdgeField& field, const GeomParams& p) {
  auto f = pad_to_square(field);
  f = resize_bilinear(f, p.out_side_resize);
  f = rotate(f, p.angle_deg);
  f = random_resized_crop(f, p);
  return hflip(f, p.hflip);
}

}  // namespace rbte::geom
