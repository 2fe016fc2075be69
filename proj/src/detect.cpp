#include "rbte/detect.hpp"

#include <algorithm>
#include <cmath>

#include "rbte/error.hpp"
#include "rbte/io.hpp"
#include "rbte/kernels.hpp"

namespace rbte::detect {

namespace fs = std::filesystem;
using kernels::Extent;

void BuiltinDetectorConfig::validate() const {
  if (!(sigma_lo > 0.0 && sigma_lo <= sigma_hi))
    throw DataError("built-in detector sigma range must satisfy 0 < lo <= hi");
}

void EdgeSourceSet::validate() const {
  if (sources.empty()) throw DataError("edge source set is empty");
  for (const auto& s : sources) {
    if (const auto* b = std::get_if<BuiltinDetectorConfig>(&s)) b->validate();
    if (const auto* e = std::get_if<ExternalSource>(&s); e && e->tag.empty())
      throw DataError("external edge source needs a tag");
  }
}

std::string source_tag(const EdgeSource& src) {
  if (const auto* e = std::get_if<ExternalSource>(&src)) return e->tag;
  return "builtin";
}

EdgeField gradient_field(const GrayImage& img, double sigma) {
  if (!(sigma > 0.0)) throw DataError("gradient_field: sigma must be positive");
  const Extent ext{img.width(), img.height()};
  const auto taps = kernels::gaussian_taps(sigma);
  const auto blurred = kernels::gaussian_blur(img.pixels(), ext, taps);

  std::vector<float> gx(ext.area()), gy(ext.area());
  kernels::sobel(blurred, ext, gx, gy);

  std::vector<float> mag(ext.area());
  std::vector<float> orient(ext.area());
  float peak = 0.0f;
#pragma omp parallel for schedule(static) reduction(max : peak)
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
    orient[i] = fold_angle(std::atan2(static_cast<double>(gy[i]),
                                      static_cast<double>(gx[i])));
    peak = std::max(peak, mag[i]);
  }

  if (peak > 0.0f) {
    for (auto& m : mag) m = std::min(1.0f, m / peak);
  } else {
    std::fill(mag.begin(), mag.end(), 0.0f);
  }
  return EdgeField(GrayImage(ext.width, ext.height, std::move(mag)),
                   std::move(orient));
}

std::vector<float> ridge_orientation(const GrayImage& map, double sigma) {
  const Extent ext{map.width(), map.height()};
  const auto taps = kernels::gaussian_taps(sigma);
  const auto smooth = kernels::gaussian_blur(map.pixels(), ext, taps);
  std::vector<float> gx(ext.area()), gy(ext.area());
  kernels::sobel(smooth, ext, gx, gy);

  std::vector<float> jxx(ext.area()), jxy(ext.area()), jyy(ext.area());
  for (std::size_t i = 0; i < jxx.size(); ++i) {
    jxx[i] = gx[i] * gx[i];
    jxy[i] = gx[i] * gy[i];
    jyy[i] = gy[i] * gy[i];
  }
  jxx = kernels::gaussian_blur(jxx, ext, taps);
  jxy = kernels::gaussian_blur(jxy, ext, taps);
  jyy = kernels::gaussian_blur(jyy, ext, taps);

  std::vector<float> orient(ext.area());
  for (std::size_t i = 0; i < orient.size(); ++i)
    orient[i] = fold_angle(0.5 * std::atan2(2.0 * jxy[i],
                                            static_cast<double>(jxx[i]) - jyy[i]));
  return orient;
}

fs::path edge_map_path(const fs::path& image, const ExternalSource& src) {
  const fs::path dir = src.dir.empty() ? image.parent_path() : src.dir;
  return dir / (image.stem().string() + "." + src.tag + ".png");
}

EdgeField load_external_edge_map(const fs::path& image,
                                 const ExternalSource& src) {
  const auto path = edge_map_path(image, src);
  if (!fs::exists(path))
    throw MissingEdgeMap(image.string(), src.tag, path.string());
  GrayImage strength = load_gray(path);
  auto orient = ridge_orientation(strength, 1.0);
  return EdgeField(std::move(strength), std::move(orient));
}

std::size_t pick_source(const EdgeSourceSet& set, Rng& rng) {
  if (set.sources.empty()) throw DataError("edge source set is empty");
  return static_cast<std::size_t>(rng.uniform_index(set.sources.size()));
}

double sample_sigma(const BuiltinDetectorConfig& cfg, Rng& rng) {
  return rng.uniform(cfg.sigma_lo, cfg.sigma_hi);
}

}  // namespace rbte::detect
