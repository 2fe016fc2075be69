#include "rbte/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbte/error.hpp"

namespace rbte {

namespace {

void check_extent(int width, int height) {
  if (width < 1 || height < 1)
    throw DataError("image dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
}

}  // namespace

GrayImage::GrayImage(int width, int height, float fill)
    : width_(width), height_(height) {
  check_extent(width, height);
  if (!(fill >= 0.0f && fill <= 1.0f))
    throw DataError("gray fill value outside [0,1]");
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_extent(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height)
    throw DataError("gray image data length does not match dimensions");
  // Written as a negated range test so NaN is rejected as well.
  if (std::any_of(data_.begin(), data_.end(),
                  [](float v) { return !(v >= 0.0f && v <= 1.0f); }))
    throw DataError("gray image value outside [0,1]");
}

RgbImage::RgbImage(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_extent(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height * 3)
    throw DataError("rgb image data length does not match dimensions");
  if (std::any_of(data_.begin(), data_.end(),
                  [](float v) { return !(v >= 0.0f && v <= 1.0f); }))
    throw DataError("rgb image value outside [0,1]");
}

BinaryMap::BinaryMap(int width, int height, bool fill)
    : width_(width), height_(height) {
  check_extent(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

BinaryMap::BinaryMap(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_extent(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height)
    throw DataError("binary map data length does not match dimensions");
  for (auto& v : data_) v = v ? 1 : 0;
}

std::size_t BinaryMap::count() const noexcept {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), 1));
}

GrayImage to_grayscale(const RgbImage& img) {
  const auto px = img.pixels();
  std::vector<float> out(static_cast<std::size_t>(img.width()) * img.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double luma = 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] +
                        0.114 * px[3 * i + 2];
    out[i] = static_cast<float>(std::clamp(luma, 0.0, 1.0));
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace rbte
