#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rbte {

/// Single-channel raster with values in [0,1], row-major.
class GrayImage {
 public:
  GrayImage() = default;
  /// Filled with `fill`, which must lie in [0,1].
  GrayImage(int width, int height, float fill = 0.0f);
  /// Takes ownership of `data`; throws DataError on size or range violations.
  GrayImage(int width, int height, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  float& operator()(int x, int y) noexcept { return data_[index(x, y)]; }

  std::span<const float> pixels() const noexcept { return data_; }
  std::span<float> pixels() noexcept { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Three interleaved channels (R, G, B) with values in [0,1].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  float channel(int x, int y, int c) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }
  std::span<const float> pixels() const noexcept { return data_; }

  bool operator==(const RgbImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Boolean raster stored one byte per pixel (0 or 1).
class BinaryMap {
 public:
  BinaryMap() = default;
  BinaryMap(int width, int height, bool fill = false);
  BinaryMap(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool operator()(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool v) noexcept {
    data_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }

  std::span<const std::uint8_t> pixels() const noexcept { return data_; }
  std::span<std::uint8_t> pixels() noexcept { return data_; }

  std::size_t count() const noexcept;

  bool operator==(const BinaryMap&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// BT.601 luma, clamped to [0,1].
GrayImage to_grayscale(const RgbImage& img);

}  // namespace rbte
