#pragma once

// Data-parallel raster kernels. The functions in `rbte::kernels` are the
// OpenMP versions used by the pipeline; `rbte::kernels::serial` holds the
// straightforward reference loops they are tested against. Both produce
// bit-identical results: every output pixel is computed with the same
// floating-point operations in the same order.
//
// All borders are replicate-padded unless stated otherwise.

#include <cstdint>
#include <span>
#include <vector>

namespace rbte::kernels {

struct Extent {
  int width = 0;
  int height = 0;
  std::size_t area() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool operator==(const Extent&) const = default;
};

/// Normalized Gaussian taps, radius ceil(3 sigma), length 2r+1.
std::vector<float> gaussian_taps(double sigma);

/// Gaussian blur: horizontal pass then vertical pass with `taps`.
std::vector<float> gaussian_blur(std::span<const float> src, Extent ext,
                                 std::span<const float> taps);

/// 3x3 Sobel. gy is the derivative along increasing row index.
void sobel(std::span<const float> src, Extent ext, std::span<float> gx,
           std::span<float> gy);

/// Non-maximum suppression with orientation quantized to the four
/// directions 0, pi/4, pi/2, 3pi/4. A pixel survives iff it is strictly
/// greater than both neighbours along its direction.
std::vector<float> nms(std::span<const float> strength,
                       std::span<const float> orientation, Extent ext);

/// Half-pixel-centre bilinear resampling (align_corners = false).
std::vector<float> resize_bilinear(std::span<const float> src, Extent from,
                                   Extent to);

/// Half-pixel-centre nearest-neighbour resampling.
std::vector<float> resize_nearest(std::span<const float> src, Extent from,
                                  Extent to);

/// Rotation about the image centre. Output pixel p samples the source at
/// c + R(angle) (p - c); reads outside the source are zero.
std::vector<float> rotate_bilinear(std::span<const float> src, Extent ext,
                                   double angle_rad);
std::vector<float> rotate_nearest(std::span<const float> src, Extent ext,
                                  double angle_rad);

/// Orientation bin (0..3) for an angle in [0, pi).
int quantize_orientation(float theta) noexcept;

namespace serial {

std::vector<float> gaussian_blur(std::span<const float> src, Extent ext,
                                 std::span<const float> taps);
void sobel(std::span<const float> src, Extent ext, std::span<float> gx,
           std::span<float> gy);
std::vector<float> nms(std::span<const float> strength,
                       std::span<const float> orientation, Extent ext);
std::vector<float> resize_bilinear(std::span<const float> src, Extent from,
                                   Extent to);
std::vector<float> rotate_bilinear(std::span<const float> src, Extent ext,
                                   double angle_rad);

}  // namespace serial

}  // namespace rbte::kernels
