#include "rbte/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rbte::kernels {

namespace {

inline int clampi(int v, int lo, int hi) noexcept {
  return v < lo ? lo : (v > hi ? hi : v);
}

inline std::size_t at(int x, int y, int w) noexcept {
  return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
         static_cast<std::size_t>(x);
}

// Neighbour offsets along the gradient for each orientation bin; y grows
// downwards, so bin 1 (pi/4) points to (+1,+1).
constexpr int kStepX[4] = {1, 1, 0, -1};
constexpr int kStepY[4] = {0, 1, 1, 1};

inline float nms_pixel(std::span<const float> s, std::span<const float> o,
                       int x, int y, int w, int h) noexcept {
  const float v = s[at(x, y, w)];
  const int b = quantize_orientation(o[at(x, y, w)]);
  const float a = s[at(clampi(x + kStepX[b], 0, w - 1),
                       clampi(y + kStepY[b], 0, h - 1), w)];
  const float c = s[at(clampi(x - kStepX[b], 0, w - 1),
                       clampi(y - kStepY[b], 0, h - 1), w)];
  return (v > a && v > c) ? v : 0.0f;
}

// Source coordinate and weight for one output column/row of a half-pixel
// resize.
struct Tap {
  int i0;
  int i1;
  float f;
};

inline Tap bilinear_tap(int d, int from, int to) noexcept {
  double s = (d + 0.5) * (static_cast<double>(from) / to) - 0.5;
  s = std::clamp(s, 0.0, static_cast<double>(from - 1));
  const int i0 = static_cast<int>(std::floor(s));
  const int i1 = std::min(i0 + 1, from - 1);
  return {i0, i1, static_cast<float>(s - i0)};
}

inline int nearest_index(int d, int from, int to) noexcept {
  const int i = static_cast<int>(
      std::floor((d + 0.5) * (static_cast<double>(from) / to)));
  return std::min(i, from - 1);
}

inline float lerp2(float a, float b, float c, float d, float fx,
                   float fy) noexcept {
  const float top = (1.0f - fx) * a + fx * b;
  const float bot = (1.0f - fx) * c + fx * d;
  return (1.0f - fy) * top + fy * bot;
}

struct RotFrame {
  double cx, cy, cs, sn;
};

inline RotFrame rot_frame(Extent ext, double angle) noexcept {
  return {(ext.width - 1) / 2.0, (ext.height - 1) / 2.0, std::cos(angle),
          std::sin(angle)};
}

inline float fetch_zero(std::span<const float> src, Extent ext, int x,
                        int y) noexcept {
  if (x < 0 || y < 0 || x >= ext.width || y >= ext.height) return 0.0f;
  return src[at(x, y, ext.width)];
}

inline float rotate_bilinear_pixel(std::span<const float> src, Extent ext,
                                   const RotFrame& r, int x, int y) noexcept {
  const double dx = x - r.cx;
  const double dy = y - r.cy;
  const double sx = r.cx + r.cs * dx - r.sn * dy;
  const double sy = r.cy + r.sn * dx + r.cs * dy;
  const double fx0 = std::floor(sx);
  const double fy0 = std::floor(sy);
  if (fx0 < -1.0 || fy0 < -1.0 || fx0 >= ext.width || fy0 >= ext.height)
    return 0.0f;
  const int x0 = static_cast<int>(fx0);
  const int y0 = static_cast<int>(fy0);
  const float fx = static_cast<float>(sx - fx0);
  const float fy = static_cast<float>(sy - fy0);
  return lerp2(fetch_zero(src, ext, x0, y0), fetch_zero(src, ext, x0 + 1, y0),
               fetch_zero(src, ext, x0, y0 + 1),
               fetch_zero(src, ext, x0 + 1, y0 + 1), fx, fy);
}

inline float rotate_nearest_pixel(std::span<const float> src, Extent ext,
                                  const RotFrame& r, int x, int y) noexcept {
  const double dx = x - r.cx;
  const double dy = y - r.cy;
  const double sx = std::floor(r.cx + r.cs * dx - r.sn * dy + 0.5);
  const double sy = std::floor(r.cy + r.sn * dx + r.cs * dy + 0.5);
  if (sx < 0 || sy < 0 || sx >= ext.width || sy >= ext.height) return 0.0f;
  return src[at(static_cast<int>(sx), static_cast<int>(sy), ext.width)];
}

}  // namespace

std::vector<float> gaussian_taps(double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(2 * r + 1);
  double sum = 0.0;
  for (int k = -r; k <= r; ++k) {
    w[k + r] = std::exp(-(k * k) / (2.0 * sigma * sigma));
    sum += w[k + r];
  }
  std::vector<float> taps(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    taps[i] = static_cast<float>(w[i] / sum);
  return taps;
}

int quantize_orientation(float theta) noexcept {
  const long b = std::lround(static_cast<double>(theta) / (std::numbers::pi / 4.0));
  return static_cast<int>(((b % 4) + 4) % 4);
}

// ------------------------------------------------------------------ serial

namespace serial {

std::vector<float> gaussian_blur(std::span<const float> src, Extent ext,
                                 std::span<const float> taps) {
  const int w = ext.width, h = ext.height;
  const int r = static_cast<int>(taps.size() / 2);
  std::vector<float> tmp(ext.area()), out(ext.area());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = -r; k <= r; ++k)
        acc += taps[k + r] * src[at(clampi(x + k, 0, w - 1), y, w)];
      tmp[at(x, y, w)] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = -r; k <= r; ++k)
        acc += taps[k + r] * tmp[at(x, clampi(y + k, 0, h - 1), w)];
      out[at(x, y, w)] = acc;
    }
  return out;
}

void sobel(std::span<const float> p, Extent ext, std::span<float> gx,
           std::span<float> gy) {
  const int w = ext.width, h = ext.height;
  for (int y = 0; y < h; ++y) {
    const int ym = clampi(y - 1, 0, h - 1), yp = clampi(y + 1, 0, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xm = clampi(x - 1, 0, w - 1), xp = clampi(x + 1, 0, w - 1);
      gx[at(x, y, w)] = (p[at(xp, ym, w)] - p[at(xm, ym, w)]) +
                        2.0f * (p[at(xp, y, w)] - p[at(xm, y, w)]) +
                        (p[at(xp, yp, w)] - p[at(xm, yp, w)]);
      gy[at(x, y, w)] = (p[at(xm, yp, w)] - p[at(xm, ym, w)]) +
                        2.0f * (p[at(x, yp, w)] - p[at(x, ym, w)]) +
                        (p[at(xp, yp, w)] - p[at(xp, ym, w)]);
    }
  }
}

std::vector<float> nms(std::span<const float> strength,
                       std::span<const float> orientation, Extent ext) {
  std::vector<float> out(ext.area());
  for (int y = 0; y < ext.height; ++y)
    for (int x = 0; x < ext.width; ++x)
      out[at(x, y, ext.width)] =
          nms_pixel(strength, orientation, x, y, ext.width, ext.height);
  return out;
}

std::vector<float> resize_bilinear(std::span<const float> src, Extent from,
                                   Extent to) {
  std::vector<float> out(to.area());
  for (int y = 0; y < to.height; ++y) {
    const Tap ty = bilinear_tap(y, from.height, to.height);
    for (int x = 0; x < to.width; ++x) {
      const Tap tx = bilinear_tap(x, from.width, to.width);
      out[at(x, y, to.width)] = lerp2(
          src[at(tx.i0, ty.i0, from.width)], src[at(tx.i1, ty.i0, from.width)],
          src[at(tx.i0, ty.i1, from.width)], src[at(tx.i1, ty.i1, from.width)],
          tx.f, ty.f);
    }
  }
  return out;
}

std::vector<float> rotate_bilinear(std::span<const float> src, Extent ext,
                                   double angle_rad) {
  const RotFrame r = rot_frame(ext, angle_rad);
  std::vector<float> out(ext.area());
  for (int y = 0; y < ext.height; ++y)
    for (int x = 0; x < ext.width; ++x)
      out[at(x, y, ext.width)] = rotate_bilinear_pixel(src, ext, r, x, y);
  return out;
}

}  // namespace serial

// ------------------------------------------------------------------ OpenMP

std::vector<float> gaussian_blur(std::span<const float> src, Extent ext,
                                 std::span<const float> taps) {
  const int w = ext.width, h = ext.height;
  const int r = static_cast<int>(taps.size() / 2);
  std::vector<float> tmp(ext.area()), out(ext.area());

#pragma omp parallel
  {
    // Horizontal pass: clamped reads only near the left/right borders.
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      const float* row = src.data() + at(0, y, w);
      float* dst = tmp.data() + at(0, y, w);
      const int lo = std::min(r, w), hi = std::max(lo, w - r);
      for (int x = 0; x < lo; ++x) {
        float acc = 0.0f;
        for (int k = -r; k <= r; ++k) acc += taps[k + r] * row[clampi(x + k, 0, w - 1)];
        dst[x] = acc;
      }
      for (int x = lo; x < hi; ++x) {
        float acc = 0.0f;
        for (int k = -r; k <= r; ++k) acc += taps[k + r] * row[x + k];
        dst[x] = acc;
      }
      for (int x = hi; x < w; ++x) {
        float acc = 0.0f;
        for (int k = -r; k <= r; ++k) acc += taps[k + r] * row[clampi(x + k, 0, w - 1)];
        dst[x] = acc;
      }
    }

    // Vertical pass, accumulated row-by-row so the inner loop is contiguous.
    // Per pixel the additions happen in the same order as the reference.
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      float* dst = out.data() + at(0, y, w);
      std::fill(dst, dst + w, 0.0f);
      for (int k = -r; k <= r; ++k) {
        const float t = taps[k + r];
        const float* row = tmp.data() + at(0, clampi(y + k, 0, h - 1), w);
        for (int x = 0; x < w; ++x) dst[x] += t * row[x];
      }
    }
  }
  return out;
}

void sobel(std::span<const float> p, Extent ext, std::span<float> gx,
           std::span<float> gy) {
  const int w = ext.width, h = ext.height;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const float* rm = p.data() + at(0, clampi(y - 1, 0, h - 1), w);
    const float* r0 = p.data() + at(0, y, w);
    const float* rp = p.data() + at(0, clampi(y + 1, 0, h - 1), w);
    float* ox = gx.data() + at(0, y, w);
    float* oy = gy.data() + at(0, y, w);
    for (int x = 0; x < w; ++x) {
      const int xm = x > 0 ? x - 1 : 0;
      const int xp = x + 1 < w ? x + 1 : w - 1;
      ox[x] = (rm[xp] - rm[xm]) + 2.0f * (r0[xp] - r0[xm]) + (rp[xp] - rp[xm]);
      oy[x] = (rp[xm] - rm[xm]) + 2.0f * (rp[x] - rm[x]) + (rp[xp] - rm[xp]);
    }
  }
}

std::vector<float> nms(std::span<const float> strength,
                       std::span<const float> orientation, Extent ext) {
  std::vector<float> out(ext.area());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < ext.height; ++y)
    for (int x = 0; x < ext.width; ++x)
      out[at(x, y, ext.width)] =
          nms_pixel(strength, orientation, x, y, ext.width, ext.height);
  return out;
}

std::vector<float> resize_bilinear(std::span<const float> src, Extent from,
                                   Extent to) {
  std::vector<Tap> cols(to.width);
  for (int x = 0; x < to.width; ++x) cols[x] = bilinear_tap(x, from.width, to.width);
  std::vector<float> out(to.area());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < to.height; ++y) {
    const Tap ty = bilinear_tap(y, from.height, to.height);
    const float* r0 = src.data() + at(0, ty.i0, from.width);
    const float* r1 = src.data() + at(0, ty.i1, from.width);
    float* dst = out.data() + at(0, y, to.width);
    for (int x = 0; x < to.width; ++x) {
      const Tap& tx = cols[x];
      dst[x] = lerp2(r0[tx.i0], r0[tx.i1], r1[tx.i0], r1[tx.i1], tx.f, ty.f);
    }
  }
  return out;
}

std::vector<float> resize_nearest(std::span<const float> src, Extent from,
                                  Extent to) {
  std::vector<int> cols(to.width);
  for (int x = 0; x < to.width; ++x) cols[x] = nearest_index(x, from.width, to.width);
  std::vector<float> out(to.area());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < to.height; ++y) {
    const float* row = src.data() + at(0, nearest_index(y, from.height, to.height), from.width);
    float* dst = out.data() + at(0, y, to.width);
    for (int x = 0; x < to.width; ++x) dst[x] = row[cols[x]];
  }
  return out;
}

std::vector<float> rotate_bilinear(std::span<const float> src, Extent ext,
                                   double angle_rad) {
  const RotFrame r = rot_frame(ext, angle_rad);
  std::vector<float> out(ext.area());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < ext.height; ++y)
    for (int x = 0; x < ext.width; ++x)
      out[at(x, y, ext.width)] = rotate_bilinear_pixel(src, ext, r, x, y);
  return out;
}

std::vector<float> rotate_nearest(std::span<const float> src, Extent ext,
                                  double angle_rad) {
  const RotFrame r = rot_frame(ext, angle_rad);
  std::vector<float> out(ext.area());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < ext.height; ++y)
    for (int x = 0; x < ext.width; ++x)
      out[at(x, y, ext.width)] = rotate_nearest_pixel(src, ext, r, x, y);
  return out;
}

}  // namespace rbte::kernels
