#pragma once

#include <vector>

#include "rbte/image.hpp"

namespace rbte {

/// Edge strength plus per-pixel gradient orientation in [0, pi).
struct EdgeField {
  GrayImage strength;
  std::vector<float> orientation;

  EdgeField() = default;
  EdgeField(GrayImage s, std::vector<float> o);
  /// All-zero field.
  EdgeField(int width, int height);

  int width() const noexcept { return strength.width(); }
  int height() const noexcept { return strength.height(); }

  bool operator==(const EdgeField&) const = default;
};

/// Maps any angle (radians) onto [0, pi). Opposite directions fold together.
float fold_angle(double theta) noexcept;

}  // namespace rbte
