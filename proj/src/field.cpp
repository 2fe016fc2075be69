#include "rbte/field.hpp"

#include <cmath>
#include <numbers>

#include "rbte/error.hpp"

namespace rbte {

EdgeField::EdgeField(GrayImage s, std::vector<float> o)
    : strength(std::move(s)), orientation(std::move(o)) {
  if (orientation.size() != strength.size())
    throw DataError("edge field orientation size does not match strength");
  for (float t : orientation)
    if (!(t >= 0.0f && static_cast<double>(t) < std::numbers::pi))
      throw DataError("edge field orientation outside [0,pi)");
}

EdgeField::EdgeField(int width, int height)
    : strength(width, height, 0.0f),
      orientation(static_cast<std::size_t>(width) * height, 0.0f) {}

float fold_angle(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  double t = std::fmod(theta, pi);
  if (t < 0.0) t += pi;
  float f = static_cast<float>(t);
  // Rounding to float can land on (or above) pi; that direction is 0.
  if (!(static_cast<double>(f) < pi) || f <= 0.0f) f = 0.0f;
  return f;
}

}  // namespace rbte
