#pragma once

#include "rbte/field.hpp"

namespace rbte::thin {

/// NMS output: suppressed strength with the same dimensions as the input.
struct ThinField {
  GrayImage strength;

  bool operator==(const ThinField&) const = default;
};

/// Keeps a pixel iff its strength is strictly greater than both neighbours
/// along the (4-bin quantized) gradient direction. Flat plateaus vanish.
ThinField nms(const EdgeField& field);

}  // namespace rbte::thin
