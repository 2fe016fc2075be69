#include "rbte/thin.hpp"

#include "rbte/kernels.hpp"

namespace rbte::thin {

ThinField nms(const EdgeField& field) {
  const kernels::Extent ext{field.width(), field.height()};
  auto out = kernels::nms(field.strength.pixels(), field.orientation, ext);
  return ThinField{GrayImage(ext.width, ext.height, std::move(out))};
}

}  // namespace rbte::thin
