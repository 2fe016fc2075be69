#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "rbte/field.hpp"
#include "rbte/random.hpp"

namespace rbte::detect {

/// Built-in Gaussian + Sobel detector; sigma drawn uniformly per sample.
struct BuiltinDetectorConfig {
  double sigma_lo = 1.0;
  double sigma_hi = 5.0;

  void validate() const;
  bool operator==(const BuiltinDetectorConfig&) const = default;
};

/// Precomputed edge maps stored as `<dir>/<image-stem>.<tag>.png`. An empty
/// `dir` means the image's own directory.
struct ExternalSource {
  std::string tag;
  std::filesystem::path dir;

  bool operator==(const ExternalSource&) const = default;
};

using EdgeSource = std::variant<BuiltinDetectorConfig, ExternalSource>;

struct EdgeSourceSet {
  std::vector<EdgeSource> sources;

  void validate() const;
};

/// Short label for logs: "builtin" or the external tag.
std::string source_tag(const EdgeSource& src);

/// Blur (truncated Gaussian, radius ceil(3 sigma)), 3x3 Sobel, magnitude
/// normalized by its global maximum. Orientation is atan2(gy, gx) folded.
EdgeField gradient_field(const GrayImage& img, double sigma);

/// Orientation of a precomputed edge-strength map. The map is smoothed
/// (sigma), differentiated with Sobel and the gradient structure tensor is
/// smoothed again with the same sigma; the result is its dominant direction,
/// which is well defined on ridge centres where the plain gradient vanishes.
std::vector<float> ridge_orientation(const GrayImage& map, double sigma = 1.0);

std::filesystem::path edge_map_path(const std::filesystem::path& image,
                                    const ExternalSource& src);

/// Throws MissingEdgeMap when the sibling file does not exist.
EdgeField load_external_edge_map(const std::filesystem::path& image,
                                 const ExternalSource& src);

std::size_t pick_source(const EdgeSourceSet& set, Rng& rng);

double sample_sigma(const BuiltinDetectorConfig& cfg, Rng& rng);

}  // namespace rbte::detect
