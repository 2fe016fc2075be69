#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbte/binarize.hpp"
#include "rbte/detect.hpp"
#include "rbte/geom.hpp"
#include "rbte/image.hpp"

namespace rbte::pipeline {

struct PipelineSpec {
  detect::EdgeSourceSet edge_sources{{detect::BuiltinDetectorConfig{}}};
  geom::GeomRanges geom;
  std::vector<binarize::Method> estimator_pool{binarize::kAllMethods.begin(),
                                               binarize::kAllMethods.end()};
  std::size_t min_component = 10;
  std::uint64_t seed = 0;
  /// Drop exact zeros before threshold estimation (NMS output is mostly 0).
  bool ignore_zeros = true;

  void validate() const;
};

/// Every random choice for one sample, drawn in a fixed order from the
/// per-sample generator: source, estimator, sigma, then the geometry.
struct SampleChoices {
  std::size_t source_index = 0;
  binarize::Method method = binarize::Method::Otsu;
  double sigma = 0.0;  // drawn even for external sources
  geom::GeomParams geom;
};

SampleChoices draw_choices(const PipelineSpec& spec, Rng& rng);

/// Reproducibility record for one (image id, draw index).
struct SampleDecision {
  std::string image_id;
  std::uint64_t index = 0;
  std::uint64_t sample_seed = 0;
  std::size_t source_index = 0;
  std::string source_tag;
  std::optional<double> sigma;  // built-in detector only
  geom::GeomParams geom;
  binarize::ThresholdDecision threshold;
  bool empty_histogram = false;
  std::size_t components_before = 0;
  std::size_t components_after = 0;

  bool operator==(const SampleDecision&) const = default;
};

struct Sample {
  BinaryMap map;
  SampleDecision decision;
};

/// detect -> geom -> thin -> binarize for one draw. The generator is seeded
/// from (spec.seed, image_id, index). An empty threshold histogram yields an
/// all-false map with `empty_histogram` set.
Sample transform(const std::filesystem::path& image, const std::string& image_id,
                 const PipelineSpec& spec, std::uint64_t index);

/// Uses the path's generic string as the image id.
Sample transform(const std::filesystem::path& image, const PipelineSpec& spec,
                 std::uint64_t index);

/// Same as transform() but starting from an already computed edge field,
/// with the source and sigma choices taken as given.
Sample transform_field(const EdgeField& field, const std::string& image_id,
                       const PipelineSpec& spec, std::uint64_t index);

/// One JSON object, fixed field order, no trailing newline.
std::string decision_to_json_line(const SampleDecision& d);
SampleDecision decision_from_json_line(const std::string& line);

/// Appends one line per decision; creates the file if needed (an empty span
/// still creates an empty file).
void log_decisions(std::span<const SampleDecision> decisions,
                   const std::filesystem::path& path);

std::vector<SampleDecision> read_decisions(const std::filesystem::path& path);

}  // namespace rbte::pipeline
