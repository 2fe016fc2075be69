#pragma once

#include <filesystem>
#include <string>

#include "rbte/pipeline.hpp"

namespace rbte::pipeline {

/// JSON config mirroring PipelineSpec. Missing keys keep their defaults.
///
///   {
///     "seed": 0,
///     "edge_sources": [ {"type": "builtin", "sigma_range": [1, 5]},
///                       {"type": "external", "tag": "hed", "dir": ""} ],
///     "geom": { "angle_deg": [-5, 5], "crop_area": [0.8, 1.0],
///               "crop_aspect": [0.75, 1.3333333333333333],
///               "hflip_prob": 0.5, "resize_side": 256, "final_side": 224 },
///     "estimators": ["otsu", "yen", "li", "isodata", "mean"],
///     "min_component": 10,
///     "ignore_zeros": true
///   }
PipelineSpec spec_from_json_text(const std::string& text);
PipelineSpec load_spec(const std::filesystem::path& path);
std::string spec_to_json_text(const PipelineSpec& spec);

}  // namespace rbte::pipeline
