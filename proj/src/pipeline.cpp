#include "rbte/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "rbte/error.hpp"
#include "rbte/io.hpp"
#include "rbte/thin.hpp"

namespace rbte::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void PipelineSpec::validate() const {
  edge_sources.validate();
  geom.validate();
  if (estimator_pool.empty()) throw DataError("estimator pool is empty");
}

SampleChoices draw_choices(const PipelineSpec& spec, Rng& rng) {
  SampleChoices c;
  c.source_index = detect::pick_source(spec.edge_sources, rng);
  c.method = binarize::pick_thresholder(rng, spec.estimator_pool);
  const auto& src = spec.edge_sources.sources[c.source_index];
  if (const auto* b = std::get_if<detect::BuiltinDetectorConfig>(&src))
    c.sigma = detect::sample_sigma(*b, rng);
  else
    rng.uniform01();  // same stream length for every source kind
  c.geom = geom::sample_geom(rng, spec.geom);
  return c;
}

namespace {

// Resampling lowers the peak below 1, which would make the clamped high
// threshold min(1.5t, 1) unreachable; restore the unit maximum.
thin::ThinField rescale_to_unit_max(thin::ThinField t) {
  auto px = t.strength.pixels();
  float peak = 0.0f;
  for (float v : px) peak = std::max(peak, v);
  if (peak > 0.0f && peak < 1.0f)
    for (auto& v : px) v = std::min(1.0f, v / peak);
  return t;
}

Sample finish(const EdgeField& field, const SampleChoices& c,
              const PipelineSpec& spec, SampleDecision d) {
  d.source_index = c.source_index;
  d.source_tag = detect::source_tag(spec.edge_sources.sources[c.source_index]);
  d.geom = c.geom;

  const EdgeField aug = geom::augment(field, c.geom);
  const thin::ThinField thinned = rescale_to_unit_max(thin::nms(aug));

  binarize::Histogram hist;
  try {
    hist = binarize::histogram(thinned.strength, spec.ignore_zeros);
  } catch (const EmptyHistogram&) {
    d.empty_histogram = true;
    d.threshold = binarize::ThresholdDecision{c.method, 0.0, 0.0, 0.0, true};
    return Sample{BinaryMap(aug.width(), aug.height(), false), std::move(d)};
  }

  d.threshold = binarize::estimate(c.method, hist);
  const BinaryMap edges = binarize::hysteresis(thinned, d.threshold);
  auto filtered = binarize::remove_small_components(edges, spec.min_component);
  d.components_before = filtered.components_before;
  d.components_after = filtered.components_after;
  return Sample{std::move(filtered.map), std::move(d)};
}

}  // namespace

Sample transform(const fs::path& image, const std::string& image_id,
                 const PipelineSpec& spec, std::uint64_t index) {
  SampleDecision d;
  d.image_id = image_id;
  d.index = index;
  d.sample_seed = derive_seed(spec.seed, image_id, index);
  Rng rng(d.sample_seed);
  const SampleChoices c = draw_choices(spec, rng);

  const auto& src = spec.edge_sources.sources[c.source_index];
  EdgeField field;
  if (const auto* ext = std::get_if<detect::ExternalSource>(&src)) {
    field = detect::load_external_edge_map(image, *ext);
  } else {
    d.sigma = c.sigma;
    field = detect::gradient_field(load_gray(image), c.sigma);
  }
  return finish(field, c, spec, std::move(d));
}

Sample transform(const fs::path& image, const PipelineSpec& spec,
                 std::uint64_t index) {
  return transform(image, image.generic_string(), spec, index);
}

Sample transform_field(const EdgeField& field, const std::string& image_id,
                       const PipelineSpec& spec, std::uint64_t index) {
  SampleDecision d;
  d.image_id = image_id;
  d.index = index;
  d.sample_seed = derive_seed(spec.seed, image_id, index);
  Rng rng(d.sample_seed);
  const SampleChoices c = draw_choices(spec, rng);
  return finish(field, c, spec, std::move(d));
}

std::string decision_to_json_line(const SampleDecision& d) {
  json j;
  j["image_id"] = d.image_id;
  j["index"] = d.index;
  j["sample_seed"] = d.sample_seed;
  j["source_index"] = d.source_index;
  j["source_tag"] = d.source_tag;
  j["sigma"] = d.sigma ? json(*d.sigma) : json(nullptr);
  j["geom"] = {{"angle_deg", d.geom.angle_deg},
               {"crop_area_frac", d.geom.crop_area_frac},
               {"crop_aspect", d.geom.crop_aspect},
               {"crop_x", d.geom.crop_x},
               {"crop_y", d.geom.crop_y},
               {"hflip", d.geom.hflip},
               {"out_side_resize", d.geom.out_side_resize},
               {"out_side_final", d.geom.out_side_final}};
  j["threshold"] = {{"method", binarize::method_name(d.threshold.method)},
                    {"t", d.threshold.t},
                    {"low", d.threshold.low},
                    {"high", d.threshold.high},
                    {"converged", d.threshold.converged}};
  j["empty_histogram"] = d.empty_histogram;
  j["components_before"] = d.components_before;
  j["components_after"] = d.components_after;
  return j.dump();
}

SampleDecision decision_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed decision record: ") + e.what());
  }
  try {
    SampleDecision d;
    d.image_id = j.at("image_id").get<std::string>();
    d.index = j.at("index").get<std::uint64_t>();
    d.sample_seed = j.at("sample_seed").get<std::uint64_t>();
    d.source_index = j.at("source_index").get<std::size_t>();
    d.source_tag = j.at("source_tag").get<std::string>();
    if (!j.at("sigma").is_null()) d.sigma = j.at("sigma").get<double>();
    const auto& g = j.at("geom");
    d.geom.angle_deg = g.at("angle_deg").get<double>();
    d.geom.crop_area_frac = g.at("crop_area_frac").get<double>();
    d.geom.crop_aspect = g.at("crop_aspect").get<double>();
    d.geom.crop_x = g.at("crop_x").get<double>();
    d.geom.crop_y = g.at("crop_y").get<double>();
    d.geom.hflip = g.at("hflip").get<bool>();
    d.geom.out_side_resize = g.at("out_side_resize").get<int>();
    d.geom.out_side_final = g.at("out_side_final").get<int>();
    const auto& t = j.at("threshold");
    d.threshold.method = binarize::parse_method(t.at("method").get<std::string>());
    d.threshold.t = t.at("t").get<double>();
    d.threshold.low = t.at("low").get<double>();
    d.threshold.high = t.at("high").get<double>();
    d.threshold.converged = t.at("converged").get<bool>();
    d.empty_histogram = j.at("empty_histogram").get<bool>();
    d.components_before = j.at("components_before").get<std::size_t>();
    d.components_after = j.at("components_after").get<std::size_t>();
    return d;
  } catch (const json::exception& e) {
    throw DataError(std::string("incomplete decision record: ") + e.what());
  }
}

void log_decisions(std::span<const SampleDecision> decisions, const fs::path& path) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open decision log '" + path.string() + "'");
  for (const auto& d : decisions) out << decision_to_json_line(d) << '\n';
  if (!out) throw IoError("failed writing decision log '" + path.string() + "'");
}

std::vector<SampleDecision> read_decisions(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open decision log '" + path.string() + "'");
  std::vector<SampleDecision> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(decision_from_json_line(line));
  return out;
}

}  // namespace rbte::pipeline
