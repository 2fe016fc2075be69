#include "rbte/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rbte/error.hpp"

namespace rbte::pipeline {

namespace {

using json = nlohmann::ordered_json;

void read_range(const json& j, const char* key, double& lo, double& hi) {
  if (!j.contains(key)) return;
  const auto& r = j.at(key);
  if (!r.is_array() || r.size() != 2)
    throw DataError(std::string("config: '") + key + "' must be [lo, hi]");
  lo = r[0].get<double>();
  hi = r[1].get<double>();
}

detect::EdgeSource read_source(const json& j) {
  const auto type = j.value("type", std::string("builtin"));
  if (type == "builtin") {
    detect::BuiltinDetectorConfig b;
    read_range(j, "sigma_range", b.sigma_lo, b.sigma_hi);
    return b;
  }
  if (type == "external") {
    detect::ExternalSource e;
    e.tag = j.at("tag").get<std::string>();
    e.dir = j.value("dir", std::string());
    return e;
  }
  throw DataError("config: unknown edge source type '" + type + "'");
}

}  // namespace

PipelineSpec spec_from_json_text(const std::string& text) {
  PipelineSpec spec;
  try {
    const json j = json::parse(text);
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("edge_sources")) {
      spec.edge_sources.sources.clear();
      for (const auto& s : j.at("edge_sources"))
        spec.edge_sources.sources.push_back(read_source(s));
    }
    if (j.contains("geom")) {
      const auto& g = j.at("geom");
      read_range(g, "angle_deg", spec.geom.angle_lo, spec.geom.angle_hi);
      read_range(g, "crop_area", spec.geom.area_lo, spec.geom.area_hi);
      read_range(g, "crop_aspect", spec.geom.aspect_lo, spec.geom.aspect_hi);
      spec.geom.hflip_prob = g.value("hflip_prob", spec.geom.hflip_prob);
      spec.geom.resize_side = g.value("resize_side", spec.geom.resize_side);
      spec.geom.final_side = g.value("final_side", spec.geom.final_side);
    }
    if (j.contains("estimators")) {
      spec.estimator_pool.clear();
      for (const auto& m : j.at("estimators"))
        spec.estimator_pool.push_back(binarize::parse_method(m.get<std::string>()));
    }
    spec.min_component = j.value("min_component", spec.min_component);
    spec.ignore_zeros = j.value("ignore_zeros", spec.ignore_zeros);
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  spec.validate();
  return spec;
}

PipelineSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_json_text(ss.str());
}

std::string spec_to_json_text(const PipelineSpec& spec) {
  json j;
  j["seed"] = spec.seed;
  json sources = json::array();
  for (const auto& s : spec.edge_sources.sources) {
    if (const auto* b = std::get_if<detect::BuiltinDetectorConfig>(&s))
      sources.push_back({{"type", "builtin"}, {"sigma_range", {b->sigma_lo, b->sigma_hi}}});
    else {
      const auto& e = std::get<detect::ExternalSource>(s);
      sources.push_back({{"type", "external"}, {"tag", e.tag}, {"dir", e.dir.string()}});
    }
  }
  j["edge_sources"] = sources;
  j["geom"] = {{"angle_deg", {spec.geom.angle_lo, spec.geom.angle_hi}},
               {"crop_area", {spec.geom.area_lo, spec.geom.area_hi}},
               {"crop_aspect", {spec.geom.aspect_lo, spec.geom.aspect_hi}},
               {"hflip_prob", spec.geom.hflip_prob},
               {"resize_side", spec.geom.resize_side},
               {"final_side", spec.geom.final_side}};
  json pool = json::array();
  for (auto m : spec.estimator_pool) pool.push_back(binarize::method_name(m));
  j["estimators"] = pool;
  j["min_component"] = spec.min_component;
  j["ignore_zeros"] = spec.ignore_zeros;
  return j.dump(2);
}

}  // namespace rbte::pipeline
