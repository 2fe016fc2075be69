// rbte: command-line front end for rBTE generation, dataset manifests and
// sketch preprocessing.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 I/O error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbte/config.hpp"
#include "rbte/dataset.hpp"
#include "rbte/error.hpp"
#include "rbte/io.hpp"
#include "rbte/pipeline.hpp"
#include "rbte/sketch.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

rbte::pipeline::PipelineSpec load_spec(const std::string& config,
                                       const std::optional<std::uint64_t>& seed) {
  auto spec = config.empty() ? rbte::pipeline::PipelineSpec{}
                             : rbte::pipeline::load_spec(config);
  if (seed) spec.seed = *seed;
  spec.validate();
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rbte: randomized binary thin edges for sketch recognition"};
  app.require_subcommand(1);

  // gen
  std::string gen_image, gen_out, gen_config, gen_log, gen_id;
  std::optional<std::uint64_t> gen_seed;
  std::uint64_t gen_index = 0;
  auto* gen = app.add_subcommand("gen", "Transform one image into an rBTE");
  gen->add_option("image", gen_image, "Input image (PNG/PGM/PPM)")->required();
  gen->add_option("-o,--output", gen_out, "Output PNG")->required();
  gen->add_option("--config", gen_config, "Pipeline config (JSON)");
  gen->add_option("--seed", gen_seed, "Global seed (overrides config)");
  gen->add_option("--index", gen_index, "Draw index");
  gen->add_option("--id", gen_id, "Image id used for seeding (default: path)");
  gen->add_option("--log", gen_log, "Append the decision to this JSON-lines file");

  // batch
  std::string batch_manifest, batch_out, batch_config, batch_root;
  std::optional<std::uint64_t> batch_seed;
  int batch_workers = rbte::dataset::default_workers();
  std::uint64_t batch_draws = 1;
  bool batch_strict = false;
  auto* batch = app.add_subcommand("batch", "Generate rBTEs for every manifest record");
  batch->add_option("manifest", batch_manifest, "Manifest CSV")->required();
  batch->add_option("-o,--output", batch_out, "Output directory")->required();
  batch->add_option("--config", batch_config, "Pipeline config (JSON)");
  batch->add_option("--seed", batch_seed, "Global seed (overrides config)");
  batch->add_option("--workers", batch_workers, "Worker threads (default RBTE_NUM_THREADS)")
      ->check(CLI::PositiveNumber);
  batch->add_option("--draws", batch_draws, "rBTE draws per image")->check(CLI::PositiveNumber);
  batch->add_option("--root", batch_root,
                    "Directory for relative manifest paths (default: manifest's directory)");
  batch->add_flag("--strict", batch_strict, "Fail on the first per-record error");

  // compose
  std::vector<std::string> comp_inputs;
  std::string comp_out, comp_map;
  std::optional<std::size_t> comp_cap;
  std::uint64_t comp_seed = 0;
  bool comp_drop = false;
  auto* compose = app.add_subcommand("compose", "Merge, relabel and cap manifests");
  compose->add_option("manifests", comp_inputs, "Input manifest CSVs")->required();
  compose->add_option("-o,--output", comp_out, "Output manifest CSV")->required();
  compose->add_option("--map", comp_map, "Class map CSV (default: identity)");
  compose->add_option("--cap", comp_cap, "Maximum records per class and split");
  compose->add_option("--seed", comp_seed, "Seed for cap sampling");
  auto* strict_opt = compose->add_flag("--strict", "Unmapped classes are errors (default)");
  compose->add_flag("--drop-unmapped", comp_drop, "Silently drop unmapped classes")
      ->excludes(strict_opt);

  // stats
  std::string stats_manifest, stats_other;
  auto* st = app.add_subcommand("stats", "Per-class and per-source counts");
  st->add_option("manifest", stats_manifest, "Manifest CSV")->required();
  st->add_option("--other", stats_other, "Second manifest; prints the common classes");

  // sketch-prep
  std::string sk_in, sk_out, sk_polarity = "dark-on-light";
  bool sk_multi = false;
  std::vector<double> sk_scales{0.90, 0.65, 0.45};
  auto* sk = app.add_subcommand("sketch-prep", "Thin a sketch for inference");
  sk->add_option("sketch", sk_in, "Sketch image")->required();
  sk->add_option("-o,--output", sk_out, "Output PNG (multi-scale adds .<percent> before the extension)")
      ->required();
  sk->add_option("--polarity", sk_polarity, "dark-on-light or light-on-dark")
      ->check(CLI::IsMember({"dark-on-light", "light-on-dark"}));
  sk->add_flag("--multi", sk_multi, "Emit one map per scale");
  sk->add_option("--scales", sk_scales, "Relative scales for --multi")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      const auto spec = load_spec(gen_config, gen_seed);
      const fs::path image(gen_image);
      auto sample = rbte::pipeline::transform(
          image, gen_id.empty() ? image.generic_string() : gen_id, spec, gen_index);
      rbte::save_binary(sample.map, gen_out);
      if (!gen_log.empty()) rbte::pipeline::log_decisions({&sample.decision, 1}, gen_log);
      std::cout << rbte::pipeline::decision_to_json_line(sample.decision) << '\n';
    } else if (*batch) {
      const auto spec = load_spec(batch_config, batch_seed);
      const auto manifest = rbte::dataset::read_manifest(batch_manifest);
      rbte::dataset::BatchOptions opts;
      opts.out_dir = batch_out;
      opts.root = batch_root.empty() ? fs::path(batch_manifest).parent_path() : fs::path(batch_root);
      opts.workers = batch_workers;
      opts.draws_per_image = batch_draws;
      opts.strict = batch_strict;
      const auto report = rbte::dataset::run_batch(manifest, spec, opts);
      for (const auto& [cls, n] : report.per_class) std::cout << cls << '\t' << n << '\n';
      std::cout << "written\t" << report.written << "\nfailed\t" << report.failures.size() << '\n';
      for (const auto& f : report.failures)
        std::cerr << "failed: " << f.path << " [" << f.index << "]: " << f.message << '\n';
    } else if (*compose) {
      std::vector<rbte::dataset::Manifest> inputs;
      for (const auto& p : comp_inputs) inputs.push_back(rbte::dataset::read_manifest(p));
      const auto map = comp_map.empty() ? rbte::dataset::ClassMap::identity()
                                        : rbte::dataset::read_class_map(comp_map);
      rbte::dataset::ComposeOptions opts;
      opts.cap = comp_cap;
      opts.seed = comp_seed;
      opts.strict = !comp_drop;
      const auto out = rbte::dataset::compose(inputs, map, opts);
      rbte::dataset::write_manifest(out, comp_out);
      std::cout << "records\t" << out.records.size() << '\n';
    } else if (*st) {
      const auto m = rbte::dataset::read_manifest(stats_manifest);
      std::cout << rbte::dataset::format_stats(rbte::dataset::stats(m));
      if (!stats_other.empty()) {
        const auto other = rbte::dataset::read_manifest(stats_other);
        const auto common = rbte::dataset::common_classes(m, other);
        std::cout << "\ncommon_classes\t" << common.size() << '\n';
        for (const auto& c : common) std::cout << c << '\n';
      }
    } else if (*sk) {
      const auto polarity = sk_polarity == "light-on-dark"
                                ? rbte::pipeline::Polarity::LightOnDark
                                : rbte::pipeline::Polarity::DarkOnLight;
      const auto sketch = rbte::load_gray(sk_in);
      if (!sk_multi) {
        rbte::save_binary(rbte::pipeline::prep_sketch_single(sketch, polarity), sk_out);
      } else {
        rbte::pipeline::ScaleSet scales;
        scales.scales = sk_scales;
        const auto maps = rbte::pipeline::prep_sketch_multiscale(sketch, scales, polarity);
        const fs::path out(sk_out);
        for (std::size_t i = 0; i < maps.size(); ++i) {
          const auto pct = std::lround(scales.scales[i] * 100.0);
          const fs::path p = out.parent_path() /
                             (out.stem().string() + "." + std::to_string(pct) +
                              (out.has_extension() ? out.extension().string() : ".png"));
          rbte::save_binary(maps[i], p);
          std::cout << p.string() << '\n';
        }
      }
    }
  } catch (const rbte::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == rbte::ErrorKind::Io ? kExitIo : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
