#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rbte/error.hpp"
#include "rbte/pipeline.hpp"

namespace rbte::dataset {

enum class Split { Train, Val, Test };

std::string_view split_name(Split s) noexcept;
Split parse_split(std::string_view s);

struct Record {
  std::string path;
  std::string class_name;
  std::string source_tag;
  Split split = Split::Train;
  /// Assigned by compose(); -1 until then.
  int class_id = -1;
  /// Class name before relabelling; used to stratify the per-class cap.
  std::string original_class;

  bool operator==(const Record&) const = default;
};

/// CSV with header `path,class_name,source_tag,split`. Composed manifests
/// additionally carry a `class_id` column, which is ignored on input.
struct Manifest {
  std::vector<Record> records;
};

Manifest parse_manifest(std::string_view csv);
Manifest read_manifest(const std::filesystem::path& path);
std::string manifest_to_csv(const Manifest& m);
void write_manifest(const Manifest& m, const std::filesystem::path& path);

/// (source_tag, original class) -> merged class. Must be a function.
class ClassMap {
 public:
  /// Maps every class onto itself.
  static ClassMap identity();

  /// Throws DataError if the key is already mapped elsewhere.
  void add(const std::string& source_tag, const std::string& original,
           const std::string& merged);
  std::optional<std::string> lookup(const std::string& source_tag,
                                    const std::string& original) const;
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  bool identity_ = false;
  std::map<std::pair<std::string, std::string>, std::string> rows_;
};

/// CSV with header `source_tag,original_class,merged_class`. A source_tag
/// of `*` applies to every source.
ClassMap parse_class_map(std::string_view csv);
ClassMap read_class_map(const std::filesystem::path& path);

struct ComposeOptions {
  std::optional<std::size_t> cap;
  std::uint64_t seed = 0;
  /// Unmapped classes raise UnmappedClass; otherwise they are dropped.
  bool strict = true;
};

/// Relabels, caps each (merged class, split) with a seeded round-robin over
/// its original classes, and assigns dense class ids by sorted merged name.
/// Record order is preserved. Throws on duplicate paths within a split.
Manifest compose(std::span<const Manifest> inputs, const ClassMap& map,
                 const ComposeOptions& opts);

struct Stats {
  std::map<std::string, std::map<std::string, std::size_t>> per_class;  // class -> split -> n
  std::map<std::string, std::size_t> per_source;
  std::size_t total = 0;
};

Stats stats(const Manifest& m);
std::vector<std::string> common_classes(const Manifest& a, const Manifest& b);
/// Tab-separated table: class, train, val, test, total; then sources.
std::string format_stats(const Stats& s);

struct BatchOptions {
  std::filesystem::path out_dir;
  /// Relative manifest paths are resolved against this directory.
  std::filesystem::path root;
  int workers = 1;
  std::uint64_t draws_per_image = 1;
  bool strict = false;
};

struct BatchFailure {
  std::string path;
  std::uint64_t index = 0;
  std::string message;
  ErrorKind kind = ErrorKind::Data;
};

struct BatchReport {
  std::size_t written = 0;
  std::vector<BatchFailure> failures;
  std::map<std::string, std::size_t> per_class;
  std::filesystem::path log_path;
};

/// Writes `<out_dir>/<class_name>/<stem>.<index>.png` per (record, draw) and
/// `<out_dir>/decisions.jsonl` sorted by (image id, index). Output is
/// independent of `workers`. Per-record failures are collected; with
/// `strict` the first one is rethrown (same error kind) after the run.
BatchReport run_batch(const Manifest& m, const pipeline::PipelineSpec& spec,
                      const BatchOptions& opts);

/// Worker count from RBTE_NUM_THREADS, else hardware concurrency.
int default_workers();

}  // namespace rbte::dataset
