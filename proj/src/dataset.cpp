#include "rbte/dataset.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "rbte/error.hpp"
#include "rbte/io.hpp"

namespace rbte::dataset {

namespace fs = std::filesystem;

namespace {

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerated.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; any = true; break;
      case ',': row.push_back(std::move(field)); field.clear(); any = true; break;
      case '\r': break;
      case '\n':
        if (any || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
        break;
      default: field += c; any = true;
    }
  }
  if (quoted) throw DataError("csv: unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed to write '" + path.string() + "'");
}

std::size_t column(const std::vector<std::string>& header, const std::string& name,
                   bool required) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    if (required) throw DataError("csv: missing column '" + name + "'");
    return header.size();
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::string_view split_name(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw DataError("unknown split '" + std::string(s) + "'");
}

Manifest parse_manifest(std::string_view csv) {
  const auto rows = parse_csv(csv);
  Manifest m;
  if (rows.empty()) return m;
  const auto& hdr = rows.front();
  const std::size_t c_path = column(hdr, "path", true);
  const std::size_t c_class = column(hdr, "class_name", true);
  const std::size_t c_src = column(hdr, "source_tag", true);
  const std::size_t c_split = column(hdr, "split", true);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != hdr.size())
      throw DataError("csv: row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " fields, expected " +
                      std::to_string(hdr.size()));
    Record rec;
    rec.path = row[c_path];
    rec.class_name = row[c_class];
    rec.source_tag = row[c_src];
    rec.split = parse_split(row[c_split]);
    rec.original_class = rec.class_name;
    if (rec.path.empty()) throw DataError("csv: empty path on row " + std::to_string(r + 1));
    m.records.push_back(std::move(rec));
  }
  return m;
}

Manifest read_manifest(const fs::path& path) { return parse_manifest(read_text(path)); }

std::string manifest_to_csv(const Manifest& m) {
  const bool with_ids = std::any_of(m.records.begin(), m.records.end(),
                                    [](const Record& r) { return r.class_id >= 0; });
  std::string out = with_ids ? "path,class_id,class_name,source_tag,split\n"
                             : "path,class_name,source_tag,split\n";
  for (const auto& r : m.records) {
    out += csv_field(r.path);
    out += ',';
    if (with_ids) {
      out += std::to_string(r.class_id);
      out += ',';
    }
    out += csv_field(r.class_name) + ',' + csv_field(r.source_tag) + ',';
    out += split_name(r.split);
    out += '\n';
  }
  return out;
}

void write_manifest(const Manifest& m, const fs::path& path) {
  write_text(path, manifest_to_csv(m));
}

// ------------------------------------------------------------- ClassMap

ClassMap ClassMap::identity() {
  ClassMap m;
  m.identity_ = true;
  return m;
}

void ClassMap::add(const std::string& source_tag, const std::string& original,
                   const std::string& merged) {
  const auto key = std::make_pair(source_tag, original);
  const auto [it, inserted] = rows_.emplace(key, merged);
  if (!inserted && it->second != merged)
    throw DataError("class map is not a function: '" + original + "' (" + source_tag +
                    ") maps to both '" + it->second + "' and '" + merged + "'");
}

std::optional<std::string> ClassMap::lookup(const std::string& source_tag,
                                            const std::string& original) const {
  if (auto it = rows_.find({source_tag, original}); it != rows_.end()) return it->second;
  if (auto it = rows_.find({"*", original}); it != rows_.end()) return it->second;
  if (identity_) return original;
  return std::nullopt;
}

ClassMap parse_class_map(std::string_view csv) {
  const auto rows = parse_csv(csv);
  ClassMap m;
  if (rows.empty()) return m;
  const auto& hdr = rows.front();
  const std::size_t c_src = column(hdr, "source_tag", true);
  const std::size_t c_orig = column(hdr, "original_class", true);
  const std::size_t c_merged = column(hdr, "merged_class", true);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != hdr.size())
      throw DataError("class map: row " + std::to_string(r + 1) + " has wrong field count");
    m.add(row[c_src], row[c_orig], row[c_merged]);
  }
  return m;
}

ClassMap read_class_map(const fs::path& path) { return parse_class_map(read_text(path)); }

// -------------------------------------------------------------- compose

Manifest compose(std::span<const Manifest> inputs, const ClassMap& map,
                 const ComposeOptions& opts) {
  std::vector<Record> recs;
  std::set<std::pair<Split, std::string>> seen;
  for (const auto& m : inputs)
    for (const auto& r : m.records) {
      auto merged = map.lookup(r.source_tag, r.class_name);
      if (!merged) {
        if (opts.strict) throw UnmappedClass(r.source_tag, r.class_name);
        continue;
      }
      if (!seen.emplace(r.split, r.path).second)
        throw DataError("duplicate path '" + r.path + "' in split '" +
                        std::string(split_name(r.split)) + "'");
      Record out = r;
      out.original_class = r.source_tag + '\x1f' + r.class_name;
      out.class_name = std::move(*merged);
      out.class_id = -1;
      recs.push_back(std::move(out));
    }

  std::vector<char> keep(recs.size(), 1);
  if (opts.cap) {
    std::map<std::pair<std::string, Split>, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < recs.size(); ++i)
      buckets[{recs[i].class_name, recs[i].split}].push_back(i);

    for (auto& [key, idx] : buckets) {
      if (idx.size() <= *opts.cap) continue;
      std::map<std::string, std::vector<std::size_t>> by_orig;
      for (std::size_t i : idx) by_orig[recs[i].original_class].push_back(i);

      Rng rng(derive_seed(opts.seed,
                          key.first + '\x1f' + std::string(split_name(key.second)), 0));
      std::vector<std::vector<std::size_t>*> groups;
      for (auto& [name, g] : by_orig) {
        for (std::size_t i = g.size(); i > 1; --i)
          std::swap(g[i - 1], g[static_cast<std::size_t>(rng.uniform_index(i))]);
        groups.push_back(&g);
      }
      for (std::size_t i : idx) keep[i] = 0;
      std::size_t taken = 0, round = 0;
      while (taken < *opts.cap) {
        bool progressed = false;
        for (auto* g : groups) {
          if (round < g->size() && taken < *opts.cap) {
            keep[(*g)[round]] = 1;
            ++taken;
            progressed = true;
          }
        }
        if (!progressed) break;
        ++round;
      }
    }
  }

  Manifest out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < recs.size(); ++i)
    if (keep[i]) names.insert(recs[i].class_name);
  std::map<std::string, int> ids;
  for (const auto& n : names) ids.emplace(n, static_cast<int>(ids.size()));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (!keep[i]) continue;
    Record r = std::move(recs[i]);
    r.class_id = ids.at(r.class_name);
    r.original_class = r.original_class.substr(r.original_class.find('\x1f') + 1);
    out.records.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- stats

Stats stats(const Manifest& m) {
  Stats s;
  for (const auto& r : m.records) {
    ++s.per_class[r.class_name][std::string(split_name(r.split))];
    ++s.per_source[r.source_tag];
    ++s.total;
  }
  return s;
}

std::vector<std::string> common_classes(const Manifest& a, const Manifest& b) {
  std::set<std::string> sa, sb;
  for (const auto& r : a.records) sa.insert(r.class_name);
  for (const auto& r : b.records) sb.insert(r.class_name);
  std::vector<std::string> out;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
  return out;
}

std::string format_stats(const Stats& s) {
  if (s.total == 0) return {};
  std::ostringstream os;
  os << "class\ttrain\tval\ttest\ttotal\n";
  for (const auto& [name, splits] : s.per_class) {
    auto get = [&](const char* k) {
      auto it = splits.find(k);
      return it == splits.end() ? std::size_t{0} : it->second;
    };
    const std::size_t tr = get("train"), va = get("val"), te = get("test");
    os << name << '\t' << tr << '\t' << va << '\t' << te << '\t' << tr + va + te << '\n';
  }
  os << "\nsource\tcount\n";
  for (const auto& [tag, n] : s.per_source) os << tag << '\t' << n << '\n';
  os << "\ntotal\t" << s.total << '\n';
  return os.str();
}

// ---------------------------------------------------------------- batch

int default_workers() {
  if (const char* env = std::getenv("RBTE_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

BatchReport run_batch(const Manifest& m, const pipeline::PipelineSpec& spec,
                      const BatchOptions& opts) {
  spec.validate();
  if (opts.workers < 1) throw DataError("worker count must be >= 1");

  struct Task {
    std::size_t record;
    std::uint64_t index;
    fs::path out;
  };
  std::vector<Task> tasks;
  tasks.reserve(m.records.size() * opts.draws_per_image);
  for (std::size_t r = 0; r < m.records.size(); ++r)
    for (std::uint64_t k = 0; k < opts.draws_per_image; ++k) {
      const auto& rec = m.records[r];
      const fs::path stem = fs::path(rec.path).stem();
      tasks.push_back({r, k,
                       opts.out_dir / rec.class_name /
                           (stem.string() + "." + std::to_string(k) + ".png")});
    }

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create '" + opts.out_dir.string() + "': " + ec.message());
  for (const auto& rec : m.records) {
    fs::create_directories(opts.out_dir / rec.class_name, ec);
    if (ec) throw IoError("cannot create class directory for '" + rec.class_name + "'");
  }

  // Two records may not write the same output file.
  std::vector<std::string> error(tasks.size());
  std::vector<ErrorKind> kind(tasks.size(), ErrorKind::Data);
  {
    std::set<fs::path> outs;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (!outs.insert(tasks[i].out).second)
        error[i] = "output path collision: " + tasks[i].out.string();
  }

  std::vector<std::optional<pipeline::SampleDecision>> decisions(tasks.size());
  const long long n = static_cast<long long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.workers)
  for (long long i = 0; i < n; ++i) {
    // Kernels called from a worker stay on that worker's thread.
    omp_set_num_threads(1);
    if (!error[i].empty()) continue;
    const Task& t = tasks[i];
    const Record& rec = m.records[t.record];
    try {
      fs::path src(rec.path);
      if (src.is_relative() && !opts.root.empty()) src = opts.root / src;
      auto sample = pipeline::transform(src, rec.path, spec, t.index);
      save_binary(sample.map, t.out);
      decisions[i] = std::move(sample.decision);
    } catch (const Error& e) {
      error[i] = e.what();
      kind[i] = e.kind();
    } catch (const std::exception& e) {
      error[i] = e.what();
    }
  }

  BatchReport report;
  report.log_path = opts.out_dir / "decisions.jsonl";
  std::vector<pipeline::SampleDecision> ok;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (decisions[i]) {
      ok.push_back(std::move(*decisions[i]));
      ++report.written;
      ++report.per_class[m.records[tasks[i].record].class_name];
    } else {
      report.failures.push_back(
          {m.records[tasks[i].record].path, tasks[i].index, error[i], kind[i]});
    }
  }
  std::sort(ok.begin(), ok.end(), [](const auto& a, const auto& b) {
    return std::tie(a.image_id, a.index) < std::tie(b.image_id, b.index);
  });
  fs::remove(report.log_path, ec);
  pipeline::log_decisions(ok, report.log_path);

  if (opts.strict && !report.failures.empty()) {
    const auto& f = report.failures.front();
    throw Error(f.kind, "batch failed for '" + f.path + "' draw " +
                            std::to_string(f.index) + ": " + f.message);
  }
  return report;
}

}  // namespace rbte::dataset
