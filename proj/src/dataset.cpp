#include "tracksketch/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "tracksketch/csv.hpp"
#include "tracksketch/error.hpp"
#include "tracksketch/kmeans.hpp"
#include "tracksketch/parallel.hpp"
#include "tracksketch/rng.hpp"

namespace tracksketch {

std::string make_prompt(const std::string& category) {
  if (category.empty()) throw config_error("prompt needs a non-empty category");
  return "a black and white sketch of a " + category;
}

// --- filtering -----------------------------------------------------------------

FilterResult filter_top_percent(const std::map<std::string, std::vector<ScoredItem>>& scored, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw config_error("filter fraction must be in (0, 1], got " + format_double(fraction));
  }
  FilterResult out;
  if (scored.empty()) {
    out.warnings.push_back("no categories to filter");
    return out;
  }
  for (const auto& [category, items] : scored) {
    if (items.empty()) {
      out.warnings.push_back("category '" + category + "' has no scored items");
      continue;
    }
    for (const auto& it : items) {
      if (!std::isfinite(it.score)) {
        throw Error(ErrorCategory::range, "score for '" + it.id + "' is not finite");
      }
    }
    std::vector<const ScoredItem*> order;
    order.reserve(items.size());
    for (const auto& it : items) order.push_back(&it);
    std::stable_sort(order.begin(), order.end(), [](const ScoredItem* a, const ScoredItem* b) {
      if (a->score != b->score) return a->score > b->score;
      return a->id < b->id;
    });
    const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(items.size()) - 1e-9));
    for (std::size_t i = 0; i < std::min(keep, order.size()); ++i) out.selected.push_back(order[i]->id);
  }
  return out;
}

std::map<std::string, std::vector<ScoredItem>> group_scores(const std::map<std::string, double>& score_by_id,
                                                            const std::map<std::string, std::string>& category_by_id) {
  std::map<std::string, std::vector<ScoredItem>> out;
  for (const auto& [id, score] : score_by_id) {
    const auto it = category_by_id.find(id);
    if (it == category_by_id.end()) {
      throw Error(ErrorCategory::format, "scored id '" + id + "' has no known category");
    }
    out[it->second].push_back({id, score});
  }
  return out;
}

// --- holdout -------------------------------------------------------------------

bool CategoryStats::complete() const {
  for (const auto* v : {&clip_i2t_gt, &clip_i2i_gt_tracking, &cd_gt_tracking, &ssim_gt_tracking}) {
    if (!v->has_value() || !std::isfinite(**v)) return false;
  }
  return true;
}

std::array<double, kCategoryFeatureCount> CategoryStats::features() const {
  if (!complete()) throw Error(ErrorCategory::incomplete_stats, "category '" + category + "' has missing stats");
  return {*clip_i2t_gt, *clip_i2i_gt_tracking, *cd_gt_tracking, *ssim_gt_tracking};
}

namespace {

const std::vector<std::string>& stats_header() {
  static const std::vector<std::string> h{"category", "clip_i2t_gt", "clip_i2i_gt_tracking", "cd_gt_tracking",
                                          "ssim_gt_tracking"};
  return h;
}

std::optional<double> optional_cell(const std::string& key, const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return parse_double(key, cell);
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::vector<CategoryStats> read_category_stats_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCategory::format, "category stats CSV is empty");
  if (split_csv_line(line) != stats_header()) {
    throw Error(ErrorCategory::format, "unexpected category stats header: " + line);
  }
  std::vector<CategoryStats> out;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != stats_header().size()) {
      throw Error(ErrorCategory::format, "category stats line " + std::to_string(line_number) + ": expected 5 fields");
    }
    try {
      CategoryStats s;
      s.category = f[0];
      s.clip_i2t_gt = optional_cell(stats_header()[1], f[1]);
      s.clip_i2i_gt_tracking = optional_cell(stats_header()[2], f[2]);
      s.cd_gt_tracking = optional_cell(stats_header()[3], f[3]);
      s.ssim_gt_tracking = optional_cell(stats_header()[4], f[4]);
      out.push_back(std::move(s));
    } catch (const Error& e) {
      throw Error(ErrorCategory::format, "category stats line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

void write_category_stats_csv(std::ostream& out, const std::vector<CategoryStats>& stats) {
  const auto& h = stats_header();
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << '\n';
  for (const auto& s : stats) {
    out << csv_field(s.category) << ',' << cell(s.clip_i2t_gt) << ',' << cell(s.clip_i2i_gt_tracking) << ','
        << cell(s.cd_gt_tracking) << ',' << cell(s.ssim_gt_tracking) << '\n';
  }
}

HoldoutSplit holdout_kmeans(const std::vector<CategoryStats>& stats, std::size_t k, std::uint64_t seed) {
  std::vector<std::string> offenders;
  std::set<std::string> seen;
  for (const auto& s : stats) {
    if (s.category.empty()) throw config_error("category stats entry with an empty name");
    if (!seen.insert(s.category).second) throw config_error("duplicate category stats for '" + s.category + "'");
    if (!s.complete()) offenders.push_back(s.category);
  }
  if (!offenders.empty()) {
    std::string list;
    for (const auto& o : offenders) list += (list.empty() ? "" : ", ") + o;
    throw Error(ErrorCategory::incomplete_stats, "incomplete stats for: " + list);
  }
  if (k == 0) throw config_error("holdout needs k >= 1");
  if (stats.size() < k) {
    throw config_error("holdout needs at least " + std::to_string(k) + " categories, got " +
                       std::to_string(stats.size()));
  }

  std::vector<FeatureVector> points;
  points.reserve(stats.size());
  for (const auto& s : stats) {
    const auto f = s.features();
    points.emplace_back(f.begin(), f.end());
  }
  const KMeansResult km = kmeans(standardize(points), k, derive_seed(seed, "kmeans"));

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < stats.size(); ++i) members[km.assignment[i]].push_back(i);

  HoldoutSplit split;
  Rng rng(derive_seed(seed, "holdout"));
  std::set<std::size_t> held;
  for (std::size_t c = 0; c < k; ++c) {
    if (members[c].empty()) throw Error(ErrorCategory::insufficient_data, "cluster " + std::to_string(c) + " is empty");
    const auto pick = rng.uniform_int(0, static_cast<std::int64_t>(members[c].size()) - 1);
    const std::size_t idx = members[c][static_cast<std::size_t>(pick)];
    split.held_out.push_back(stats[idx].category);
    held.insert(idx);
  }
  for (std::size_t i = 0; i < stats.size(); ++i) {
    split.cluster[stats[i].category] = km.assignment[i];
    if (!held.contains(i)) split.training.push_back(stats[i].category);
  }
  return split;
}

nlohmann::json to_json(const HoldoutSplit& split) {
  nlohmann::json clusters = nlohmann::json::object();
  for (const auto& [category, c] : split.cluster) clusters[category] = c;
  return {{"held_out", split.held_out}, {"training", split.training}, {"cluster", std::move(clusters)}};
}

// --- manifest --------------------------------------------------------------------

nlohmann::json to_json(const ManifestEntry& e) {
  return {{"schema_version", kManifestSchemaVersion},
          {"sample_id", e.sample_id},
          {"category", e.category},
          {"prompt", e.prompt},
          {"empty_prompt", e.empty_prompt},
          {"source_id", e.source_id},
          {"clean_path", e.clean_path},
          {"noisy_path", e.noisy_path},
          {"seed", e.seed},
          {"augment_report", to_json(e.augment_report)}};
}

ManifestEntry manifest_entry_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kManifestSchemaVersion) {
      throw Error(ErrorCategory::format, "unsupported manifest schema_version " + std::to_string(version));
    }
    ManifestEntry e;
    e.sample_id = j.at("sample_id").get<std::string>();
    e.category = j.at("category").get<std::string>();
    e.prompt = j.at("prompt").get<std::string>();
    e.empty_prompt = j.value("empty_prompt", false);
    e.source_id = j.value("source_id", std::string());
    e.clean_path = j.at("clean_path").get<std::string>();
    e.noisy_path = j.at("noisy_path").get<std::string>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.augment_report = report_from_json(j.at("augment_report"));
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCategory::format, std::string("malformed manifest entry: ") + ex.what());
  }
}

void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& entries) {
  for (const auto& e : entries) out << to_json(e).dump() << '\n';
}

std::vector<ManifestEntry> read_manifest(std::istream& in) {
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(manifest_entry_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCategory::format, "manifest line " + std::to_string(line_number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.category(), "manifest line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ManifestEntry> read_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open manifest " + path.string());
  return read_manifest(in);
}

// --- options ---------------------------------------------------------------------

void DatasetOptions::validate() const {
  augment.validate();
  render.validate();
  if (!(empty_prompt_fraction >= 0.0 && empty_prompt_fraction <= 1.0)) {
    throw config_error("dataset.empty_prompt_fraction must be in [0, 1]");
  }
}

bool set_dataset_option(DatasetOptions& opts, const std::string& key, const std::string& value) {
  if (key == "seed") {
    const long long v = parse_integer(key, value);
    if (v < 0) throw config_error("seed must be non-negative");
    opts.seed = static_cast<std::uint64_t>(v);
  } else if (key == "render.size") {
    opts.render.size = static_cast<int>(parse_integer(key, value));
  } else if (key == "render.stroke_width") {
    opts.render.stroke_width = parse_double(key, value);
  } else if (key == "render.supersample") {
    opts.render.supersample = static_cast<int>(parse_integer(key, value));
  } else if (key == "dataset.empty_prompt") {
    opts.empty_prompt_enabled = parse_bool(key, value);
  } else if (key == "dataset.empty_prompt_fraction") {
    opts.empty_prompt_fraction = parse_double(key, value);
  } else {
    return set_augment_option(opts.augment, key, value);
  }
  return true;
}

KeyValues dataset_options(const DatasetOptions& opts) {
  KeyValues kv{{"seed", std::to_string(opts.seed)},
               {"render.size", std::to_string(opts.render.size)},
               {"render.stroke_width", format_double(opts.render.stroke_width)},
               {"render.supersample", std::to_string(opts.render.supersample)},
               {"dataset.empty_prompt", opts.empty_prompt_enabled ? "true" : "false"},
               {"dataset.empty_prompt_fraction", format_double(opts.empty_prompt_fraction)}};
  for (auto& entry : augment_options(opts.augment)) kv.push_back(std::move(entry));
  return kv;
}

std::uint64_t sample_seed(std::uint64_t global_seed, std::size_t index) { return derive_seed(global_seed, index); }

std::string sample_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", index);
  return buf;
}

// --- build -----------------------------------------------------------------------

namespace {

void require_normalized(const Sketch& s, std::size_t index) {
  for (const auto& stroke : s.strokes) {
    for (const Point& p : stroke.points) {
      if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
        throw Error(ErrorCategory::range, "corpus sketch " + std::to_string(index) + " is not on the unit canvas");
      }
    }
  }
}

void remove_quietly(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::remove(p, ec);
}

}  // namespace

std::vector<ManifestEntry> build_pairs(const std::vector<Sketch>& corpus, const DatasetOptions& opts,
                                       const std::filesystem::path& out_dir) {
  opts.validate();
  if (corpus.empty()) throw config_error("cannot build a dataset from an empty corpus");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].point_count() == 0) throw Error(ErrorCategory::empty_sketch, "corpus sketch " + std::to_string(i) + " is empty");
    require_normalized(corpus[i], i);
    make_prompt(corpus[i].category);
  }

  const std::filesystem::path images = out_dir / "images";
  std::error_code ec;
  std::filesystem::create_directories(images, ec);
  if (ec) throw Error(ErrorCategory::io, "cannot create " + images.string() + ": " + ec.message());

  const std::filesystem::path manifest_path = out_dir / "manifest.jsonl";
  std::vector<ManifestEntry> entries(corpus.size());
  std::vector<char> wrote_clean(corpus.size(), 0);
  std::vector<char> wrote_noisy(corpus.size(), 0);

  auto cleanup = [&] {
    remove_quietly(manifest_path);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (wrote_clean[i]) remove_quietly(out_dir / entries[i].clean_path);
      if (wrote_noisy[i]) remove_quietly(out_dir / entries[i].noisy_path);
    }
  };

  try {
    parallel_for(corpus.size(), opts.threads, [&](std::size_t i) {
      ManifestEntry& e = entries[i];
      e.sample_id = sample_id(i);
      e.category = corpus[i].category;
      e.prompt = make_prompt(e.category);
      e.source_id = corpus[i].source_id;
      e.seed = sample_seed(opts.seed, i);
      e.clean_path = "images/" + e.sample_id + "_clean.png";
      e.noisy_path = "images/" + e.sample_id + "_noisy.png";
      if (opts.empty_prompt_enabled) {
        e.empty_prompt = Rng(derive_seed(e.seed, "prompt")).bernoulli(opts.empty_prompt_fraction);
      }
      Augmented noisy = apply(corpus[i], opts.augment, e.seed);
      e.augment_report = std::move(noisy.report);
      write_png(render(corpus[i], opts.render), (out_dir / e.clean_path).string());
      wrote_clean[i] = 1;
      write_png(render(noisy.sketch, opts.render), (out_dir / e.noisy_path).string());
      wrote_noisy[i] = 1;
    });

    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::io, "cannot open " + manifest_path.string() + " for writing");
    write_manifest(out, entries);
    out.close();
    if (!out) throw Error(ErrorCategory::io, "failed writing " + manifest_path.string());

    KeyValues snapshot = dataset_options(opts);
    snapshot.emplace_back("dataset.corpus_size", std::to_string(corpus.size()));
    const std::filesystem::path snapshot_path = out_dir / "config_snapshot.txt";
    std::ofstream snap(snapshot_path, std::ios::binary | std::ios::trunc);
    snap << format_key_values(snapshot);
    snap.close();
    if (!snap) throw Error(ErrorCategory::io, "failed writing " + snapshot_path.string());
  } catch (...) {
    cleanup();
    throw;
  }
  return entries;
}

}  // namespace tracksketch
