#include "tracksketch/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "tracksketch/csv.hpp"
#include "tracksketch/parallel.hpp"
#include "tracksketch/quickdraw.hpp"
#include "tracksketch/rng.hpp"

namespace tracksketch {

namespace fs = std::filesystem;

void Settings::validate() const {
  dataset.validate();
  metrics.validate();
  pen.validate();
  canvas.validate();
  if (!(filter_fraction > 0.0 && filter_fraction <= 1.0)) throw config_error("filter.fraction must be in (0, 1]");
}

void set_setting(Settings& s, const std::string& key, const std::string& value) {
  if (key == "canvas.margin") {
    s.canvas.margin = parse_double(key, value);
  } else if (key == "metrics.ssim_window") {
    s.metrics.ssim_window = static_cast<int>(parse_integer(key, value));
  } else if (key == "metrics.ssim_sigma") {
    s.metrics.ssim_sigma = parse_double(key, value);
  } else if (key == "metrics.k1") {
    s.metrics.k1 = parse_double(key, value);
  } else if (key == "metrics.k2") {
    s.metrics.k2 = parse_double(key, value);
  } else if (key == "metrics.cd_threshold") {
    const long long v = parse_integer(key, value);
    if (v < 1 || v > 256) throw config_error("metrics.cd_threshold must be in [1, 256]");
    s.metrics.cd_threshold = static_cast<std::uint8_t>(std::min<long long>(v, 255));
  } else if (key == "track.extension_ratio_threshold") {
    s.pen.extension_ratio_threshold = parse_double(key, value);
  } else if (key == "filter.fraction") {
    s.filter_fraction = parse_double(key, value);
  } else if (!set_dataset_option(s.dataset, key, value)) {
    throw config_error("unknown config key '" + key + "'");
  }
}

KeyValues describe_settings(const Settings& s) {
  KeyValues kv = dataset_options(s.dataset);
  kv.emplace_back("canvas.margin", format_double(s.canvas.margin));
  kv.emplace_back("metrics.ssim_window", std::to_string(s.metrics.ssim_window));
  kv.emplace_back("metrics.ssim_sigma", format_double(s.metrics.ssim_sigma));
  kv.emplace_back("metrics.k1", format_double(s.metrics.k1));
  kv.emplace_back("metrics.k2", format_double(s.metrics.k2));
  kv.emplace_back("metrics.cd_threshold", std::to_string(s.metrics.cd_threshold));
  kv.emplace_back("track.extension_ratio_threshold", format_double(s.pen.extension_ratio_threshold));
  kv.emplace_back("filter.fraction", format_double(s.filter_fraction));
  return kv;
}

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage: return 2;
    case ErrorCategory::io: return 3;
    case ErrorCategory::config: return 4;
    default: return 5;
  }
}

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string config;
  std::vector<std::string> overrides;
};

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

Settings load_settings(const Globals& g) {
  Settings s;
  if (!g.config.empty()) {
    for (const auto& [k, v] : read_key_values_file(g.config)) set_setting(s, k, v);
  }
  for (const auto& item : g.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw config_error("--set expects key=value, got '" + item + "'");
    auto trim = [](std::string t) {
      t.erase(0, t.find_first_not_of(" \t"));
      t.erase(t.find_last_not_of(" \t") + 1);
      return t;
    };
    set_setting(s, trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  if (g.seed) s.dataset.seed = *g.seed;
  s.dataset.threads = resolve_threads(g.threads);
  s.validate();
  return s;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
  return in;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::io, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCategory::io, "failed writing " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCategory::io, "cannot create " + dir.string() + ": " + ec.message());
}

void make_parent(const fs::path& file) {
  if (file.has_parent_path()) make_dir(file.parent_path());
}

KeyValues snapshot_header(const std::string& command, const KeyValues& paths) {
  KeyValues kv{{"command", command}};
  for (const auto& p : paths) kv.push_back(p);
  return kv;
}

void write_snapshot(const fs::path& path, KeyValues kv, const KeyValues& settings) {
  for (const auto& e : settings) kv.push_back(e);
  write_text(path, format_key_values(kv));
}

fs::path snapshot_beside(const fs::path& file) { return fs::path(file.string() + ".config_snapshot.txt"); }

std::vector<Sketch> read_corpus(const std::string& path, const CanvasSpec& canvas) {
  auto in = open_input(path);
  std::vector<Sketch> corpus = read_quickdraw(in);
  for (auto& s : corpus) s = normalize(s, canvas);
  return corpus;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

// --- commands ----------------------------------------------------------------

struct QdImportArgs {
  std::string in, out, sidecar;
};

void run_qd_import(const QdImportArgs& a, const Settings& s, std::ostream& err) {
  std::vector<Sketch> corpus = read_corpus(a.in, s.canvas);
  if (!a.sidecar.empty()) {
    auto side_in = open_input(a.sidecar);
    const auto sidecar = read_sidecar(side_in);
    std::map<std::string, std::string> category_by_id;
    for (const auto& sk : corpus) {
      if (sk.source_id.empty()) throw Error(ErrorCategory::format, "filtering needs key_id on every sketch");
      category_by_id[sk.source_id] = sk.category;
    }
    std::map<std::string, double> score_by_id;
    std::size_t unscored = 0;
    for (const auto& [id, scores] : sidecar) {
      if (scores.clip_i2t) score_by_id[id] = *scores.clip_i2t;
    }
    for (const auto& [id, category] : category_by_id) unscored += score_by_id.contains(id) ? 0 : 1;
    if (unscored > 0) err << "warning: " << unscored << " sketches have no clip_i2t score and are dropped\n";
    const FilterResult filtered = filter_top_percent(group_scores(score_by_id, category_by_id), s.filter_fraction);
    for (const auto& w : filtered.warnings) err << "warning: " << w << '\n';
    const std::set<std::string> keep(filtered.selected.begin(), filtered.selected.end());
    std::erase_if(corpus, [&](const Sketch& sk) { return !keep.contains(sk.source_id); });
  }
  std::string text;
  for (const auto& sk : corpus) text += serialize_quickdraw(sk) + '\n';
  make_parent(a.out);
  write_text(a.out, text);
  KeyValues settings{{"canvas.margin", format_double(s.canvas.margin)}};
  if (!a.sidecar.empty()) settings.emplace_back("filter.fraction", format_double(s.filter_fraction));
  write_snapshot(snapshot_beside(a.out),
                 snapshot_header("qd-import", {{"input", a.in}, {"sidecar", a.sidecar},
                                               {"sketches", std::to_string(corpus.size())}}),
                 settings);
}

struct AugmentArgs {
  std::string in, out;
  bool render = false;
};

void run_augment(const AugmentArgs& a, const Settings& s) {
  const std::vector<Sketch> corpus = read_corpus(a.in, s.canvas);
  const fs::path dir(a.out);
  make_dir(dir);
  if (a.render) make_dir(dir / "images");
  std::vector<std::string> sketches(corpus.size()), reports(corpus.size());
  parallel_for(corpus.size(), s.dataset.threads, [&](std::size_t i) {
    const std::uint64_t seed = sample_seed(s.dataset.seed, i);
    const Augmented aug = apply(corpus[i], s.dataset.augment, seed);
    sketches[i] = serialize_quickdraw(aug.sketch);
    nlohmann::json j{{"sample_id", sample_id(i)},
                     {"source_id", corpus[i].source_id},
                     {"seed", seed},
                     {"augment_report", to_json(aug.report)}};
    reports[i] = j.dump();
    if (a.render) write_png(render(aug.sketch, s.dataset.render), (dir / "images" / (sample_id(i) + "_noisy.png")).string());
  });
  write_text(dir / "augmented.ndjson", join_lines(sketches));
  write_text(dir / "reports.jsonl", join_lines(reports));
  write_snapshot(dir / "config_snapshot.txt", snapshot_header("augment", {{"input", a.in}}),
                 dataset_options(s.dataset));
}

struct RenderArgs {
  std::string in, out;
};

void run_render(const RenderArgs& a, const Settings& s) {
  const std::vector<Sketch> corpus = read_corpus(a.in, s.canvas);
  const fs::path dir(a.out);
  make_dir(dir);
  parallel_for(corpus.size(), s.dataset.threads, [&](std::size_t i) {
    write_png(render(corpus[i], s.dataset.render), (dir / (sample_id(i) + ".png")).string());
  });
  write_snapshot(dir / "config_snapshot.txt", snapshot_header("render", {{"input", a.in}}),
                 {{"canvas.margin", format_double(s.canvas.margin)},
                  {"render.size", std::to_string(s.dataset.render.size)},
                  {"render.stroke_width", format_double(s.dataset.render.stroke_width)},
                  {"render.supersample", std::to_string(s.dataset.render.supersample)}});
}

struct GenDatasetArgs {
  std::string in, out;
  bool empty_prompt = false;
};

void run_gen_dataset(const GenDatasetArgs& a, Settings s) {
  if (a.empty_prompt) s.dataset.empty_prompt_enabled = true;
  const std::vector<Sketch> corpus = read_corpus(a.in, s.canvas);
  build_pairs(corpus, s.dataset, a.out);
}

struct EvalArgs {
  std::string gt, cand, out, sidecar, gt_suffix, cand_suffix;
  bool skip_blank = false;
};

std::string sample_key(std::string stem, const std::string& suffix) {
  if (!suffix.empty()) return stem.substr(0, stem.size() - suffix.size());
  for (const char* s : {"_clean", "_noisy", "_gen"}) {
    const std::string tag(s);
    if (stem.size() > tag.size() && stem.compare(stem.size() - tag.size(), tag.size(), tag) == 0) {
      return stem.substr(0, stem.size() - tag.size());
    }
  }
  return stem;
}

std::map<std::string, fs::path> index_images(const std::string& dir, const std::string& suffix) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCategory::io, "not a directory: " + dir);
  std::map<std::string, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const std::string stem = entry.path().stem().string();
    if (!suffix.empty() && (stem.size() <= suffix.size() || !stem.ends_with(suffix))) continue;
    const std::string key = sample_key(stem, suffix);
    if (!out.emplace(key, entry.path()).second) {
      throw Error(ErrorCategory::format, "two images in " + dir + " map to sample '" + key +
                                             "'; narrow them with a suffix option");
    }
  }
  return out;
}

void run_eval(const EvalArgs& a, const Settings& s, std::ostream& err) {
  const auto gt = index_images(a.gt, a.gt_suffix);
  const auto cand = index_images(a.cand, a.cand_suffix);
  std::map<std::string, NeuralScores> sidecar;
  if (!a.sidecar.empty()) {
    auto in = open_input(a.sidecar);
    sidecar = read_sidecar(in);
  }
  std::vector<std::string> ids;
  for (const auto& [id, path] : gt) {
    if (cand.contains(id)) ids.push_back(id);
  }
  const std::size_t unmatched = gt.size() + cand.size() - 2 * ids.size();
  if (unmatched > 0) err << "warning: " << unmatched << " images have no counterpart and are skipped\n";
  if (ids.empty()) throw Error(ErrorCategory::insufficient_data, "no sample ids match between " + a.gt + " and " + a.cand);

  std::vector<std::optional<MetricsReport>> reports(ids.size());
  parallel_for(ids.size(), s.dataset.threads, [&](std::size_t i) {
    const auto side = sidecar.find(ids[i]);
    const NeuralScores* neural = side == sidecar.end() ? nullptr : &side->second;
    try {
      reports[i] = evaluate_pair(ids[i], read_png(gt.at(ids[i]).string()), read_png(cand.at(ids[i]).string()),
                                 s.metrics, neural);
    } catch (const Error& e) {
      if (e.category() == ErrorCategory::empty_foreground && a.skip_blank) return;
      throw Error(e.category(), "sample " + ids[i] + ": " + e.what());
    }
  });
  std::vector<MetricsReport> kept;
  for (auto& r : reports) {
    if (r) kept.push_back(std::move(*r));
  }
  if (kept.size() < ids.size()) err << "warning: " << ids.size() - kept.size() << " blank samples skipped\n";
  std::ostringstream csv;
  write_report_csv(csv, kept);
  make_parent(a.out);
  write_text(a.out, csv.str());
  write_snapshot(snapshot_beside(a.out),
                 snapshot_header("eval", {{"gt", a.gt}, {"cand", a.cand}, {"sidecar", a.sidecar},
                                          {"gt_suffix", a.gt_suffix}, {"cand_suffix", a.cand_suffix},
                                          {"skip_blank", a.skip_blank ? "true" : "false"}}),
                 {{"metrics.ssim_window", std::to_string(s.metrics.ssim_window)},
                  {"metrics.ssim_sigma", format_double(s.metrics.ssim_sigma)},
                  {"metrics.k1", format_double(s.metrics.k1)},
                  {"metrics.k2", format_double(s.metrics.k2)},
                  {"metrics.cd_threshold", std::to_string(s.metrics.cd_threshold)}});
}

struct BinsArgs {
  std::string report, tracking_report, out, mode = "equal_width";
  std::size_t bins = 4;
};

void run_bins(const BinsArgs& a, std::ostream& out, std::ostream& err) {
  BinMode mode;
  if (a.mode == "equal_width") {
    mode = BinMode::equal_width;
  } else if (a.mode == "equal_count") {
    mode = BinMode::equal_count;
  } else {
    throw config_error("--mode must be equal_width or equal_count");
  }
  auto gen_in = open_input(a.report);
  auto track_in = open_input(a.tracking_report);
  const auto generated = read_report_csv(gen_in);
  std::map<std::string, double> tracking_cd;
  for (const auto& r : read_report_csv(track_in)) tracking_cd[r.sample_id] = r.cd;
  std::vector<ChaosRecord> records;
  std::size_t unmatched = 0;
  for (const auto& r : generated) {
    const auto it = tracking_cd.find(r.sample_id);
    if (it == tracking_cd.end()) {
      ++unmatched;
      continue;
    }
    records.push_back({it->second, r.cd});
  }
  if (unmatched > 0) err << "warning: " << unmatched << " report rows have no tracking row and are skipped\n";
  const std::string text = to_json(chaos_bins(records, a.bins, mode)).dump(2) + '\n';
  if (a.out.empty()) {
    out << text;
    return;
  }
  make_parent(a.out);
  write_text(a.out, text);
  write_snapshot(snapshot_beside(a.out),
                 snapshot_header("bins", {{"report", a.report}, {"tracking_report", a.tracking_report}}),
                 {{"bins", std::to_string(a.bins)}, {"mode", a.mode}});
}

struct HoldoutArgs {
  std::string stats, out;
  std::size_t k = 10;
};

void run_holdout(const HoldoutArgs& a, const Settings& s) {
  auto in = open_input(a.stats);
  const HoldoutSplit split = holdout_kmeans(read_category_stats_csv(in), a.k, s.dataset.seed);
  make_parent(a.out);
  write_text(a.out, to_json(split).dump(2) + '\n');
  write_snapshot(snapshot_beside(a.out), snapshot_header("holdout", {{"stats", a.stats}}),
                 {{"seed", std::to_string(s.dataset.seed)}, {"k", std::to_string(a.k)}});
}

struct TrackImportArgs {
  std::vector<std::string> inputs;
  std::string out, category = "tracking";
};

std::vector<fs::path> recording_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  std::set<std::string> stems;
  for (const auto& f : files) {
    if (!stems.insert(f.stem().string()).second) {
      throw Error(ErrorCategory::format, "two recordings share the name '" + f.stem().string() + "'");
    }
  }
  if (files.empty()) throw Error(ErrorCategory::io, "no recordings found");
  return files;
}

void run_track_import(const TrackImportArgs& a, const Settings& s) {
  make_prompt(a.category);
  const auto files = recording_files(a.inputs);
  const fs::path dir(a.out);
  make_dir(dir);
  std::vector<std::string> lines(files.size());
  parallel_for(files.size(), s.dataset.threads, [&](std::size_t i) {
    Sketch sketch = to_sketch(parse_landmarks_file(files[i].string()), s.pen, s.canvas);
    sketch.category = a.category;
    sketch.source_id = files[i].stem().string();
    write_png(render(sketch, s.dataset.render), (dir / (sketch.source_id + ".png")).string());
    lines[i] = serialize_quickdraw(sketch);
  });
  write_text(dir / "tracking.ndjson", join_lines(lines));
  KeyValues inputs;
  for (const auto& f : files) inputs.emplace_back("input", f.string());
  inputs.emplace_back("category", a.category);
  write_snapshot(dir / "config_snapshot.txt", snapshot_header("track-import", inputs),
                 {{"canvas.margin", format_double(s.canvas.margin)},
                  {"track.extension_ratio_threshold", format_double(s.pen.extension_ratio_threshold)},
                  {"render.size", std::to_string(s.dataset.render.size)},
                  {"render.stroke_width", format_double(s.dataset.render.stroke_width)},
                  {"render.supersample", std::to_string(s.dataset.render.supersample)}});
}

std::string one_line(std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  return message;
}

int report(std::ostream& err, ErrorCategory category, const std::string& message) {
  err << "error: " << to_string(category) << ": " << one_line(message) << '\n';
  return exit_code(category);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sketch corruption, rendering, metrics and dataset tooling", "tracksketch"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for every command");

  Globals g;
  app.add_option("--seed", g.seed, "Global seed; every random choice derives from it")
      ->envname("TRACKSKETCH_SEED");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency); never changes outputs")
      ->envname("TRACKSKETCH_THREADS");
  app.add_option("--config", g.config, "Config file of 'key = value' lines")->envname("TRACKSKETCH_CONFIG");
  app.add_option("--set", g.overrides, "Override one config key: --set key=value (repeatable, applied after --config)");

  std::function<void(const Settings&)> action;

  QdImportArgs qd;
  auto* qd_cmd = app.add_subcommand("qd-import", "Validate and normalise a Quick, Draw! NDJSON file, optionally keeping "
                                                 "the top-scoring sketches of each category");
  qd_cmd->add_option("--in", qd.in, "Quick, Draw! simplified NDJSON")->required();
  qd_cmd->add_option("--out", qd.out, "Output NDJSON")->required();
  qd_cmd->add_option("--clip-sidecar", qd.sidecar, "Score sidecar JSONL keyed by key_id; keeps the top filter.fraction "
                                                  "of each category by clip_i2t");
  qd_cmd->callback([&] { action = [&](const Settings& s) { run_qd_import(qd, s, err); }; });

  AugmentArgs aug;
  auto* aug_cmd = app.add_subcommand("augment", "Apply seeded random augmentations to every sketch");
  aug_cmd->add_option("--in", aug.in, "Input NDJSON corpus")->required();
  aug_cmd->add_option("--out", aug.out, "Output directory (augmented.ndjson, reports.jsonl)")->required();
  aug_cmd->add_flag("--render", aug.render, "Also write images/<id>_noisy.png at full precision");
  aug_cmd->callback([&] { action = [&](const Settings& s) { run_augment(aug, s); }; });

  RenderArgs ren;
  auto* ren_cmd = app.add_subcommand("render", "Rasterise every sketch to <id>.png");
  ren_cmd->add_option("--in", ren.in, "Input NDJSON corpus")->required();
  ren_cmd->add_option("--out", ren.out, "Output directory")->required();
  ren_cmd->callback([&] { action = [&](const Settings& s) { run_render(ren, s); }; });

  GenDatasetArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-dataset", "Build clean/noisy training pairs with a manifest");
  gen_cmd->add_option("--in", gen.in, "Input NDJSON corpus")->required();
  gen_cmd->add_option("--out", gen.out, "Output dataset directory")->required();
  gen_cmd->add_flag("--empty-prompt", gen.empty_prompt,
                    "Flag a dataset.empty_prompt_fraction share of entries as empty-prompt");
  gen_cmd->callback([&] { action = [&](const Settings& s) { run_gen_dataset(gen, s); }; });

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Score candidate images against ground truth (SSIM, Chamfer)");
  ev_cmd->add_option("--gt", ev.gt, "Ground-truth PNG directory")->required();
  ev_cmd->add_option("--cand", ev.cand, "Candidate PNG directory")->required();
  ev_cmd->add_option("--out", ev.out, "Output report CSV")->required();
  ev_cmd->add_option("--sidecar", ev.sidecar, "Neural score sidecar JSONL to pass through");
  ev_cmd->add_option("--gt-suffix", ev.gt_suffix, "Only use ground-truth files whose stem ends with this suffix");
  ev_cmd->add_option("--cand-suffix", ev.cand_suffix, "Only use candidate files whose stem ends with this suffix");
  ev_cmd->add_flag("--skip-blank", ev.skip_blank, "Skip pairs with an empty foreground instead of failing");
  ev_cmd->callback([&] { action = [&](const Settings& s) { run_eval(ev, s, err); }; });

  BinsArgs bn;
  auto* bn_cmd = app.add_subcommand("bins", "Bin generated-sketch CD by tracking CD");
  bn_cmd->add_option("--report", bn.report, "Report CSV of generated vs ground truth")->required();
  bn_cmd->add_option("--tracking-report", bn.tracking_report, "Report CSV of tracking vs ground truth")->required();
  bn_cmd->add_option("--out", bn.out, "Output JSON (stdout when omitted)");
  bn_cmd->add_option("--bins", bn.bins, "Number of bins")->capture_default_str();
  bn_cmd->add_option("--mode", bn.mode, "equal_width or equal_count")->capture_default_str();
  bn_cmd->callback([&] { action = [&](const Settings&) { run_bins(bn, out, err); }; });

  HoldoutArgs ho;
  auto* ho_cmd = app.add_subcommand("holdout", "Cluster categories and hold one out per cluster");
  ho_cmd->add_option("--stats", ho.stats, "Category stats CSV")->required();
  ho_cmd->add_option("--out", ho.out, "Output JSON")->required();
  ho_cmd->add_option("--k", ho.k, "Number of clusters")->capture_default_str();
  ho_cmd->callback([&] { action = [&](const Settings& s) { run_holdout(ho, s); }; });

  TrackImportArgs tr;
  auto* tr_cmd = app.add_subcommand("track-import", "Turn hand-landmark recordings into sketches and tracking images");
  tr_cmd->add_option("--in", tr.inputs, "Landmark JSONL files or directories of them")->required();
  tr_cmd->add_option("--out", tr.out, "Output directory (<name>.png, tracking.ndjson)")->required();
  tr_cmd->add_option("--category", tr.category, "Category written into tracking.ndjson")->capture_default_str();
  tr_cmd->callback([&] { action = [&](const Settings& s) { run_track_import(tr, s); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return report(err, ErrorCategory::usage, e.what());
  }

  try {
    action(load_settings(g));
  } catch (const Error& e) {
    return report(err, e.category(), e.what());
  } catch (const std::bad_alloc&) {
    return report(err, ErrorCategory::io, "out of memory");
  }
  return 0;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace tracksketch
