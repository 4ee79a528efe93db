#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "synthetic.hpp"
#include "tracksketch/dataset.hpp"
#include "tracksketch/error.hpp"
#include "tracksketch/rng.hpp"

using namespace tracksketch;
namespace fs = std::filesystem;

namespace {

template <typename Fn>
ErrorCategory error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::usage;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tracksketch_dataset_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<CategoryStats> clustered_stats(std::size_t clusters, std::size_t per_cluster) {
  std::vector<CategoryStats> out;
  for (std::size_t c = 0; c < clusters; ++c) {
    for (std::size_t i = 0; i < per_cluster; ++i) {
      CategoryStats s;
      s.category = "cat" + std::to_string(c) + "_" + std::to_string(i);
      const double wobble = 0.01 * static_cast<double>(i);
      s.clip_i2t_gt = 0.2 + 0.01 * static_cast<double>(c % 3) + wobble * 0.01;
      s.clip_i2i_gt_tracking = 0.5 + 0.1 * static_cast<double>((c / 3) % 3) + wobble * 0.01;
      s.cd_gt_tracking = 5.0 + 3.0 * static_cast<double>(c) + wobble;
      s.ssim_gt_tracking = 0.6 + 0.02 * static_cast<double>(c % 2) + wobble * 0.001;
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

// --- prompts and filtering ----------------------------------------------------------

TEST_CASE("prompts follow the template literally") {
  CHECK(make_prompt("cat") == "a black and white sketch of a cat");
  CHECK(make_prompt("angel") == "a black and white sketch of a angel");
  CHECK(error_of([] { (void)make_prompt(""); }) == ErrorCategory::config);
}

TEST_CASE("top five percent of a hundred keeps five") {
  std::map<std::string, std::vector<ScoredItem>> scored;
  for (int i = 0; i < 100; ++i) scored["cat"].push_back({"s" + std::to_string(i), static_cast<double>(i % 37) / 37.0 + i * 1e-4});
  const FilterResult r = filter_top_percent(scored);
  REQUIRE(r.selected.size() == 5);
  CHECK(r.warnings.empty());
  std::vector<double> all;
  for (const auto& it : scored["cat"]) all.push_back(it.score);
  std::sort(all.rbegin(), all.rend());
  std::set<std::string> selected(r.selected.begin(), r.selected.end());
  for (const auto& it : scored["cat"]) CHECK(selected.contains(it.id) == (it.score >= all[4]));
}

TEST_CASE("small categories keep at least one item") {
  std::map<std::string, std::vector<ScoredItem>> scored;
  scored["dog"] = {{"a", 0.1}, {"b", 0.9}, {"c", 0.5}};
  scored["owl"] = {{"z", 0.3}};
  const FilterResult r = filter_top_percent(scored);
  CHECK(r.selected == std::vector<std::string>{"b", "z"});
}

TEST_CASE("ties go to the smaller id") {
  std::map<std::string, std::vector<ScoredItem>> scored;
  scored["x"] = {{"m", 0.5}, {"c", 0.5}, {"q", 0.5}};
  CHECK(filter_top_percent(scored, 0.5).selected == std::vector<std::string>{"c", "m"});
}

TEST_CASE("filtering empty input warns and non-finite scores are errors") {
  CHECK(filter_top_percent({}).warnings.size() == 1);
  std::map<std::string, std::vector<ScoredItem>> scored;
  scored["empty"] = {};
  CHECK(filter_top_percent(scored).warnings.size() == 1);
  scored["bad"] = {{"a", std::nan("")}};
  CHECK(error_of([&] { (void)filter_top_percent(scored); }) == ErrorCategory::range);
  CHECK(error_of([] { (void)filter_top_percent({}, 0.0); }) == ErrorCategory::config);
}

TEST_CASE("scores are grouped through the category lookup") {
  const auto grouped = group_scores({{"1", 0.2}, {"2", 0.4}}, {{"1", "cat"}, {"2", "dog"}});
  CHECK(grouped.at("cat").size() == 1);
  CHECK(error_of([] { (void)group_scores({{"3", 0.1}}, {}); }) == ErrorCategory::format);
}

// --- holdout ----------------------------------------------------------------------------

TEST_CASE("holdout picks one category per cluster and trains on the rest") {
  const auto stats = clustered_stats(10, 6);
  const HoldoutSplit split = holdout_kmeans(stats, 10, 3);
  REQUIRE(split.held_out.size() == 10);
  CHECK(split.training.size() == 50);
  std::set<std::string> held(split.held_out.begin(), split.held_out.end());
  CHECK(held.size() == 10);
  for (const auto& t : split.training) CHECK_FALSE(held.contains(t));
  std::set<std::size_t> clusters;
  for (const auto& h : split.held_out) clusters.insert(split.cluster.at(h));
  CHECK(clusters.size() == 10);
  // Planted groups come back whole.
  for (std::size_t c = 0; c < 10; ++c) {
    const std::size_t first = split.cluster.at("cat" + std::to_string(c) + "_0");
    for (std::size_t i = 1; i < 6; ++i) CHECK(split.cluster.at("cat" + std::to_string(c) + "_" + std::to_string(i)) == first);
  }
}

TEST_CASE("holdout is deterministic in its seed") {
  const auto stats = clustered_stats(10, 4);
  CHECK(to_json(holdout_kmeans(stats, 10, 8)) == to_json(holdout_kmeans(stats, 10, 8)));
}

TEST_CASE("incomplete stats name every offending category") {
  auto stats = clustered_stats(10, 2);
  stats[3].cd_gt_tracking.reset();
  stats[7].clip_i2t_gt = std::nan("");
  try {
    (void)holdout_kmeans(stats);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::incomplete_stats);
    const std::string msg = e.what();
    CHECK(msg.find(stats[3].category) != std::string::npos);
    CHECK(msg.find(stats[7].category) != std::string::npos);
  }
  CHECK(error_of([] { (void)holdout_kmeans(clustered_stats(3, 2), 10); }) == ErrorCategory::config);
}

TEST_CASE("category stats CSV round trip with a missing cell") {
  auto stats = clustered_stats(2, 2);
  stats[1].ssim_gt_tracking.reset();
  std::ostringstream out;
  write_category_stats_csv(out, stats);
  CHECK(out.str().rfind("category,clip_i2t_gt,clip_i2i_gt_tracking,cd_gt_tracking,ssim_gt_tracking\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_category_stats_csv(in);
  REQUIRE(back.size() == stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    CHECK(back[i].category == stats[i].category);
    CHECK(back[i].cd_gt_tracking == stats[i].cd_gt_tracking);
    CHECK(back[i].ssim_gt_tracking == stats[i].ssim_gt_tracking);
  }
  std::istringstream bad("name,a\n");
  CHECK(error_of([&] { (void)read_category_stats_csv(bad); }) == ErrorCategory::format);
}

// --- training pairs ---------------------------------------------------------------------

TEST_CASE("two sketches give four images and a two line manifest") {
  const fs::path dir = fresh_dir("two");
  const auto corpus = testing::synthetic_corpus(2, 1);
  DatasetOptions opts;
  opts.render = RenderSpec{64, 2.0, 2};
  const auto entries = build_pairs(corpus, opts, dir);
  REQUIRE(entries.size() == 2);
  std::size_t pngs = 0;
  for (const auto& f : fs::directory_iterator(dir / "images")) pngs += f.path().extension() == ".png" ? 1 : 0;
  CHECK(pngs == 4);
  const auto manifest = read_manifest_file(dir / "manifest.jsonl");
  REQUIRE(manifest.size() == 2);
  CHECK(manifest[0].sample_id == "000000");
  CHECK(manifest[1].clean_path == "images/000001_clean.png");
  CHECK(manifest[0].prompt == make_prompt(corpus[0].category));
  CHECK(manifest[0].source_id == corpus[0].source_id);
  CHECK(fs::exists(dir / "config_snapshot.txt"));
}

TEST_CASE("rebuilding and threading leave every byte unchanged") {
  const auto corpus = testing::synthetic_corpus(12, 2);
  DatasetOptions opts;
  opts.seed = 99;
  opts.render = RenderSpec{64, 2.0, 2};
  const fs::path a = fresh_dir("a");
  const fs::path b = fresh_dir("b");
  const fs::path c = fresh_dir("c");
  build_pairs(corpus, opts, a);
  build_pairs(corpus, opts, b);
  opts.threads = 4;
  build_pairs(corpus, opts, c);
  for (const auto& name : {"manifest.jsonl", "config_snapshot.txt"}) {
    CHECK(slurp(a / name) == slurp(b / name));
    CHECK(slurp(a / name) == slurp(c / name));
  }
  for (const auto& f : fs::directory_iterator(a / "images")) {
    const auto rel = fs::path("images") / f.path().filename();
    CHECK(slurp(a / rel) == slurp(b / rel));
    CHECK(slurp(a / rel) == slurp(c / rel));
  }
}

TEST_CASE("replaying a manifest report reproduces the noisy image") {
  const auto corpus = testing::synthetic_corpus(6, 3);
  DatasetOptions opts;
  opts.render = RenderSpec{64, 2.0, 2};
  const fs::path dir = fresh_dir("replay");
  build_pairs(corpus, opts, dir);
  const auto manifest = read_manifest_file(dir / "manifest.jsonl");
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const Sketch again = replay(corpus[i], manifest[i].augment_report);
    const auto bytes = encode_png(render(again, opts.render));
    CHECK(std::string(bytes.begin(), bytes.end()) == slurp(dir / manifest[i].noisy_path));
  }
}

TEST_CASE("an empty corpus is a config error") {
  CHECK(error_of([] { (void)build_pairs({}, DatasetOptions{}, fresh_dir("empty")); }) == ErrorCategory::config);
}

TEST_CASE("off-canvas sketches are range errors") {
  Sketch s;
  s.category = "line";
  s.strokes.push_back(Stroke{{{0.2, 0.2}, {1.5, 0.2}}});
  CHECK(error_of([&] { (void)build_pairs({s}, DatasetOptions{}, fresh_dir("range")); }) == ErrorCategory::range);
}

TEST_CASE("a write failure is an I/O error and removes partial output") {
  const fs::path dir = fresh_dir("fail");
  fs::create_directories(dir / "images" / "000002_noisy.png");
  DatasetOptions opts;
  opts.render = RenderSpec{32, 2.0, 1};
  CHECK(error_of([&] { (void)build_pairs(testing::synthetic_corpus(4, 4), opts, dir); }) == ErrorCategory::io);
  CHECK_FALSE(fs::exists(dir / "manifest.jsonl"));
  CHECK_FALSE(fs::exists(dir / "images" / "000000_clean.png"));
  CHECK_FALSE(fs::exists(dir / "images" / "000001_noisy.png"));

  const fs::path blocked = fresh_dir("blocked");
  std::ofstream(blocked / "images") << "not a directory";
  CHECK(error_of([&] { (void)build_pairs(testing::synthetic_corpus(1, 4), opts, blocked); }) == ErrorCategory::io);
}

TEST_CASE("manifest entries survive a JSON round trip") {
  const auto corpus = testing::synthetic_corpus(5, 5);
  DatasetOptions opts;
  opts.render = RenderSpec{32, 2.0, 1};
  const auto entries = build_pairs(corpus, opts, fresh_dir("manifest"));
  std::ostringstream out;
  write_manifest(out, entries);
  std::istringstream in(out.str());
  const auto back = read_manifest(in);
  REQUIRE(back.size() == entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) CHECK(to_json(back[i]) == to_json(entries[i]));
  const auto j = to_json(entries[0]);
  CHECK(j["schema_version"] == kManifestSchemaVersion);
  nlohmann::json wrong = j;
  wrong["schema_version"] = 2;
  CHECK(error_of([&] { (void)manifest_entry_from_json(wrong); }) == ErrorCategory::format);
}

TEST_CASE("empty prompts are drawn at the configured rate") {
  std::size_t empty = 0;
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) empty += Rng(derive_seed(sample_seed(5, i), "prompt")).bernoulli(0.25) ? 1 : 0;
  CHECK(static_cast<double>(empty) / n == doctest::Approx(0.25).epsilon(0.04));

  const auto corpus = testing::synthetic_corpus(200, 6);
  DatasetOptions opts;
  opts.render = RenderSpec{16, 1.0, 1};
  opts.augment = AugmentConfig::none();
  opts.empty_prompt_enabled = true;
  const auto entries = build_pairs(corpus, opts, fresh_dir("prompts"));
  std::size_t flagged = 0;
  for (const auto& e : entries) flagged += e.empty_prompt ? 1 : 0;
  CHECK(flagged > 25);
  CHECK(flagged < 75);
  opts.empty_prompt_enabled = false;
  for (const auto& e : build_pairs(corpus, opts, fresh_dir("prompts_off"))) CHECK_FALSE(e.empty_prompt);
}

TEST_CASE("dataset options parse and reject bad values") {
  DatasetOptions opts;
  CHECK(set_dataset_option(opts, "render.size", "128"));
  CHECK(set_dataset_option(opts, "prob.wave", "0.1"));
  CHECK(set_dataset_option(opts, "seed", "17"));
  CHECK_FALSE(set_dataset_option(opts, "colour", "red"));
  CHECK(opts.render.size == 128);
  CHECK(opts.augment.prob.wave == 0.1);
  CHECK(opts.seed == 17);
  CHECK(error_of([&] { (void)set_dataset_option(opts, "seed", "-1"); }) == ErrorCategory::config);
  opts.empty_prompt_fraction = 1.5;
  CHECK(error_of([&] { opts.validate(); }) == ErrorCategory::config);
}
