#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "tracksketch/augment.hpp"
#include "tracksketch/error.hpp"
#include "tracksketch/metrics.hpp"

using namespace tracksketch;

namespace {

RasterImage dots(int w, int h, std::vector<PixelCoord> pts) {
  RasterImage img(w, h);
  for (auto p : pts) img.at(p.x, p.y) = 0;
  return img;
}

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

}  // namespace

// --- SSIM -----------------------------------------------------------------------

TEST_CASE("ssim of an image with itself is one") {
  const RasterImage img = render(testing::synthetic_sketch("face", 1), RenderSpec{128, 3.0, 2});
  CHECK(std::abs(ssim(img, img) - 1.0) <= 1e-9);
}

TEST_CASE("two equal constant images have ssim one") {
  CHECK(std::abs(ssim(RasterImage(32, 32, 128), RasterImage(32, 32, 128)) - 1.0) <= 1e-12);
}

TEST_CASE("black against white matches the zero-variance closed form") {
  const double c1 = (0.01 * 255) * (0.01 * 255);
  const double expected = c1 / (255.0 * 255.0 + c1);
  CHECK(std::abs(ssim(RasterImage(32, 32, 0), RasterImage(32, 32, 255)) - expected) <= 1e-6);
  CHECK(expected == doctest::Approx(1.0e-4).epsilon(0.01));
}

TEST_CASE("ssim is symmetric and agrees with the window-by-window definition") {
  const auto corpus = testing::synthetic_corpus(6, 41);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const RasterImage a = render(corpus[i], RenderSpec{48, 2.0, 2});
    const RasterImage b = render(apply(corpus[i], AugmentConfig{}, i).sketch, RenderSpec{48, 2.0, 2});
    const double ab = ssim(a, b);
    CHECK(std::abs(ab - ssim(b, a)) <= 1e-9);
    CHECK(std::abs(ab - testing::naive_ssim(a, b)) <= 1e-9);
    CHECK(ab >= -1.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("ssim rejects mismatched and undersized images") {
  CHECK(error_of([] { (void)ssim(RasterImage(32, 32), RasterImage(32, 31)); }) == ErrorCategory::shape);
  CHECK(error_of([] { (void)ssim(RasterImage(8, 8), RasterImage(8, 8)); }) == ErrorCategory::shape);
}

// --- Chamfer --------------------------------------------------------------------

TEST_CASE("chamfer of an image with itself is exactly zero") {
  const RasterImage img = render(testing::synthetic_sketch("star", 1), RenderSpec{64, 3.0, 2});
  CHECK(chamfer(img, img) == 0.0);
}

TEST_CASE("single pixels three-four-five apart are five pixels apart") {
  const RasterImage a = dots(8, 8, {{0, 0}});
  const RasterImage b = dots(8, 8, {{3, 4}});
  CHECK(chamfer(a, b) == 5.0);
  CHECK(chamfer_bruteforce(a, b) == 5.0);
}

TEST_CASE("hand-enumerated two-point case gives five") {
  const std::vector<PixelCoord> a{{0, 0}, {10, 0}};
  const std::vector<PixelCoord> b{{0, 0}, {0, 10}};
  CHECK(chamfer_bruteforce(a, b) == 5.0);
  CHECK(chamfer_bruteforce(b, a) == 5.0);
  CHECK(chamfer(dots(16, 16, a), dots(16, 16, b)) == 5.0);
}

TEST_CASE("identical single pixels give zero") {
  const std::vector<PixelCoord> a{{4, 4}};
  CHECK(chamfer_bruteforce(a, a) == 0.0);
}

TEST_CASE("distance transform chamfer matches exhaustive search") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int w = 8 + static_cast<int>(seed % 40);
    const int h = 8 + static_cast<int>((seed * 7) % 40);
    const RasterImage a = testing::random_dots(w, h, 1 + static_cast<int>(seed % 30), seed);
    const RasterImage b = testing::random_dots(w, h, 1 + static_cast<int>((seed * 3) % 30), seed + 1000);
    const double fast = chamfer(a, b);
    CHECK(std::abs(fast - chamfer_bruteforce(a, b)) <= 1e-9);
    CHECK(std::abs(fast - testing::naive_chamfer(a, b)) <= 1e-9);
    CHECK(std::abs(fast - chamfer(b, a)) <= 1e-12);
  }
}

TEST_CASE("chamfer is invariant to translating both images together") {
  const RasterImage a = dots(40, 40, {{5, 5}, {9, 12}, {14, 7}});
  const RasterImage b = dots(40, 40, {{6, 8}, {15, 15}});
  const RasterImage a2 = dots(40, 40, {{15, 12}, {19, 19}, {24, 14}});
  const RasterImage b2 = dots(40, 40, {{16, 15}, {25, 22}});
  CHECK(chamfer(a, b) == chamfer(a2, b2));
}

TEST_CASE("squared distance transform is exact") {
  const std::vector<PixelCoord> sites{{1, 1}, {6, 3}};
  const auto dt = squared_distance_transform(sites, 8, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 8; ++x) {
      const double d1 = (x - 1) * (x - 1) + (y - 1) * (y - 1);
      const double d2 = (x - 6) * (x - 6) + (y - 3) * (y - 3);
      CHECK(dt[static_cast<std::size_t>(y * 8 + x)] == std::min(d1, d2));
    }
  }
}

TEST_CASE("empty foreground on either side is an error") {
  const RasterImage blank(16, 16);
  const RasterImage one = dots(16, 16, {{2, 2}});
  CHECK(error_of([&] { (void)chamfer(blank, one); }) == ErrorCategory::empty_foreground);
  CHECK(error_of([&] { (void)chamfer(one, blank); }) == ErrorCategory::empty_foreground);
  CHECK(error_of([&] { (void)chamfer_bruteforce(blank, one); }) == ErrorCategory::empty_foreground);
  CHECK(error_of([&] { (void)chamfer(one, RasterImage(16, 15)); }) == ErrorCategory::shape);
}

// --- reports ---------------------------------------------------------------------

TEST_CASE("evaluating an image against itself") {
  const RasterImage img = render(testing::synthetic_sketch("sun", 1), RenderSpec{64, 3.0, 2});
  const MetricsReport r = evaluate_pair("000001", img, img);
  CHECK(r.sample_id == "000001");
  CHECK(std::abs(r.ssim - 1.0) <= 1e-9);
  CHECK(r.cd == 0.0);
  CHECK_FALSE(r.lpips.has_value());
  CHECK_FALSE(r.clip_i2i.has_value());
  CHECK_FALSE(r.clip_i2t.has_value());
}

TEST_CASE("ingested scores pass through unchanged") {
  const RasterImage img = render(testing::synthetic_sketch("sun", 1), RenderSpec{64, 3.0, 2});
  NeuralScores n;
  n.lpips = 0.125;
  n.clip_i2t = 0.3;
  const MetricsReport r = evaluate_pair("x", img, img, {}, &n);
  CHECK(r.lpips == 0.125);
  CHECK(r.clip_i2t == 0.3);
  CHECK_FALSE(r.clip_i2i.has_value());
}

TEST_CASE("report CSV round trip with empty neural cells") {
  std::vector<MetricsReport> reports(2);
  reports[0] = {"000000", 0.75, 12.5, std::nullopt, std::nullopt, std::nullopt};
  reports[1] = {"a,b", 0.1, 3.0, 0.2, 0.9, std::nullopt};
  std::ostringstream out;
  write_report_csv(out, reports);
  const std::string text = out.str();
  CHECK(text.rfind("sample_id,ssim,cd,lpips,clip_i2i,clip_i2t\n", 0) == 0);
  CHECK(text.find("000000,0.75,12.5,,,\n") != std::string::npos);
  std::istringstream in(text);
  const auto back = read_report_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[1].sample_id == "a,b");
  CHECK(back[1].lpips == 0.2);
  CHECK(back[1].clip_i2i == 0.9);
  CHECK_FALSE(back[1].clip_i2t.has_value());
  CHECK(back[0].cd == 12.5);
}

TEST_CASE("report CSV with a wrong header is a format error") {
  std::istringstream in("id,ssim,cd\n1,2,3\n");
  CHECK(error_of([&] { (void)read_report_csv(in); }) == ErrorCategory::format);
}

TEST_CASE("sidecar lines are keyed by sample id") {
  std::istringstream in(
      "{\"sample_id\":\"a\",\"lpips\":0.5,\"scorer\":\"clip-vit-b32\"}\n"
      "\n"
      "{\"sample_id\":\"b\",\"clip_i2t\":0.31,\"clip_i2i\":null}\n");
  const auto side = read_sidecar(in);
  REQUIRE(side.size() == 2);
  CHECK(side.at("a").lpips == 0.5);
  CHECK(side.at("a").scorer == "clip-vit-b32");
  CHECK(side.at("b").clip_i2t == 0.31);
  CHECK_FALSE(side.at("b").clip_i2i.has_value());
}

TEST_CASE("bad sidecars are format errors") {
  std::istringstream dup("{\"sample_id\":\"a\"}\n{\"sample_id\":\"a\"}\n");
  CHECK(error_of([&] { (void)read_sidecar(dup); }) == ErrorCategory::format);
  std::istringstream no_id("{\"lpips\":0.5}\n");
  CHECK(error_of([&] { (void)read_sidecar(no_id); }) == ErrorCategory::format);
  std::istringstream text("{\"sample_id\":\"a\",\"lpips\":\"high\"}\n");
  CHECK(error_of([&] { (void)read_sidecar(text); }) == ErrorCategory::format);
}

// --- chaos bins -------------------------------------------------------------------

TEST_CASE("equal width bins over one to eight") {
  std::vector<ChaosRecord> records;
  for (int i = 1; i <= 8; ++i) records.push_back({static_cast<double>(i), 10.0 * i});
  const BinSummary s = chaos_bins(records);
  REQUIRE(s.bins.size() == 4);
  const double edges[] = {1.0, 2.75, 4.5, 6.25, 8.0};
  for (int i = 0; i < 4; ++i) {
    CHECK(s.bins[i].lo == doctest::Approx(edges[i]).epsilon(1e-15));
    CHECK(s.bins[i].hi == doctest::Approx(edges[i + 1]).epsilon(1e-15));
    CHECK(s.bins[i].count == 2);
  }
  CHECK(s.bins[0].mean_tracking_cd == 1.5);
  CHECK(s.bins[3].mean_generated_cd == 75.0);
}

TEST_CASE("identical tracking values collapse into the first bin") {
  const std::vector<ChaosRecord> records(6, ChaosRecord{3.0, 4.0});
  const BinSummary s = chaos_bins(records);
  CHECK(s.bins[0].count == 6);
  for (int i = 1; i < 4; ++i) {
    CHECK(s.bins[i].count == 0);
    CHECK(std::isnan(s.bins[i].mean_tracking_cd));
  }
  const auto j = to_json(s);
  CHECK(j["bins"][1]["mean_generated_cd"].is_null());
  CHECK(j["mode"] == "equal_width");
}

TEST_CASE("per-bin means recover a planted linear relation") {
  std::vector<ChaosRecord> records;
  for (int i = 0; i < 400; ++i) {
    const double t = 2.0 + 0.05 * i;
    records.push_back({t, 3.0 * t + 1.0});
  }
  for (BinMode mode : {BinMode::equal_width, BinMode::equal_count}) {
    const BinSummary s = chaos_bins(records, 4, mode);
    std::size_t total = 0;
    for (const auto& b : s.bins) {
      total += b.count;
      CHECK(std::abs(b.mean_generated_cd - (3.0 * b.mean_tracking_cd + 1.0)) <= 1e-9);
    }
    CHECK(total == records.size());
  }
}

TEST_CASE("equal count bins differ in size by at most one") {
  std::vector<ChaosRecord> records;
  for (int i = 0; i < 10; ++i) records.push_back({static_cast<double>((i * 7) % 10), 0.0});
  const BinSummary s = chaos_bins(records, 4, BinMode::equal_count);
  for (const auto& b : s.bins) {
    CHECK(b.count >= 2);
    CHECK(b.count <= 3);
  }
}

TEST_CASE("fewer records than bins is an insufficient-data error") {
  const std::vector<ChaosRecord> records(3, ChaosRecord{1.0, 1.0});
  CHECK(error_of([&] { (void)chaos_bins(records); }) == ErrorCategory::insufficient_data);
}
