#include "tracksketch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "tracksketch/config_file.hpp"
#include "tracksketch/csv.hpp"
#include "tracksketch/error.hpp"

namespace tracksketch {

void MetricsConfig::validate() const {
  if (ssim_window < 1 || ssim_window % 2 == 0) throw config_error("ssim window must be odd and positive");
  if (!(ssim_sigma > 0.0)) throw config_error("ssim sigma must be positive");
  if (!(k1 > 0.0 && k2 > 0.0 && dynamic_range > 0.0)) throw config_error("ssim constants must be positive");
}

namespace {

void require_same_shape(const RasterImage& a, const RasterImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCategory::shape, "image dimensions differ: " + std::to_string(a.width()) + "x" +
                                          std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                          std::to_string(b.height()));
  }
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> g(static_cast<std::size_t>(size));
  const double c = 0.5 * (size - 1);
  for (int i = 0; i < size; ++i) {
    const double d = i - c;
    g[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
  }
  const double sum = std::accumulate(g.begin(), g.end(), 0.0);
  for (double& v : g) v /= sum;
  return g;
}

// Separable "valid" filtering of one image-sized field.
std::vector<double> filter_valid(const std::vector<double>& field, int w, int h, const std::vector<double>& g) {
  const int k = static_cast<int>(g.size());
  const int ow = w - k + 1;
  const int oh = h - k + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) {
    const double* row = field.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(w);
    double* out = tmp.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(ow);
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += g[static_cast<std::size_t>(i)] * row[x + i];
      out[x] = s;
    }
  }
  std::vector<double> res(static_cast<std::size_t>(ow) * static_cast<std::size_t>(oh), 0.0);
  for (int y = 0; y < oh; ++y) {
    double* out = res.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(ow);
    for (int i = 0; i < k; ++i) {
      const double gi = g[static_cast<std::size_t>(i)];
      const double* src = tmp.data() + static_cast<std::size_t>(y + i) * static_cast<std::size_t>(ow);
      for (int x = 0; x < ow; ++x) out[x] += gi * src[x];
    }
  }
  return res;
}

// 1-D lower envelope of parabolas (Felzenszwalb & Huttenlocher) over the
// finite entries of f.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    auto intersect = [&](int p) {
      return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
    };
    // z[0] is -inf, so k never drops below zero.
    double s = intersect(v[static_cast<std::size_t>(k)]);
    while (s <= z[static_cast<std::size_t>(k)]) {
      --k;
      s = intersect(v[static_cast<std::size_t>(k)]);
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = inf;
  }
  if (k < 0) {
    std::fill(d, d + n, inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
    const int p = v[static_cast<std::size_t>(j)];
    d[q] = static_cast<double>(q - p) * (q - p) + f[p];
  }
}

double mean_nearest(std::span<const PixelCoord> from, const std::vector<double>& dt, int width) {
  double sum = 0.0;
  for (const PixelCoord& p : from) {
    sum += std::sqrt(dt[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.x)]);
  }
  return sum / static_cast<double>(from.size());
}

void require_foreground(std::span<const PixelCoord> a, std::span<const PixelCoord> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCategory::empty_foreground,
                std::string("empty foreground in ") + (a.empty() ? "first" : "second") + " image");
  }
}

}  // namespace

double ssim(const RasterImage& a, const RasterImage& b, const MetricsConfig& cfg) {
  cfg.validate();
  require_same_shape(a, b);
  const int w = a.width();
  const int h = a.height();
  if (w < cfg.ssim_window || h < cfg.ssim_window) {
    throw Error(ErrorCategory::shape, "image smaller than the SSIM window");
  }
  const auto g = gaussian_kernel(cfg.ssim_window, cfg.ssim_sigma);
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> fa(n), fb(n), faa(n), fbb(n), fab(n);
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pa[i];
    const double y = pb[i];
    fa[i] = x;
    fb[i] = y;
    faa[i] = x * x;
    fbb[i] = y * y;
    fab[i] = x * y;
  }
  const auto mu_a = filter_valid(fa, w, h, g);
  const auto mu_b = filter_valid(fb, w, h, g);
  const auto e_aa = filter_valid(faa, w, h, g);
  const auto e_bb = filter_valid(fbb, w, h, g);
  const auto e_ab = filter_valid(fab, w, h, g);

  const double c1 = cfg.c1();
  const double c2 = cfg.c2();
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

std::vector<double> squared_distance_transform(std::span<const PixelCoord> sites, int width, int height) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> grid(n, inf);
  for (const PixelCoord& p : sites) {
    grid[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.x)] = 0.0;
  }
  const int longest = std::max(width, height);
  std::vector<double> f(static_cast<std::size_t>(longest)), d(static_cast<std::size_t>(longest));
  std::vector<int> v(static_cast<std::size_t>(longest));
  std::vector<double> z(static_cast<std::size_t>(longest) + 1);

  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) f[static_cast<std::size_t>(y)] = grid[static_cast<std::size_t>(y) * width + x];
    edt_1d(f.data(), d.data(), height, v, z);
    for (int y = 0; y < height; ++y) grid[static_cast<std::size_t>(y) * width + x] = d[static_cast<std::size_t>(y)];
  }
  for (int y = 0; y < height; ++y) {
    double* row = grid.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
    std::copy(row, row + width, f.begin());
    edt_1d(f.data(), row, width, v, z);
  }
  return grid;
}

double chamfer(const RasterImage& a, const RasterImage& b, const MetricsConfig& cfg) {
  require_same_shape(a, b);
  const auto pa = foreground_points(a, cfg.cd_threshold);
  const auto pb = foreground_points(b, cfg.cd_threshold);
  require_foreground(pa, pb);
  const auto dt_a = squared_distance_transform(pa, a.width(), a.height());
  const auto dt_b = squared_distance_transform(pb, b.width(), b.height());
  return 0.5 * (mean_nearest(pa, dt_b, a.width()) + mean_nearest(pb, dt_a, a.width()));
}

double chamfer_bruteforce(std::span<const PixelCoord> a, std::span<const PixelCoord> b) {
  require_foreground(a, b);
  auto directed = [](std::span<const PixelCoord> from, std::span<const PixelCoord> to) {
    double sum = 0.0;
    for (const PixelCoord& p : from) {
      long long best = std::numeric_limits<long long>::max();
      for (const PixelCoord& q : to) {
        const long long dx = p.x - q.x;
        const long long dy = p.y - q.y;
        best = std::min(best, dx * dx + dy * dy);
      }
      sum += std::sqrt(static_cast<double>(best));
    }
    return sum / static_cast<double>(from.size());
  };
  return 0.5 * (directed(a, b) + directed(b, a));
}

double chamfer_bruteforce(const RasterImage& a, const RasterImage& b, std::uint8_t threshold) {
  require_same_shape(a, b);
  const auto pa = foreground_points(a, threshold);
  const auto pb = foreground_points(b, threshold);
  return chamfer_bruteforce(pa, pb);
}

MetricsReport evaluate_pair(const std::string& sample_id, const RasterImage& ground_truth,
                            const RasterImage& candidate, const MetricsConfig& cfg, const NeuralScores* ingested) {
  MetricsReport r;
  r.sample_id = sample_id;
  r.ssim = ssim(ground_truth, candidate, cfg);
  r.cd = chamfer(ground_truth, candidate, cfg);
  if (ingested) {
    r.lpips = ingested->lpips;
    r.clip_i2i = ingested->clip_i2i;
    r.clip_i2t = ingested->clip_i2t;
  }
  return r;
}

// --- CSV / sidecar --------------------------------------------------------------

namespace {

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_optional(const std::string& key, const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return parse_double(key, cell);
}

std::optional<double> optional_number(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorCategory::format, std::string("sidecar field '") + key + "' is not a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCategory::format, std::string("sidecar field '") + key + "' is not finite");
  return v;
}

}  // namespace

void write_report_csv(std::ostream& out, std::span<const MetricsReport> reports) {
  out << "sample_id,ssim,cd,lpips,clip_i2i,clip_i2t\n";
  for (const auto& r : reports) {
    out << csv_field(r.sample_id) << ',' << format_double(r.ssim) << ',' << format_double(r.cd) << ','
        << optional_cell(r.lpips) << ',' << optional_cell(r.clip_i2i) << ',' << optional_cell(r.clip_i2t) << '\n';
  }
}

std::vector<MetricsReport> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCategory::format, "report CSV is empty");
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected{"sample_id", "ssim", "cd", "lpips", "clip_i2i", "clip_i2t"};
  if (header != expected) throw Error(ErrorCategory::format, "unexpected report CSV header: " + line);
  std::vector<MetricsReport> out;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != expected.size()) {
      throw Error(ErrorCategory::format, "report CSV line " + std::to_string(line_number) + ": expected 6 fields");
    }
    try {
      MetricsReport r;
      r.sample_id = f[0];
      r.ssim = parse_double("ssim", f[1]);
      r.cd = parse_double("cd", f[2]);
      r.lpips = parse_optional("lpips", f[3]);
      r.clip_i2i = parse_optional("clip_i2i", f[4]);
      r.clip_i2t = parse_optional("clip_i2t", f[5]);
      out.push_back(std::move(r));
    } catch (const Error& e) {
      throw Error(ErrorCategory::format, "report CSV line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

std::map<std::string, NeuralScores> read_sidecar(std::istream& in) {
  std::map<std::string, NeuralScores> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCategory::format, "sidecar line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("sample_id") || !j["sample_id"].is_string()) {
      throw Error(ErrorCategory::format, "sidecar line " + std::to_string(line_number) + ": missing sample_id");
    }
    NeuralScores s;
    s.lpips = optional_number(j, "lpips");
    s.clip_i2i = optional_number(j, "clip_i2i");
    s.clip_i2t = optional_number(j, "clip_i2t");
    if (j.contains("scorer") && j["scorer"].is_string()) s.scorer = j["scorer"].get<std::string>();
    const auto id = j["sample_id"].get<std::string>();
    if (!out.emplace(id, std::move(s)).second) {
      throw Error(ErrorCategory::format, "sidecar has duplicate sample_id '" + id + "'");
    }
  }
  return out;
}

// --- chaos bins -------------------------------------------------------------------

BinSummary chaos_bins(std::span<const ChaosRecord> records, std::size_t n_bins, BinMode mode) {
  if (n_bins == 0) throw config_error("number of bins must be positive");
  if (records.size() < n_bins) {
    throw Error(ErrorCategory::insufficient_data, "need at least " + std::to_string(n_bins) + " records, got " +
                                                      std::to_string(records.size()));
  }
  for (const auto& r : records) {
    if (!std::isfinite(r.tracking_cd) || !std::isfinite(r.generated_cd)) {
      throw Error(ErrorCategory::format, "chaos records must be finite");
    }
  }
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  BinSummary summary;
  summary.mode = mode;
  summary.bins.resize(n_bins);
  std::vector<double> sum_t(n_bins, 0.0), sum_g(n_bins, 0.0);

  if (mode == BinMode::equal_width) {
    const auto [lo_it, hi_it] = std::minmax_element(
        records.begin(), records.end(), [](const auto& a, const auto& b) { return a.tracking_cd < b.tracking_cd; });
    const double lo = lo_it->tracking_cd;
    const double hi = hi_it->tracking_cd;
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
      summary.bins[i].lo = lo + width * static_cast<double>(i);
      summary.bins[i].hi = i + 1 == n_bins ? hi : lo + width * static_cast<double>(i + 1);
    }
    for (const auto& r : records) {
      std::size_t idx = 0;
      if (width > 0.0) {
        idx = static_cast<std::size_t>(std::floor((r.tracking_cd - lo) / width));
        idx = std::min(idx, n_bins - 1);
      }
      ++summary.bins[idx].count;
      sum_t[idx] += r.tracking_cd;
      sum_g[idx] += r.generated_cd;
    }
  } else {
    std::vector<ChaosRecord> sorted(records.begin(), records.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.tracking_cd < b.tracking_cd; });
    const std::size_t n = sorted.size();
    std::size_t begin = 0;
    for (std::size_t i = 0; i < n_bins; ++i) {
      const std::size_t end = (n * (i + 1)) / n_bins;
      auto& bin = summary.bins[i];
      bin.lo = sorted[begin].tracking_cd;
      bin.hi = sorted[end - 1].tracking_cd;
      for (std::size_t k = begin; k < end; ++k) {
        ++bin.count;
        sum_t[i] += sorted[k].tracking_cd;
        sum_g[i] += sorted[k].generated_cd;
      }
      begin = end;
    }
  }
  for (std::size_t i = 0; i < n_bins; ++i) {
    auto& bin = summary.bins[i];
    const auto c = static_cast<double>(bin.count);
    bin.mean_tracking_cd = bin.count ? sum_t[i] / c : nan;
    bin.mean_generated_cd = bin.count ? sum_g[i] / c : nan;
  }
  return summary;
}

nlohmann::json to_json(const BinSummary& summary) {
  nlohmann::json bins = nlohmann::json::array();
  auto number_or_null = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  for (const auto& b : summary.bins) {
    bins.push_back({{"lo", b.lo},
                    {"hi", b.hi},
                    {"count", b.count},
                    {"mean_tracking_cd", number_or_null(b.mean_tracking_cd)},
                    {"mean_generated_cd", number_or_null(b.mean_generated_cd)}});
  }
  return {{"mode", summary.mode == BinMode::equal_width ? "equal_width" : "equal_count"},
          {"bins", std::move(bins)}};
}

}  // namespace tracksketch
