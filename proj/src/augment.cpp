#include "tracksketch/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "tracksketch/error.hpp"
#include "tracksketch/rng.hpp"

namespace tracksketch {
namespace {

constexpr std::array kAllKinds = {
    AugmentKind::erase,         AugmentKind::sketch_distort,     AugmentKind::misplace,
    AugmentKind::resize,        AugmentKind::wave,               AugmentKind::spike,
    AugmentKind::jitter,        AugmentKind::transitional_false, AugmentKind::random_false,
};

bool is_local(AugmentKind kind) {
  return kind == AugmentKind::wave || kind == AugmentKind::spike || kind == AugmentKind::jitter;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw config_error(message);
}

void check_interval(const Interval& iv, const std::string& name) {
  require(std::isfinite(iv.lo) && std::isfinite(iv.hi), name + " must be finite");
  require(iv.lo <= iv.hi, name + ": lower bound exceeds upper bound");
}

void check_nonneg_interval(const Interval& iv, const std::string& name) {
  check_interval(iv, name);
  require(iv.lo >= 0.0, name + ": lower bound must be non-negative");
}

void check_probability(double p, const std::string& name) {
  require(p >= 0.0 && p <= 1.0, name + " must lie in [0,1]");
}

/// Unit normal per vertex from the central difference; one-sided at the ends
/// and at cusps where the central difference vanishes.
std::vector<Point> vertex_normals(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  std::vector<Point> normals(n, Point{0.0, 1.0});
  auto unit_normal = [](Point t, Point& out) {
    const double len = std::hypot(t.x, t.y);
    if (len == 0.0) return false;
    out = {-t.y / len, t.x / len};
    return true;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Point prev = pts[i > 0 ? i - 1 : 0];
    const Point next = pts[i + 1 < n ? i + 1 : n - 1];
    if (unit_normal(next - prev, normals[i])) continue;
    if (i + 1 < n && unit_normal(pts[i + 1] - pts[i], normals[i])) continue;
    if (i > 0 && unit_normal(pts[i] - pts[i - 1], normals[i])) continue;
    if (i > 0) normals[i] = normals[i - 1];
  }
  return normals;
}

Point cubic_bezier(Point p0, Point p1, Point p2, Point p3, double t) {
  const double u = 1.0 - t;
  const double b0 = u * u * u;
  const double b1 = 3.0 * u * u * t;
  const double b2 = 3.0 * u * t * t;
  const double b3 = t * t * t;
  return {b0 * p0.x + b1 * p1.x + b2 * p2.x + b3 * p3.x,
          b0 * p0.y + b1 * p1.y + b2 * p2.y + b3 * p3.y};
}

void push_distinct(std::vector<Point>& pts, Point p) {
  if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
}

}  // namespace

double Interval::max_abs() const { return std::max(std::abs(lo), std::abs(hi)); }

void WaveParams::validate() const {
  require(n_waves >= 1, "wave: n_waves must be >= 1");
  check_nonneg_interval(freq_range, "wave.freq_range");
  check_nonneg_interval(amp_range, "wave.amp_range");
  check_interval(phase_range, "wave.phase_range");
}

void SpikeParams::validate() const {
  require(max_per_stroke >= 0, "spike: max_per_stroke must be >= 0");
  require(height.sigma >= 0.0 && width.sigma >= 0.0, "spike: sigma must be >= 0");
  require(std::isfinite(height.mean) && std::isfinite(width.mean), "spike: means must be finite");
  check_nonneg_interval(bezier_offset_range, "spike.bezier_offset_range");
  require(sample_spacing > 0.0, "spike: sample_spacing must be positive");
}

void JitterParams::validate() const {
  require(sigma >= 0.0 && std::isfinite(sigma), "jitter: sigma must be >= 0");
  check_probability(vertex_fraction, "jitter.vertex_fraction");
}

void StructParams::validate() const {
  check_interval(scale_range, "struct.scale_range");
  check_interval(stroke_translate_range, "struct.stroke_translate_range");
  check_interval(stroke_scale_range, "struct.stroke_scale_range");
  require(scale_range.lo > 0.0 && stroke_scale_range.lo > 0.0, "struct: scale factors must be > 0");
  require(margin >= 0.0 && margin < 0.5, "struct.margin must lie in [0, 0.5)");
}

void FalseStrokeParams::validate() const {
  require(random_count_max >= 0, "false strokes: random_count_max must be >= 0");
  require(placement_inflate >= 0.0 && std::isfinite(placement_inflate),
          "false strokes: placement_inflate must be >= 0");
}

void EraseParams::validate() const {
  check_nonneg_interval(arc_fraction_range, "erase.arc_fraction_range");
  require(arc_fraction_range.hi <= 1.0, "erase.arc_fraction_range must lie in [0,1]");
  check_probability(whole_stroke_prob, "erase.whole_stroke_prob");
}

std::string_view to_string(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::erase: return "erase";
    case AugmentKind::sketch_distort: return "sketch_distort";
    case AugmentKind::misplace: return "misplace";
    case AugmentKind::resize: return "resize";
    case AugmentKind::wave: return "wave";
    case AugmentKind::spike: return "spike";
    case AugmentKind::jitter: return "jitter";
    case AugmentKind::transitional_false: return "transitional_false";
    case AugmentKind::random_false: return "random_false";
  }
  return "unknown";
}

AugmentKind augment_kind_from_string(std::string_view name) {
  for (AugmentKind k : kAllKinds) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCategory::format, "unknown augmentation '" + std::string(name) + "'");
}

double& FiringProbabilities::operator[](AugmentKind kind) {
  switch (kind) {
    case AugmentKind::erase: return erase;
    case AugmentKind::sketch_distort: return sketch_distort;
    case AugmentKind::misplace: return misplace;
    case AugmentKind::resize: return resize;
    case AugmentKind::wave: return wave;
    case AugmentKind::spike: return spike;
    case AugmentKind::jitter: return jitter;
    case AugmentKind::transitional_false: return transitional_false;
    case AugmentKind::random_false: return random_false;
  }
  return wave;
}

double FiringProbabilities::operator[](AugmentKind kind) const {
  return const_cast<FiringProbabilities&>(*this)[kind];
}

void AugmentConfig::validate() const {
  for (AugmentKind k : kAllKinds) check_probability(prob[k], "prob." + std::string(to_string(k)));
  require(wave_count.lo >= 1 && wave_count.lo <= wave_count.hi, "wave.count must satisfy 1 <= lo <= hi");
  wave.validate();
  spike.validate();
  check_probability(spike_smooth_prob, "spike.smooth_prob");
  require(jitter_sigma >= 0.0 && std::isfinite(jitter_sigma), "jitter.sigma must be >= 0");
  check_nonneg_interval(jitter_fraction_range, "jitter.vertex_fraction_range");
  require(jitter_fraction_range.hi <= 1.0, "jitter.vertex_fraction_range must lie in [0,1]");
  structure.validate();
  false_strokes.validate();
  erase.validate();
  require(resample_spacing > 0.0 && std::isfinite(resample_spacing), "resample.spacing must be positive");
}

AugmentConfig AugmentConfig::none() {
  AugmentConfig cfg;
  for (AugmentKind k : kAllKinds) cfg.prob[k] = 0.0;
  return cfg;
}

AugmentConfig AugmentConfig::only(AugmentKind kind, double p) {
  AugmentConfig cfg = none();
  cfg.prob[kind] = p;
  if (kind == AugmentKind::erase) cfg.erase_enabled = true;
  return cfg;
}

bool AugmentReport::fired(AugmentKind kind) const {
  return std::any_of(ops.begin(), ops.end(), [kind](const FiredOp& op) { return op.kind == kind; });
}

// --- local ---------------------------------------------------------------------

Stroke distort_stroke_wave(const Stroke& stroke, const WaveParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  struct Component {
    double amplitude, frequency, phase;
  };
  std::vector<Component> waves;
  waves.reserve(static_cast<std::size_t>(params.n_waves));
  for (int i = 0; i < params.n_waves; ++i) {
    Component c{};
    c.frequency = rng.uniform(params.freq_range.lo, params.freq_range.hi);
    c.amplitude = rng.uniform(params.amp_range.lo, params.amp_range.hi);
    c.phase = rng.uniform(params.phase_range.lo, params.phase_range.hi);
    waves.push_back(c);
  }

  const auto& pts = stroke.points;
  if (pts.size() < 2) return stroke;
  const auto cum = cumulative_length(pts);
  const double total = cum.back();
  if (total == 0.0) return stroke;
  const auto normals = vertex_normals(pts);

  Stroke out;
  out.points.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = cum[i] / total;
    double d = 0.0;
    for (const auto& w : waves) {
      d += w.amplitude * std::sin(2.0 * std::numbers::pi * w.frequency * t + w.phase);
    }
    out.points.push_back(clamp_unit(pts[i] + normals[i] * d));
  }
  return out;
}

Stroke add_spike(const Stroke& stroke, const SpikeParams& params, std::uint64_t seed,
                 std::vector<std::string>* notes) {
  params.validate();
  if (params.max_per_stroke == 0 || stroke.points.size() < 2) return stroke;
  Rng rng(seed);
  const auto count = rng.uniform_int(0, params.max_per_stroke);

  Stroke cur = stroke;
  for (std::int64_t k = 0; k < count; ++k) {
    // Every draw happens before the length check so the stream position does
    // not depend on geometry.
    const double width = std::abs(rng.normal(params.width.mean, params.width.sigma));
    const double height = std::abs(rng.normal(params.height.mean, params.height.sigma));
    const double off1 = rng.uniform(params.bezier_offset_range.lo, params.bezier_offset_range.hi);
    const double off2 = rng.uniform(params.bezier_offset_range.lo, params.bezier_offset_range.hi);
    const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const double where = rng.uniform();

    const auto& pts = cur.points;
    const auto cum = cumulative_length(pts);
    const double total = cum.back();
    if (!(total > width)) {
      if (notes) notes->push_back("stroke too short for spike of width " + std::to_string(width));
      continue;
    }
    const double centre = 0.5 * width + where * (total - width);
    const double a = centre - 0.5 * width;
    const double b = centre + 0.5 * width;
    const ArcSample mid = sample_at_length(pts, cum, centre);
    const Point normal = Point{-mid.tangent.y, mid.tangent.x} * side;
    const Point pa = sample_at_length(pts, cum, a).position;
    const Point pb = sample_at_length(pts, cum, b).position;

    std::vector<Point> next;
    next.reserve(pts.size() + 32);
    std::size_t i = 0;
    for (; i < pts.size() && cum[i] < a; ++i) next.push_back(pts[i]);
    push_distinct(next, pa);
    if (params.mode == SpikeMode::sharp) {
      next.push_back(clamp_unit(mid.position + normal * height));
    } else {
      const Point p1 = sample_at_length(pts, cum, a + width / 3.0).position + normal * off1;
      const Point p2 = sample_at_length(pts, cum, a + 2.0 * width / 3.0).position + normal * off2;
      // |B'| <= 3 * longest control edge, so this many uniform steps keeps
      // every chord within sample_spacing.
      const double edge = std::max({distance(pa, p1), distance(p1, p2), distance(p2, pb)});
      const auto pieces = static_cast<int>(std::max(1.0, std::ceil(3.0 * edge / params.sample_spacing)));
      for (int s = 1; s < pieces; ++s) {
        next.push_back(clamp_unit(cubic_bezier(pa, p1, p2, pb, static_cast<double>(s) / pieces)));
      }
    }
    next.push_back(pb);
    for (; i < pts.size(); ++i) {
      if (cum[i] > b) push_distinct(next, pts[i]);
    }
    cur.points = std::move(next);
  }
  return cur;
}

Stroke add_jitter(const Stroke& stroke, const JitterParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = stroke.points.size();
  if (params.sigma == 0.0 || params.vertex_fraction == 0.0 || n == 0) return stroke;
  Rng rng(seed);
  const auto count = static_cast<std::size_t>(std::llround(params.vertex_fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = 0; k < count; ++k) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(k),
                                                            static_cast<std::int64_t>(n - 1)));
    std::swap(order[k], order[j]);
  }
  Stroke out = stroke;
  for (std::size_t k = 0; k < count; ++k) {
    Point& p = out.points[order[k]];
    const double dx = rng.normal(0.0, params.sigma);
    const double dy = rng.normal(0.0, params.sigma);
    p = clamp_unit({p.x + dx, p.y + dy});
  }
  return out;
}

// --- structural ------------------------------------------------------------------

Sketch structural_transform(const Sketch& sketch, const StructParams& params, std::uint64_t seed,
                            StructFire fire) {
  params.validate();
  if (fire.misplace && fire.resize) {
    throw Error(ErrorCategory::exclusivity, "misplace and resize cannot fire together");
  }
  Sketch out = sketch;
  if (out.point_count() == 0) return out;

  if (fire.sketch_distort) {
    Rng rng(derive_seed(seed, "sketch_distort"));
    const double sx = rng.uniform(params.scale_range.lo, params.scale_range.hi);
    const double sy = rng.uniform(params.scale_range.lo, params.scale_range.hi);
    const double ux = rng.uniform();
    const double uy = rng.uniform();
    const Bounds b = bounds(out);
    const Point c = b.center();
    const double room = 1.0 - 2.0 * params.margin;
    const double slack_x = std::max(0.0, room - b.width() * sx);
    const double slack_y = std::max(0.0, room - b.height() * sy);
    const Point target{0.5 + (ux - 0.5) * slack_x, 0.5 + (uy - 0.5) * slack_y};
    const Point shift{target.x - c.x * sx, target.y - c.y * sy};
    for (auto& st : out.strokes) {
      for (Point& p : st.points) p = clamp_unit({p.x * sx + shift.x, p.y * sy + shift.y});
    }
  }
  if (fire.misplace) {
    Rng rng(derive_seed(seed, "misplace"));
    for (auto& st : out.strokes) {
      const double dx = rng.uniform(params.stroke_translate_range.lo, params.stroke_translate_range.hi);
      const double dy = rng.uniform(params.stroke_translate_range.lo, params.stroke_translate_range.hi);
      for (Point& p : st.points) p = clamp_unit({p.x + dx, p.y + dy});
    }
  }
  if (fire.resize) {
    Rng rng(derive_seed(seed, "resize"));
    for (auto& st : out.strokes) {
      const double f = rng.uniform(params.stroke_scale_range.lo, params.stroke_scale_range.hi);
      const Point c = vertex_centroid(st);
      // p*f + c*(1-f) is exact for f == 1.
      for (Point& p : st.points) p = clamp_unit({p.x * f + c.x * (1.0 - f), p.y * f + c.y * (1.0 - f)});
    }
  }
  return out;
}

// --- false strokes -----------------------------------------------------------------

Sketch add_false_strokes(const Sketch& sketch, const FalseStrokeParams& params, std::uint64_t seed,
                         std::vector<std::size_t>* added) {
  params.validate();
  Sketch out = sketch;
  auto append = [&](Point a, Point b) {
    if (added) added->push_back(out.strokes.size());
    out.strokes.push_back(Stroke{{clamp_unit(a), clamp_unit(b)}});
  };

  if (params.transitional) {
    for (std::size_t i = 0; i + 1 < sketch.strokes.size(); ++i) {
      const auto& from = sketch.strokes[i].points;
      const auto& to = sketch.strokes[i + 1].points;
      if (from.empty() || to.empty()) continue;
      append(from.back(), to.front());
    }
  }
  if (params.random_count_max > 0 && sketch.point_count() > 0) {
    Rng rng(derive_seed(seed, "random_false"));
    const auto count = rng.uniform_int(1, params.random_count_max);
    const Bounds b = bounds(sketch);
    const Point c = b.center();
    const double hw = 0.5 * b.width() * (1.0 + params.placement_inflate);
    const double hh = 0.5 * b.height() * (1.0 + params.placement_inflate);
    for (std::int64_t k = 0; k < count; ++k) {
      const Point a{rng.uniform(c.x - hw, c.x + hw), rng.uniform(c.y - hh, c.y + hh)};
      const Point e{rng.uniform(c.x - hw, c.x + hw), rng.uniform(c.y - hh, c.y + hh)};
      append(a, e);
    }
  }
  return out;
}

// --- erasure -------------------------------------------------------------------------

Sketch random_erase(const Sketch& sketch, const EraseParams& params, std::uint64_t seed,
                    std::vector<std::string>* notes) {
  params.validate();
  if (sketch.strokes.empty()) throw Error(ErrorCategory::empty_sketch, "cannot erase from an empty sketch");
  Rng rng(seed);
  const bool whole = rng.bernoulli(params.whole_stroke_prob);
  const double pick = rng.uniform();
  const double fraction = rng.uniform(params.arc_fraction_range.lo, params.arc_fraction_range.hi);
  const double where = rng.uniform();

  Sketch out = sketch;
  if (whole) {
    if (sketch.strokes.size() >= 2) {
      const auto idx = static_cast<std::size_t>(pick * static_cast<double>(sketch.strokes.size()));
      out.strokes.erase(out.strokes.begin() + static_cast<std::ptrdiff_t>(idx));
      if (notes) notes->push_back("removed stroke " + std::to_string(idx));
      return out;
    }
    if (notes) notes->push_back("single stroke: whole-stroke erase fell back to arc erase");
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < sketch.strokes.size(); ++i) {
    if (path_length(sketch.strokes[i]) > 0.0) candidates.push_back(i);
  }
  if (candidates.empty()) {
    if (notes) notes->push_back("no stroke with positive length; nothing erased");
    return out;
  }
  const std::size_t idx = candidates[static_cast<std::size_t>(pick * static_cast<double>(candidates.size()))];
  const auto& pts = sketch.strokes[idx].points;
  const auto cum = cumulative_length(pts);
  const double total = cum.back();
  const double cut = fraction * total;
  if (cut <= 0.0) return out;
  if (cut >= total && sketch.strokes.size() == 1) {
    if (notes) notes->push_back("erase would remove the only stroke; skipped");
    return out;
  }
  const double start = where * (total - cut);
  const double end = start + cut;

  std::vector<Stroke> pieces;
  if (start > 0.0) {
    Stroke before;
    for (std::size_t i = 0; i < pts.size() && cum[i] < start; ++i) before.points.push_back(pts[i]);
    push_distinct(before.points, sample_at_length(pts, cum, start).position);
    if (before.points.size() >= 2) pieces.push_back(std::move(before));
  }
  if (end < total) {
    Stroke after;
    after.points.push_back(sample_at_length(pts, cum, end).position);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (cum[i] > end) push_distinct(after.points, pts[i]);
    }
    if (after.points.size() >= 2) pieces.push_back(std::move(after));
  }
  out.strokes.erase(out.strokes.begin() + static_cast<std::ptrdiff_t>(idx));
  out.strokes.insert(out.strokes.begin() + static_cast<std::ptrdiff_t>(idx), pieces.begin(), pieces.end());
  if (notes) {
    notes->push_back("erased arc of stroke " + std::to_string(idx) + " fraction " + std::to_string(fraction));
  }
  return out;
}

// --- composition -----------------------------------------------------------------------

namespace {

OpParams params_for(AugmentKind kind, const AugmentConfig& cfg, std::uint64_t seed) {
  Rng rng(derive_seed(derive_seed(seed, to_string(kind)), "params"));
  switch (kind) {
    case AugmentKind::wave: {
      WaveParams p = cfg.wave;
      p.n_waves = static_cast<int>(rng.uniform_int(cfg.wave_count.lo, cfg.wave_count.hi));
      return p;
    }
    case AugmentKind::spike: {
      SpikeParams p = cfg.spike;
      p.mode = rng.bernoulli(cfg.spike_smooth_prob) ? SpikeMode::smooth : SpikeMode::sharp;
      return p;
    }
    case AugmentKind::jitter:
      return JitterParams{cfg.jitter_sigma,
                          rng.uniform(cfg.jitter_fraction_range.lo, cfg.jitter_fraction_range.hi)};
    case AugmentKind::sketch_distort:
    case AugmentKind::misplace:
    case AugmentKind::resize:
      return cfg.structure;
    case AugmentKind::transitional_false: {
      FalseStrokeParams p = cfg.false_strokes;
      p.transitional = true;
      p.random_count_max = 0;
      return p;
    }
    case AugmentKind::random_false: {
      FalseStrokeParams p = cfg.false_strokes;
      p.transitional = false;
      return p;
    }
    case AugmentKind::erase:
      return cfg.erase;
  }
  return cfg.wave;
}

template <typename Fn>
void for_each_stroke(Sketch& s, std::uint64_t seed, Fn&& fn) {
  for (std::size_t i = 0; i < s.strokes.size(); ++i) {
    s.strokes[i] = fn(s.strokes[i], derive_seed(seed, static_cast<std::uint64_t>(i)), i);
  }
}

Sketch execute(const Sketch& input, AugmentReport& report) {
  Sketch cur = input;
  bool resampled = false;
  report.false_strokes.clear();
  for (FiredOp& op : report.ops) {
    op.notes.clear();
    if (is_local(op.kind) && report.resampled && !resampled) {
      cur = resample_arclength(cur, report.resample_spacing);
      resampled = true;
    }
    switch (op.kind) {
      case AugmentKind::erase:
        cur = random_erase(cur, std::get<EraseParams>(op.params), op.seed, &op.notes);
        break;
      case AugmentKind::sketch_distort:
        cur = structural_transform(cur, std::get<StructParams>(op.params), op.seed, {true, false, false});
        break;
      case AugmentKind::misplace:
        cur = structural_transform(cur, std::get<StructParams>(op.params), op.seed, {false, true, false});
        break;
      case AugmentKind::resize:
        cur = structural_transform(cur, std::get<StructParams>(op.params), op.seed, {false, false, true});
        break;
      case AugmentKind::wave: {
        const auto& p = std::get<WaveParams>(op.params);
        for_each_stroke(cur, op.seed, [&](const Stroke& st, std::uint64_t s, std::size_t) {
          return distort_stroke_wave(st, p, s);
        });
        break;
      }
      case AugmentKind::spike: {
        const auto& p = std::get<SpikeParams>(op.params);
        for_each_stroke(cur, op.seed, [&](const Stroke& st, std::uint64_t s, std::size_t i) {
          std::vector<std::string> notes;
          Stroke r = add_spike(st, p, s, &notes);
          for (auto& n : notes) op.notes.push_back("stroke " + std::to_string(i) + ": " + n);
          return r;
        });
        break;
      }
      case AugmentKind::jitter: {
        const auto& p = std::get<JitterParams>(op.params);
        for_each_stroke(cur, op.seed, [&](const Stroke& st, std::uint64_t s, std::size_t) {
          return add_jitter(st, p, s);
        });
        break;
      }
      case AugmentKind::transitional_false:
      case AugmentKind::random_false:
        cur = add_false_strokes(cur, std::get<FalseStrokeParams>(op.params), op.seed, &report.false_strokes);
        break;
    }
  }
  return cur;
}

}  // namespace

Augmented apply(const Sketch& sketch, const AugmentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng fire(derive_seed(seed, "fire"));
  std::array<bool, kAllKinds.size()> on{};
  for (std::size_t i = 0; i < kAllKinds.size(); ++i) on[i] = fire.uniform() < cfg.prob[kAllKinds[i]];
  auto slot = [](AugmentKind k) { return static_cast<std::size_t>(k); };
  if (!cfg.erase_enabled) on[slot(AugmentKind::erase)] = false;
  if (on[slot(AugmentKind::misplace)] && on[slot(AugmentKind::resize)]) {
    if (fire.bernoulli(0.5)) {
      on[slot(AugmentKind::resize)] = false;
    } else {
      on[slot(AugmentKind::misplace)] = false;
    }
  }

  Augmented result;
  AugmentReport& report = result.report;
  report.seed = seed;
  report.resample_spacing = cfg.resample_spacing;
  for (AugmentKind k : kAllKinds) {
    if (!on[slot(k)]) continue;
    report.ops.push_back(FiredOp{k, derive_seed(seed, to_string(k)), params_for(k, cfg, seed), {}});
    if (is_local(k)) report.resampled = true;
  }
  result.sketch = execute(sketch, report);
  return result;
}

Sketch replay(const Sketch& sketch, const AugmentReport& report) {
  AugmentReport copy = report;
  return execute(sketch, copy);
}

// --- report serialisation ------------------------------------------------------------

namespace {

nlohmann::json interval_json(const Interval& iv) { return nlohmann::json::array({iv.lo, iv.hi}); }

Interval interval_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

nlohmann::json params_json(const OpParams& params) {
  return std::visit(
      [](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        nlohmann::json j;
        if constexpr (std::is_same_v<T, WaveParams>) {
          j = {{"n_waves", p.n_waves},
               {"freq_range", interval_json(p.freq_range)},
               {"amp_range", interval_json(p.amp_range)},
               {"phase_range", interval_json(p.phase_range)}};
        } else if constexpr (std::is_same_v<T, SpikeParams>) {
          j = {{"mode", p.mode == SpikeMode::sharp ? "sharp" : "smooth"},
               {"height", {p.height.mean, p.height.sigma}},
               {"width", {p.width.mean, p.width.sigma}},
               {"bezier_offset_range", interval_json(p.bezier_offset_range)},
               {"max_per_stroke", p.max_per_stroke},
               {"sample_spacing", p.sample_spacing}};
        } else if constexpr (std::is_same_v<T, JitterParams>) {
          j = {{"sigma", p.sigma}, {"vertex_fraction", p.vertex_fraction}};
        } else if constexpr (std::is_same_v<T, StructParams>) {
          j = {{"scale_range", interval_json(p.scale_range)},
               {"stroke_translate_range", interval_json(p.stroke_translate_range)},
               {"stroke_scale_range", interval_json(p.stroke_scale_range)},
               {"margin", p.margin}};
        } else if constexpr (std::is_same_v<T, FalseStrokeParams>) {
          j = {{"transitional", p.transitional},
               {"random_count_max", p.random_count_max},
               {"placement_inflate", p.placement_inflate}};
        } else {
          j = {{"arc_fraction_range", interval_json(p.arc_fraction_range)},
               {"whole_stroke_prob", p.whole_stroke_prob}};
        }
        return j;
      },
      params);
}

OpParams params_from(AugmentKind kind, const nlohmann::json& j) {
  switch (kind) {
    case AugmentKind::wave:
      return WaveParams{j.at("n_waves").get<int>(), interval_from(j.at("freq_range")),
                        interval_from(j.at("amp_range")), interval_from(j.at("phase_range"))};
    case AugmentKind::spike: {
      SpikeParams p;
      p.mode = j.at("mode").get<std::string>() == "smooth" ? SpikeMode::smooth : SpikeMode::sharp;
      p.height = {j.at("height").at(0).get<double>(), j.at("height").at(1).get<double>()};
      p.width = {j.at("width").at(0).get<double>(), j.at("width").at(1).get<double>()};
      p.bezier_offset_range = interval_from(j.at("bezier_offset_range"));
      p.max_per_stroke = j.at("max_per_stroke").get<int>();
      p.sample_spacing = j.at("sample_spacing").get<double>();
      return p;
    }
    case AugmentKind::jitter:
      return JitterParams{j.at("sigma").get<double>(), j.at("vertex_fraction").get<double>()};
    case AugmentKind::sketch_distort:
    case AugmentKind::misplace:
    case AugmentKind::resize:
      return StructParams{interval_from(j.at("scale_range")), interval_from(j.at("stroke_translate_range")),
                          interval_from(j.at("stroke_scale_range")), j.at("margin").get<double>()};
    case AugmentKind::transitional_false:
    case AugmentKind::random_false:
      return FalseStrokeParams{j.at("transitional").get<bool>(), j.at("random_count_max").get<int>(),
                               j.at("placement_inflate").get<double>()};
    case AugmentKind::erase:
      return EraseParams{interval_from(j.at("arc_fraction_range")), j.at("whole_stroke_prob").get<double>()};
  }
  throw Error(ErrorCategory::format, "unknown augmentation kind");
}

}  // namespace

nlohmann::json to_json(const AugmentReport& report) {
  nlohmann::json ops = nlohmann::json::array();
  for (const FiredOp& op : report.ops) {
    ops.push_back({{"op", to_string(op.kind)},
                   {"seed", op.seed},
                   {"params", params_json(op.params)},
                   {"notes", op.notes}});
  }
  return {{"seed", report.seed},
          {"resample_spacing", report.resample_spacing},
          {"resampled", report.resampled},
          {"ops", std::move(ops)},
          {"false_strokes", report.false_strokes}};
}

AugmentReport report_from_json(const nlohmann::json& j) {
  try {
    AugmentReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.resample_spacing = j.at("resample_spacing").get<double>();
    r.resampled = j.at("resampled").get<bool>();
    for (const auto& op : j.at("ops")) {
      FiredOp f;
      f.kind = augment_kind_from_string(op.at("op").get<std::string>());
      f.seed = op.at("seed").get<std::uint64_t>();
      f.params = params_from(f.kind, op.at("params"));
      if (op.contains("notes")) f.notes = op.at("notes").get<std::vector<std::string>>();
      r.ops.push_back(std::move(f));
    }
    r.false_strokes = j.at("false_strokes").get<std::vector<std::size_t>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::format, std::string("malformed augmentation report: ") + e.what());
  }
}

}  // namespace tracksketch
