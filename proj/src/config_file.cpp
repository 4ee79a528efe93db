#include "tracksketch/config_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "tracksketch/error.hpp"

namespace tracksketch {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Interval parse_interval(const std::string& key, const std::string& value) {
  const auto comma = value.find(',');
  if (comma == std::string::npos) throw config_error(key + ": expected 'lo, hi'");
  return {parse_double(key, trim(value.substr(0, comma))), parse_double(key, trim(value.substr(comma + 1)))};
}

std::string fmt_interval(const Interval& iv) { return format_double(iv.lo) + ", " + format_double(iv.hi); }

struct Option {
  std::function<void(AugmentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const AugmentConfig&)> get;
};

template <typename Member>
Option double_option(Member member) {
  return {[member](AugmentConfig& c, const std::string& k, const std::string& v) { member(c) = parse_double(k, v); },
          [member](const AugmentConfig& c) { return format_double(member(const_cast<AugmentConfig&>(c))); }};
}

template <typename Member>
Option interval_option(Member member) {
  return {[member](AugmentConfig& c, const std::string& k, const std::string& v) { member(c) = parse_interval(k, v); },
          [member](const AugmentConfig& c) { return fmt_interval(member(const_cast<AugmentConfig&>(c))); }};
}

template <typename Member>
Option int_option(Member member) {
  return {[member](AugmentConfig& c, const std::string& k, const std::string& v) {
            member(c) = static_cast<int>(parse_integer(k, v));
          },
          [member](const AugmentConfig& c) { return std::to_string(member(const_cast<AugmentConfig&>(c))); }};
}

const std::vector<std::pair<std::string, Option>>& options() {
  static const std::vector<std::pair<std::string, Option>> table = [] {
    std::vector<std::pair<std::string, Option>> t;
    for (AugmentKind k : {AugmentKind::wave, AugmentKind::spike, AugmentKind::jitter, AugmentKind::sketch_distort,
                          AugmentKind::misplace, AugmentKind::resize, AugmentKind::transitional_false,
                          AugmentKind::random_false, AugmentKind::erase}) {
      t.emplace_back("prob." + std::string(to_string(k)),
                     double_option([k](AugmentConfig& c) -> double& { return c.prob[k]; }));
    }
    t.emplace_back("erase.enabled",
                   Option{[](AugmentConfig& c, const std::string& k, const std::string& v) {
                            c.erase_enabled = parse_bool(k, v);
                          },
                          [](const AugmentConfig& c) { return std::string(c.erase_enabled ? "true" : "false"); }});
    t.emplace_back("resample.spacing", double_option([](AugmentConfig& c) -> double& { return c.resample_spacing; }));
    t.emplace_back("wave.count",
                   Option{[](AugmentConfig& c, const std::string& k, const std::string& v) {
                            const Interval iv = parse_interval(k, v);
                            if (iv.lo != std::floor(iv.lo) || iv.hi != std::floor(iv.hi)) {
                              throw config_error(k + ": expected integers");
                            }
                            c.wave_count = {static_cast<int>(iv.lo), static_cast<int>(iv.hi)};
                          },
                          [](const AugmentConfig& c) {
                            return std::to_string(c.wave_count.lo) + ", " + std::to_string(c.wave_count.hi);
                          }});
    t.emplace_back("wave.freq_range", interval_option([](AugmentConfig& c) -> Interval& { return c.wave.freq_range; }));
    t.emplace_back("wave.amp_range", interval_option([](AugmentConfig& c) -> Interval& { return c.wave.amp_range; }));
    t.emplace_back("wave.phase_range", interval_option([](AugmentConfig& c) -> Interval& { return c.wave.phase_range; }));
    t.emplace_back("spike.smooth_prob", double_option([](AugmentConfig& c) -> double& { return c.spike_smooth_prob; }));
    t.emplace_back("spike.height_mean", double_option([](AugmentConfig& c) -> double& { return c.spike.height.mean; }));
    t.emplace_back("spike.height_sigma", double_option([](AugmentConfig& c) -> double& { return c.spike.height.sigma; }));
    t.emplace_back("spike.width_mean", double_option([](AugmentConfig& c) -> double& { return c.spike.width.mean; }));
    t.emplace_back("spike.width_sigma", double_option([](AugmentConfig& c) -> double& { return c.spike.width.sigma; }));
    t.emplace_back("spike.bezier_offset_range",
                   interval_option([](AugmentConfig& c) -> Interval& { return c.spike.bezier_offset_range; }));
    t.emplace_back("spike.max_per_stroke", int_option([](AugmentConfig& c) -> int& { return c.spike.max_per_stroke; }));
    t.emplace_back("spike.sample_spacing", double_option([](AugmentConfig& c) -> double& { return c.spike.sample_spacing; }));
    t.emplace_back("jitter.sigma", double_option([](AugmentConfig& c) -> double& { return c.jitter_sigma; }));
    t.emplace_back("jitter.vertex_fraction_range",
                   interval_option([](AugmentConfig& c) -> Interval& { return c.jitter_fraction_range; }));
    t.emplace_back("struct.scale_range", interval_option([](AugmentConfig& c) -> Interval& { return c.structure.scale_range; }));
    t.emplace_back("struct.stroke_translate_range",
                   interval_option([](AugmentConfig& c) -> Interval& { return c.structure.stroke_translate_range; }));
    t.emplace_back("struct.stroke_scale_range",
                   interval_option([](AugmentConfig& c) -> Interval& { return c.structure.stroke_scale_range; }));
    t.emplace_back("struct.margin", double_option([](AugmentConfig& c) -> double& { return c.structure.margin; }));
    t.emplace_back("false.random_count_max",
                   int_option([](AugmentConfig& c) -> int& { return c.false_strokes.random_count_max; }));
    t.emplace_back("false.placement_inflate",
                   double_option([](AugmentConfig& c) -> double& { return c.false_strokes.placement_inflate; }));
    t.emplace_back("erase.arc_fraction_range",
                   interval_option([](AugmentConfig& c) -> Interval& { return c.erase.arc_fraction_range; }));
    t.emplace_back("erase.whole_stroke_prob", double_option([](AugmentConfig& c) -> double& { return c.erase.whole_stroke_prob; }));
    return t;
  }();
  return table;
}

}  // namespace

KeyValues read_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(line_number) + ": empty key");
    kv.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

KeyValues read_key_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open config file " + path);
  return read_key_values(in);
}

bool set_augment_option(AugmentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& [name, opt] : options()) {
    if (name == key) {
      opt.set(cfg, key, value);
      return true;
    }
  }
  return false;
}

KeyValues augment_options(const AugmentConfig& cfg) {
  KeyValues kv;
  for (const auto& [name, opt] : options()) kv.emplace_back(name, opt.get(cfg));
  return kv;
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto r = std::from_chars(value.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
    throw config_error(key + ": '" + value + "' is not a finite number");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  const auto r = std::from_chars(value.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw config_error(key + ": '" + value + "' is not an integer");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw config_error(key + ": '" + value + "' is not a boolean");
}

}  // namespace tracksketch
