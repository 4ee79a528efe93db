#include "tracksketch/error.hpp"

namespace tracksketch {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::io: return "io";
    case ErrorCategory::config: return "config";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::range: return "range";
    case ErrorCategory::empty_sketch: return "empty-sketch";
    case ErrorCategory::shape: return "shape";
    case ErrorCategory::empty_foreground: return "empty-foreground";
    case ErrorCategory::insufficient_data: return "insufficient-data";
    case ErrorCategory::exclusivity: return "exclusivity";
    case ErrorCategory::format: return "format";
    case ErrorCategory::degenerate_geometry: return "degenerate-geometry";
    case ErrorCategory::incomplete_stats: return "incomplete-stats";
  }
  return "unknown";
}

}  // namespace tracksketch
