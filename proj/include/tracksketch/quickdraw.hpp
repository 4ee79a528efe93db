#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tracksketch/geometry.hpp"

namespace tracksketch {

// Quick, Draw! "simplified" NDJSON records:
//   {"word": "cat", "key_id": "...", "drawing": [[[x0,x1,...],[y0,y1,...]], ...]}
// Integer coordinates in [0,255] map to the unit canvas by dividing by 255.

/// `line_number` is only used to give errors context (0 = unknown).
Sketch parse_quickdraw_line(std::string_view text, std::size_t line_number = 0);

/// Re-quantises coordinates to integers 0-255. `key_id` is written when the
/// sketch carries a source id.
std::string serialize_quickdraw(const Sketch& sketch);

/// Parses every non-blank line of an NDJSON stream.
std::vector<Sketch> read_quickdraw(std::istream& in);
std::vector<Sketch> read_quickdraw_file(const std::string& path);

}  // namespace tracksketch
