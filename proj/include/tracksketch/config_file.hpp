#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tracksketch/augment.hpp"

namespace tracksketch {

// Plain-text configuration: one `key = value` per line, `#` starts a comment.
// Intervals are written as two comma-separated numbers: `wave.amp_range = 0.005, 0.02`.

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses key/value lines, preserving order. Malformed lines are config errors.
KeyValues read_key_values(std::istream& in);
KeyValues read_key_values_file(const std::string& path);

/// Sets one augmentation option. Returns false when the key is not an
/// augmentation key; throws config when the value does not parse.
bool set_augment_option(AugmentConfig& cfg, const std::string& key, const std::string& value);

/// Every augmentation option with its current value, in documentation order.
KeyValues augment_options(const AugmentConfig& cfg);

std::string format_key_values(const KeyValues& kv);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

double parse_double(const std::string& key, const std::string& value);
long long parse_integer(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);

}  // namespace tracksketch
