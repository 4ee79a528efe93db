#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tracksketch/config_file.hpp"
#include "tracksketch/dataset.hpp"
#include "tracksketch/error.hpp"
#include "tracksketch/metrics.hpp"
#include "tracksketch/tracking.hpp"

namespace tracksketch {

/// Every tunable the commands read, settable from a config file or `--set`.
struct Settings {
  DatasetOptions dataset;  // seed, render.*, dataset.*, augmentation keys
  MetricsConfig metrics;
  PenHeuristic pen;
  CanvasSpec canvas;
  double filter_fraction = 0.05;

  void validate() const;
};

/// Applies one `key = value`. Unknown keys are config errors.
void set_setting(Settings& settings, const std::string& key, const std::string& value);
KeyValues describe_settings(const Settings& settings);

/// Exit status for a failure category: usage 2, io 3, config 4, anything else 5.
int exit_code(ErrorCategory category);

/// Runs one command. `args` excludes the program name. Results go to files
/// named on the command line; `out` receives help text and stdout results,
/// `err` receives warnings and the single `error: <category>: <message>` line.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace tracksketch
