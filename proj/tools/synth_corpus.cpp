// Writes a Quick, Draw!-style NDJSON corpus of synthetic doodles, and
// optionally one ideal hand-landmark recording per doodle.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "synthetic.hpp"
#include "tracksketch/dataset.hpp"
#include "tracksketch/error.hpp"
#include "tracksketch/quickdraw.hpp"
#include "tracksketch/tracking.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic doodle corpus generator", "synth_corpus"};
  std::size_t n = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string recordings;
  app.add_option("--n", n, "Number of sketches")->capture_default_str();
  app.add_option("--seed", seed, "Seed")->capture_default_str();
  app.add_option("--out", out, "Output NDJSON")->required();
  app.add_option("--recordings", recordings, "Also write <id>.jsonl landmark recordings into this directory");
  CLI11_PARSE(app, argc, argv);

  try {
    namespace ts = tracksketch;
    const auto corpus = ts::testing::synthetic_corpus(n, seed);
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw ts::Error(ts::ErrorCategory::io, "cannot open " + out);
    for (const auto& s : corpus) file << ts::serialize_quickdraw(s) << '\n';
    if (!recordings.empty()) {
      std::filesystem::create_directories(recordings);
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::ofstream rec(std::filesystem::path(recordings) / (ts::sample_id(i) + ".jsonl"), std::ios::binary);
        if (!rec) throw ts::Error(ts::ErrorCategory::io, "cannot write recordings into " + recordings);
        ts::write_landmarks(rec, ts::testing::synthesize_recording(corpus[i]));
      }
    }
  } catch (const tracksketch::Error& e) {
    std::cerr << "error: " << tracksketch::to_string(e.category()) << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
