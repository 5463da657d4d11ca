#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronorder/annealing.hpp"
#include "chronorder/bandwidth.hpp"
#include "chronorder/corpus.hpp"
#include "chronorder/kernel.hpp"

namespace chronorder::cli {

struct RunConfig {
  std::filesystem::path corpus;
  std::optional<CorpusFormat> format;  // guessed from the path when unset
  TokenizeOptions tokenize{};
  SampleMode mode = SampleMode::conflated;
  std::size_t m = 10;
  int step = 24;
  std::size_t reps = 100;
  std::size_t baseline_reps = 0;
  std::size_t min_docs = 2;
  VocabularyFilter filter = VocabularyFilter::distinct_documents;

  double df = 5.0;
  SquaredIntegralMethod squared_integral = SquaredIntegralMethod::quadrature;
  VarianceScale variance_scale = VarianceScale::proportion;

  AnnealSchedule schedule{};
  bool exhaustive = false;

  std::uint64_t seed = 1;
  std::filesystem::path out;
  std::size_t threads = 0;  // 0: all available cores

  /// Applies one `key = value` setting; unknown keys and bad values throw
  /// ValidationError.
  void set(std::string_view key, std::string_view value);

  /// Every setting as it would be written to a config file, for provenance.
  std::vector<std::pair<std::string, std::string>> settings() const;

  KernelSpec kernel() const;
  BandwidthOptions bandwidth() const;
  CorpusFormat resolved_format() const;
  std::size_t resolved_threads() const;

  /// Checks bounds; with `needs_corpus` the corpus path must also exist.
  void validate(bool needs_corpus) const;
};

/// Reads a TOML-style file of `key = value` lines. `[section]` headers are
/// accepted and ignored, `#` starts a comment, strings may be double-quoted.
/// A relative corpus path is taken relative to the file's directory.
void load_config_file(const std::filesystem::path& path, RunConfig& config);

}  // namespace chronorder::cli
