#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chronorder/corpus.hpp"

namespace chronorder {

/// Generator for dated corpora with planted vocabulary drift: "era" words are
/// used only inside one contiguous window of years, "uniform" words at a
/// constant rate throughout, and a filler token takes the remaining mass.
struct DriftCorpusParams {
  int first_year = 1100;
  int last_year = 1299;
  std::size_t docs_per_year = 1;
  std::size_t doc_length = 2000;
  std::size_t era_words = 150;
  std::size_t uniform_words = 150;
  double min_era_fraction = 0.1;  // era width as a fraction of the span
  double max_era_fraction = 0.4;
  double rate = 3e-3;  // mean per-token rate of a non-filler word
  std::uint64_t seed = 1;
};

Corpus make_drift_corpus(const DriftCorpusParams& params);

/// Documents at `years` (ascending) drawn from the same kind of generator.
Corpus make_drift_corpus_at(const DriftCorpusParams& params, const std::vector<int>& years);

}  // namespace chronorder
