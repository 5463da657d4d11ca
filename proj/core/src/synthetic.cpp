#include "chronorder/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "chronorder/error.hpp"
#include "chronorder/rng.hpp"

namespace chronorder {

namespace {

struct EraWindow {
  int first;
  int last;
};

void check(const DriftCorpusParams& p) {
  if (p.last_year < p.first_year) throw ValidationError("drift corpus: last_year < first_year");
  if (p.docs_per_year == 0 || p.doc_length == 0) throw ValidationError("drift corpus: empty documents");
  if (!(p.min_era_fraction > 0.0 && p.min_era_fraction <= p.max_era_fraction &&
        p.max_era_fraction <= 1.0)) {
    throw ValidationError("drift corpus: era fractions must satisfy 0 < min <= max <= 1");
  }
  if (!(p.rate > 0.0) ||
      p.rate * static_cast<double>(p.era_words + p.uniform_words) >= 1.0) {
    throw ValidationError("drift corpus: word rates leave no room for the filler token");
  }
}

std::vector<EraWindow> draw_windows(const DriftCorpusParams& p, Rng& rng) {
  const int width = p.last_year - p.first_year + 1;
  std::uniform_real_distribution<double> frac(p.min_era_fraction, p.max_era_fraction);
  std::vector<EraWindow> out;
  out.reserve(p.era_words);
  for (std::size_t i = 0; i < p.era_words; ++i) {
    const int w = std::max(1, static_cast<int>(std::lround(frac(rng) * width)));
    std::uniform_int_distribution<int> start(p.first_year, p.last_year - w + 1);
    const int s = start(rng);
    out.push_back({s, s + w - 1});
  }
  return out;
}

}  // namespace

Corpus make_drift_corpus_at(const DriftCorpusParams& params, const std::vector<int>& years) {
  check(params);
  if (years.empty()) throw ValidationError("drift corpus: no years");
  Rng rng(derive_seed(params.seed, 0x44524946ULL));  // "DRIF"
  const auto windows = draw_windows(params, rng);
  const double mean = params.rate * static_cast<double>(params.doc_length);
  std::poisson_distribution<int> count(mean);

  std::vector<Document> docs;
  docs.reserve(years.size() * params.docs_per_year);
  for (const int year : years) {
    for (std::size_t d = 0; d < params.docs_per_year; ++d) {
      Document doc;
      doc.id = params.docs_per_year == 1 ? "y" + std::to_string(year)
                                         : "y" + std::to_string(year) + "_" + std::to_string(d);
      doc.year = year;
      std::size_t used = 0;
      auto emit = [&](const std::string& word, int n) {
        for (int k = 0; k < n && used < params.doc_length; ++k, ++used) doc.tokens.push_back(word);
      };
      for (std::size_t i = 0; i < windows.size(); ++i) {
        if (year >= windows[i].first && year <= windows[i].last) emit("e" + std::to_string(i), count(rng));
      }
      for (std::size_t i = 0; i < params.uniform_words; ++i) emit("u" + std::to_string(i), count(rng));
      doc.tokens.insert(doc.tokens.end(), params.doc_length - used, "filler");
      docs.push_back(std::move(doc));
    }
  }
  return Corpus(std::move(docs));
}

Corpus make_drift_corpus(const DriftCorpusParams& params) {
  check(params);
  std::vector<int> years;
  for (int y = params.first_year; y <= params.last_year; ++y) years.push_back(y);
  return make_drift_corpus_at(params, years);
}

}  // namespace chronorder
