#include "chronorder/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "chronorder/error.hpp"

namespace chronorder {

namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(unsigned char c) {
  return c < 0x80 && std::ispunct(c) != 0;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizeOptions& options) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_ascii_space(c)) {
      if (!current.empty()) tokens.push_back(std::exchange(current, {}));
      continue;
    }
    if (options.strip_punctuation && is_ascii_punct(c)) continue;
    if (options.lowercase && c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  if (documents_.empty()) throw ValidationError("no documents");
  if (documents_.size() < 2) {
    throw ValidationError("a corpus needs at least 2 documents, got 1 ('" + documents_[0].id +
                          "')");
  }
  std::unordered_set<std::string> seen;
  for (const auto& doc : documents_) {
    if (!seen.insert(doc.id).second) throw ValidationError("duplicate document id '" + doc.id + "'");
    if (doc.tokens.empty()) throw ValidationError("document '" + doc.id + "' has no tokens");
    if (doc.year) {
      if (!span_) {
        span_ = YearSpan{*doc.year, *doc.year};
      } else {
        span_->first = std::min(span_->first, *doc.year);
        span_->last = std::max(span_->last, *doc.year);
      }
    }
  }
}

bool Corpus::fully_dated() const noexcept {
  return std::all_of(documents_.begin(), documents_.end(),
                     [](const Document& d) { return d.year.has_value(); });
}

std::size_t Corpus::total_tokens() const noexcept {
  std::size_t n = 0;
  for (const auto& d : documents_) n += d.tokens.size();
  return n;
}

std::vector<int> Corpus::years() const {
  std::set<int> ys;
  for (const auto& d : documents_) {
    if (d.year) ys.insert(*d.year);
  }
  return {ys.begin(), ys.end()};
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::jsonl;
  if (name == "directory" || name == "dir") return CorpusFormat::directory;
  if (name == "csv") return CorpusFormat::csv;
  throw ValidationError("unknown corpus format '" + std::string(name) +
                        "' (expected jsonl, directory or csv)");
}

std::string_view to_string(CorpusFormat format) noexcept {
  switch (format) {
    case CorpusFormat::jsonl: return "jsonl";
    case CorpusFormat::directory: return "directory";
    case CorpusFormat::csv: return "csv";
  }
  return "?";
}

SampleMode parse_sample_mode(std::string_view name) {
  if (name == "conflated") return SampleMode::conflated;
  if (name == "single") return SampleMode::single;
  throw ValidationError("unknown sampling mode '" + std::string(name) +
                        "' (expected conflated or single)");
}

std::string_view to_string(SampleMode mode) noexcept {
  return mode == SampleMode::conflated ? "conflated" : "single";
}

Corpus conflate_by_year(const Corpus& corpus) {
  std::map<int, Document> by_year;
  for (const auto& doc : corpus.documents()) {
    if (!doc.year) throw ValidationError("cannot conflate: document '" + doc.id + "' is undated");
    auto& merged = by_year[*doc.year];
    if (merged.tokens.empty()) {
      merged.id = std::to_string(*doc.year);
      merged.year = doc.year;
    }
    merged.tokens.insert(merged.tokens.end(), doc.tokens.begin(), doc.tokens.end());
  }
  std::vector<Document> out;
  out.reserve(by_year.size());
  for (auto& [year, doc] : by_year) out.push_back(std::move(doc));
  return Corpus(std::move(out));
}

std::vector<int> systematic_targets(const YearSpan& span, int start_year, std::size_t m,
                                    int step) {
  if (step < 1) throw ValidationError("sampling step must be >= 1");
  if (!span.contains(start_year)) throw ValidationError("start year outside the corpus span");
  const long long width = span.width();
  std::vector<int> targets;
  targets.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const long long offset =
        (static_cast<long long>(start_year - span.first) + static_cast<long long>(k) * step) % width;
    targets.push_back(static_cast<int>(span.first + offset));
  }
  return targets;
}

Sample systematic_sample(const Corpus& corpus, std::size_t m, int step, Rng& rng,
                         SampleMode mode) {
  if (m < 2) throw ValidationError("sample size m must be >= 2");
  if (step < 1) throw ValidationError("sampling step must be >= 1");
  if (!corpus.fully_dated() || !corpus.span()) {
    throw ValidationError("systematic sampling needs a fully dated corpus");
  }
  const YearSpan span = *corpus.span();

  std::map<int, std::vector<std::size_t>> docs_by_year;
  for (std::size_t i = 0; i < corpus.size(); ++i) docs_by_year[*corpus[i].year].push_back(i);
  if (docs_by_year.size() < m) {
    throw SamplingError("corpus has " + std::to_string(docs_by_year.size()) +
                        " distinct years, cannot draw " + std::to_string(m));
  }

  std::uniform_int_distribution<int> start_dist(span.first, span.last);
  const int start = start_dist(rng);
  const auto targets = systematic_targets(span, start, m, step);

  std::set<int> used;
  Sample sample;
  sample.start_year = start;
  for (const int target : targets) {
    // nearest unused dated year, ties to the earlier one
    std::optional<int> best;
    for (const auto& [year, _] : docs_by_year) {
      if (used.count(year)) continue;
      if (!best || std::abs(year - target) < std::abs(*best - target)) best = year;
    }
    used.insert(*best);
    const auto& members = docs_by_year.at(*best);
    Document doc;
    if (mode == SampleMode::single) {
      std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
      doc = corpus[members[pick(rng)]];
    } else {
      doc.id = std::to_string(*best);
      doc.year = *best;
      for (const auto idx : members) {
        const auto& toks = corpus[idx].tokens;
        doc.tokens.insert(doc.tokens.end(), toks.begin(), toks.end());
      }
    }
    sample.years.push_back(*best);
    sample.documents.push_back(std::move(doc));
  }

  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return sample.years[a] < sample.years[b]; });
  sample.true_rank.assign(m, 0);
  for (std::size_t r = 0; r < m; ++r) sample.true_rank[idx[r]] = static_cast<int>(r + 1);
  return sample;
}

}  // namespace chronorder
