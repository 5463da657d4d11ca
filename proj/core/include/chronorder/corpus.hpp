#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronorder/rng.hpp"

namespace chronorder {

struct TokenizeOptions {
  bool lowercase = true;
  bool strip_punctuation = true;
};

/// Splits on whitespace after ASCII lowercasing and punctuation removal. Bytes
/// outside ASCII are passed through untouched, so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizeOptions& options = {});

struct Document {
  std::string id;
  std::optional<int> year;
  std::vector<std::string> tokens;
};

struct YearSpan {
  int first = 0;
  int last = 0;

  int width() const noexcept { return last - first + 1; }
  bool contains(int year) const noexcept { return year >= first && year <= last; }
};

/// An immutable collection of at least two documents with unique ids and
/// non-empty token lists. The span covers the dated documents, if any.
class Corpus {
 public:
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const noexcept { return documents_; }
  std::size_t size() const noexcept { return documents_.size(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }

  const std::optional<YearSpan>& span() const noexcept { return span_; }
  bool fully_dated() const noexcept;
  std::size_t total_tokens() const noexcept;

  /// Distinct years present, ascending.
  std::vector<int> years() const;

 private:
  std::vector<Document> documents_;
  std::optional<YearSpan> span_;
};

enum class CorpusFormat { jsonl, directory, csv };

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format) noexcept;

/// Reads one of the supported on-disk layouts:
///   jsonl      one {"id", "date"?, "text"} object per line
///   directory  one `ID_YEAR.txt` (YEAR optional) per document
///   csv        header `id,date,text`, RFC 4180 quoting
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const TokenizeOptions& options = {});

/// Merges all documents of a calendar year into one document whose id is the
/// year and whose tokens are the concatenation in input order.
Corpus conflate_by_year(const Corpus& corpus);

enum class SampleMode { conflated, single };

SampleMode parse_sample_mode(std::string_view name);
std::string_view to_string(SampleMode mode) noexcept;

struct Sample {
  std::vector<Document> documents;  // in draw order
  std::vector<int> years;           // resolved year of each drawn document
  std::vector<int> true_rank;       // 1..m by year
  int start_year = 0;
};

/// Systematic sampling: a uniform start year, then targets every `step` years
/// wrapping modulo the span width. A target without documents resolves to the
/// nearest unused dated year (ties go to the earlier year).
Sample systematic_sample(const Corpus& corpus, std::size_t m, int step, Rng& rng,
                         SampleMode mode);

/// The wrapped target years of systematic sampling, before resolution.
std::vector<int> systematic_targets(const YearSpan& span, int start_year,
                                    std::size_t m, int step);

enum class VocabularyFilter {
  distinct_documents,  // word occurs in >= min_docs documents
  total_occurrences,   // word occurs >= min_docs times overall
};

/// Word x document counts, stored sparse by word. Totals are taken over the
/// full token stream before any vocabulary filtering.
class TermDocumentCounts {
 public:
  struct Entry {
    std::uint32_t doc;
    std::uint32_t count;
  };

  TermDocumentCounts(std::vector<std::string> document_ids,
                     std::vector<std::uint64_t> totals,
                     std::vector<std::string> vocabulary,
                     std::vector<std::vector<Entry>> rows);

  std::size_t num_documents() const noexcept { return totals_.size(); }
  std::size_t num_words() const noexcept { return vocabulary_.size(); }

  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<std::string>& document_ids() const noexcept { return document_ids_; }
  const std::vector<std::uint64_t>& totals() const noexcept { return totals_; }
  const std::vector<Entry>& row(std::size_t word) const { return rows_[word]; }

  std::vector<std::uint64_t> dense_row(std::size_t word) const;
  std::uint64_t word_frequency(std::size_t word) const;
  std::optional<std::size_t> find_word(std::string_view word) const;

  /// Temporal rank 1..m of each document, when an ordering is imposed.
  const std::optional<std::vector<int>>& ranks() const noexcept { return ranks_; }
  TermDocumentCounts with_ranks(std::vector<int> ranks) const;

  /// Size of the unfiltered vocabulary the counts were built from.
  std::size_t unfiltered_vocabulary_size() const noexcept { return unfiltered_size_; }
  void set_unfiltered_vocabulary_size(std::size_t n) noexcept { unfiltered_size_ = n; }

 private:
  std::vector<std::string> document_ids_;
  std::vector<std::uint64_t> totals_;
  std::vector<std::string> vocabulary_;
  std::vector<std::vector<Entry>> rows_;
  std::optional<std::vector<int>> ranks_;
  std::size_t unfiltered_size_ = 0;
};

TermDocumentCounts build_counts(const std::vector<Document>& docs,
                                std::size_t min_docs = 2,
                                VocabularyFilter filter = VocabularyFilter::distinct_documents);

}  // namespace chronorder
