#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "chronorder/corpus.hpp"
#include "chronorder/error.hpp"

namespace chronorder {

TermDocumentCounts::TermDocumentCounts(std::vector<std::string> document_ids,
                                       std::vector<std::uint64_t> totals,
                                       std::vector<std::string> vocabulary,
                                       std::vector<std::vector<Entry>> rows)
    : document_ids_(std::move(document_ids)),
      totals_(std::move(totals)),
      vocabulary_(std::move(vocabulary)),
      rows_(std::move(rows)) {
  if (document_ids_.size() != totals_.size()) {
    throw ValidationError("document id and total counts differ in length");
  }
  if (vocabulary_.size() != rows_.size()) throw ValidationError("vocabulary and rows differ in length");
  for (const auto& row : rows_) {
    for (const auto& e : row) {
      if (e.doc >= totals_.size()) throw ValidationError("count entry refers to a missing document");
    }
  }
  unfiltered_size_ = vocabulary_.size();
}

std::vector<std::uint64_t> TermDocumentCounts::dense_row(std::size_t word) const {
  std::vector<std::uint64_t> out(num_documents(), 0);
  for (const auto& e : rows_.at(word)) out[e.doc] = e.count;
  return out;
}

std::uint64_t TermDocumentCounts::word_frequency(std::size_t word) const {
  std::uint64_t n = 0;
  for (const auto& e : rows_.at(word)) n += e.count;
  return n;
}

std::optional<std::size_t> TermDocumentCounts::find_word(std::string_view word) const {
  const auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), word);
  if (it == vocabulary_.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary_.begin());
}

TermDocumentCounts TermDocumentCounts::with_ranks(std::vector<int> ranks) const {
  if (ranks.size() != num_documents()) throw ValidationError("ranks must cover every document");
  std::vector<int> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i + 1)) throw ValidationError("ranks must be a permutation of 1..m");
  }
  TermDocumentCounts copy = *this;
  copy.ranks_ = std::move(ranks);
  return copy;
}

TermDocumentCounts build_counts(const std::vector<Document>& docs, std::size_t min_docs,
                                VocabularyFilter filter) {
  if (docs.empty()) throw ValidationError("no documents to count");
  std::unordered_set<std::string> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.id).second) throw ValidationError("duplicate document id '" + d.id + "'");
  }

  std::unordered_map<std::string, std::vector<TermDocumentCounts::Entry>> rows;
  std::vector<std::uint64_t> totals;
  std::vector<std::string> doc_ids;
  totals.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    doc_ids.push_back(docs[d].id);
    totals.push_back(docs[d].tokens.size());
    std::unordered_map<std::string_view, std::uint32_t> local;
    for (const auto& tok : docs[d].tokens) ++local[tok];
    for (const auto& [word, count] : local) {
      rows[std::string(word)].push_back({static_cast<std::uint32_t>(d), count});
    }
  }

  std::vector<std::string> vocabulary;
  for (const auto& [word, row] : rows) {
    std::uint64_t score = 0;
    if (filter == VocabularyFilter::distinct_documents) {
      score = row.size();
    } else {
      for (const auto& e : row) score += e.count;
    }
    if (score >= min_docs) vocabulary.push_back(word);
  }
  std::sort(vocabulary.begin(), vocabulary.end());

  std::vector<std::vector<TermDocumentCounts::Entry>> kept;
  kept.reserve(vocabulary.size());
  for (const auto& w : vocabulary) {
    auto row = std::move(rows[w]);
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.doc < b.doc; });
    kept.push_back(std::move(row));
  }
  const std::size_t unfiltered = rows.size();
  TermDocumentCounts out(std::move(doc_ids), std::move(totals), std::move(vocabulary),
                         std::move(kept));
  out.set_unfiltered_vocabulary_size(unfiltered);
  return out;
}

}  // namespace chronorder
