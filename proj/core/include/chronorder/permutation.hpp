#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "chronorder/rng.hpp"

namespace chronorder {

/// A temporal ordering of documents 1..m: order()[k] is the document placed at
/// time rank k + 1. A sequence and its reverse describe the same chronology;
/// the canonical representative has front() < back().
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> order);

  static Permutation identity(std::size_t m);
  /// Uniform over the m!/2 reversal classes, returned canonical.
  static Permutation random(std::size_t m, Rng& rng);

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<int>& order() const noexcept { return order_; }
  int operator[](std::size_t k) const { return order_[k]; }

  /// Time rank (1-based) of each document, indexed by document - 1.
  std::vector<int> positions() const;

  bool is_canonical() const noexcept;
  Permutation canonical() const;
  Permutation reversed() const;

  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> order_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

/// m!/2 for m >= 2, 1 otherwise.
double canonical_permutation_count(std::size_t m);

}  // namespace chronorder
