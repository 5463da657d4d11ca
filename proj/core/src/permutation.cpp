#include "chronorder/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "chronorder/error.hpp"

namespace chronorder {

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)) {
  std::vector<char> seen(order_.size() + 1, 0);
  for (const int v : order_) {
    if (v < 1 || v > static_cast<int>(order_.size()) || seen[v]) {
      throw ValidationError("not a permutation of 1.." + std::to_string(order_.size()) + ": " +
                            to_string());
    }
    seen[v] = 1;
  }
}

Permutation Permutation::identity(std::size_t m) {
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 1);
  return Permutation(std::move(order));
}

Permutation Permutation::random(std::size_t m, Rng& rng) {
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  return Permutation(std::move(order)).canonical();
}

std::vector<int> Permutation::positions() const {
  std::vector<int> pos(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) pos[order_[k] - 1] = static_cast<int>(k + 1);
  return pos;
}

bool Permutation::is_canonical() const noexcept {
  return order_.size() < 2 || order_.front() < order_.back();
}

Permutation Permutation::canonical() const { return is_canonical() ? *this : reversed(); }

Permutation Permutation::reversed() const {
  Permutation out = *this;
  std::reverse(out.order_.begin(), out.order_.end());
  return out;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < order_.size(); ++k) os << (k ? " " : "") << order_[k];
  os << ')';
  return os.str();
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (const int v : p.order()) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
  return h;
}

double canonical_permutation_count(std::size_t m) {
  if (m < 2) return 1.0;
  double f = 1.0;
  for (std::size_t k = 2; k <= m; ++k) f *= static_cast<double>(k);
  return f / 2.0;
}

}  // namespace chronorder
