#include "chronorder/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "chronorder/error.hpp"
#include "chronorder/parallel.hpp"

namespace chronorder {

Permutation apply_segment_move(const Permutation& perm, const SegmentMove& move) {
  const auto& order = perm.order();
  const std::size_t m = order.size();
  if (move.length == 0 || move.start + move.length > m) {
    throw DomainError("segment [" + std::to_string(move.start) + ", " +
                      std::to_string(move.start + move.length) + ") outside a sequence of " +
                      std::to_string(m));
  }
  std::vector<int> segment(order.begin() + static_cast<std::ptrdiff_t>(move.start),
                           order.begin() + static_cast<std::ptrdiff_t>(move.start + move.length));
  if (move.reverse) std::reverse(segment.begin(), segment.end());

  std::vector<int> out;
  out.reserve(m);
  if (!move.insert_at) {
    out = order;
    std::copy(segment.begin(), segment.end(), out.begin() + static_cast<std::ptrdiff_t>(move.start));
    return Permutation(std::move(out));
  }
  std::vector<int> rest;
  rest.reserve(m - move.length);
  for (std::size_t k = 0; k < m; ++k) {
    if (k < move.start || k >= move.start + move.length) rest.push_back(order[k]);
  }
  if (*move.insert_at > rest.size()) throw DomainError("segment insertion point out of range");
  out.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(*move.insert_at));
  out.insert(out.end(), segment.begin(), segment.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(*move.insert_at), rest.end());
  return Permutation(std::move(out));
}

namespace {

Permutation adjacent_swap(const Permutation& perm, std::size_t i) {
  auto order = perm.order();
  std::swap(order[i], order[i + 1]);
  return Permutation(std::move(order));
}

SegmentMove random_segment_move(std::size_t m, Rng& rng) {
  std::uniform_int_distribution<std::size_t> start_dist(0, m - kSegmentLength);
  std::uniform_int_distribution<int> kind_dist(0, 2);  // reverse, move, reverse + move
  std::uniform_int_distribution<std::size_t> insert_dist(0, m - kSegmentLength);
  SegmentMove move;
  move.start = start_dist(rng);
  const int kind = kind_dist(rng);
  move.reverse = kind != 1;
  if (kind != 0) move.insert_at = insert_dist(rng);
  return move;
}

// Length-4 reversals and block moves are even permutations. When reversing the
// whole sequence is even too (m % 4 in {0, 1}) they only reach half of the
// canonical orders, so adjacent transpositions are mixed in.
bool segment_moves_need_transpositions(std::size_t m) { return m % 4 == 0 || m % 4 == 1; }

}  // namespace

Permutation propose_neighbor(const Permutation& perm, Rng& rng, const NeighborOptions& options) {
  const std::size_t m = perm.size();
  const Permutation from = perm.canonical();
  if (m <= 2) return from;
  if (m < 5) {
    std::uniform_int_distribution<std::size_t> pos(0, m - 2);
    while (true) {
      auto next = adjacent_swap(from, pos(rng)).canonical();
      if (next != from) return next;
    }
  }
  const std::size_t segments = std::max<std::size_t>(1, options.segments_per_proposal);
  const bool mix = segment_moves_need_transpositions(m);
  std::bernoulli_distribution transpose(0.5);
  std::uniform_int_distribution<std::size_t> pos(0, m - 2);
  while (true) {
    if (mix && transpose(rng)) {
      auto next = adjacent_swap(from, pos(rng)).canonical();
      if (next != from) return next;
      continue;
    }
    Permutation next = from;
    for (std::size_t s = 0; s < segments; ++s) next = apply_segment_move(next, random_segment_move(m, rng));
    next = next.canonical();
    if (next != from) return next;
  }
}

std::vector<Permutation> enumerate_neighbors(const Permutation& perm) {
  const std::size_t m = perm.size();
  const Permutation from = perm.canonical();
  std::set<std::vector<int>> seen;
  auto add = [&](const Permutation& p) {
    const auto c = p.canonical();
    if (c != from) seen.insert(c.order());
  };
  if (m >= 5) {
    for (std::size_t start = 0; start + kSegmentLength <= m; ++start) {
      add(apply_segment_move(from, {start, kSegmentLength, true, std::nullopt}));
      for (std::size_t at = 0; at <= m - kSegmentLength; ++at) {
        add(apply_segment_move(from, {start, kSegmentLength, false, at}));
        add(apply_segment_move(from, {start, kSegmentLength, true, at}));
      }
    }
    if (segment_moves_need_transpositions(m)) {
      for (std::size_t i = 0; i + 1 < m; ++i) add(adjacent_swap(from, i));
    }
  } else if (m >= 3) {
    for (std::size_t i = 0; i + 1 < m; ++i) add(adjacent_swap(from, i));
  }
  std::vector<Permutation> out;
  out.reserve(seen.size());
  for (const auto& o : seen) out.emplace_back(o);
  return out;
}

void AnnealSchedule::validate() const {
  if (t_initial && !(*t_initial > 0.0)) throw ValidationError("initial temperature must be positive");
  if (!(cooling > 0.0 && cooling < 1.0)) throw ValidationError("cooling factor must lie in (0, 1)");
  if (proposals_per_temp == 0) throw ValidationError("proposals per temperature must be positive");
  if (max_evaluations == 0) throw ValidationError("evaluation budget must be positive");
  if (stall_limit == 0) throw ValidationError("stall limit must be positive");
  if (restarts == 0) throw ValidationError("at least one restart is required");
  if (!t_initial && calibration_samples < 2) {
    throw ValidationError("temperature calibration needs at least 2 samples");
  }
}

namespace {

// Chain-local memo keyed by canonical order; failures carry the order.
class CachedObjective {
 public:
  explicit CachedObjective(const OrderObjective& objective) : objective_(objective) {}

  double operator()(const Permutation& perm) {
    const Permutation key = perm.canonical();
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    double value = 0.0;
    try {
      value = objective_(key);
    } catch (const std::exception& e) {
      throw ObjectiveError("objective failed at " + key.to_string() + ": " + e.what());
    }
    if (!std::isfinite(value)) {
      throw ObjectiveError("objective is not finite at " + key.to_string());
    }
    cache_.emplace(key, value);
    return value;
  }

  std::size_t size() const noexcept { return cache_.size(); }

 private:
  const OrderObjective& objective_;
  std::unordered_map<Permutation, double, PermutationHash> cache_;
};

double sample_sd(const std::vector<double>& v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Floor used when the calibration sample is flat.
constexpr double kMinTemperature = 1e-12;

}  // namespace

double calibrate_temperature(const OrderObjective& objective, std::size_t m, std::size_t samples,
                             Rng& rng) {
  std::vector<double> hs;
  hs.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) hs.push_back(objective(Permutation::random(m, rng)));
  return std::max(sample_sd(hs), kMinTemperature);
}

OrderingResult anneal(const OrderObjective& objective, const Permutation& init,
                      const AnnealSchedule& schedule) {
  schedule.validate();
  Rng rng(schedule.seed);
  CachedObjective eval(objective);
  const std::size_t m = init.size();

  OrderingResult result;
  result.t_initial = schedule.t_initial
                         ? *schedule.t_initial
                         : calibrate_temperature([&](const Permutation& p) { return eval(p); }, m,
                                                 schedule.calibration_samples, rng);

  Permutation current = init.canonical();
  double h_current = eval(current);
  result.best = current;
  result.H_best = h_current;
  result.evaluations = 1;
  result.trace.push_back({0, result.t_initial, h_current, true});

  if (m <= 2) {
    result.unique_evaluations = eval.size();
    return result;
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double temperature = result.t_initial;
  std::size_t since_improvement = 0;
  bool stop = false;
  while (!stop && result.evaluations < schedule.max_evaluations) {
    for (std::size_t j = 0; j < schedule.proposals_per_temp; ++j) {
      if (result.evaluations >= schedule.max_evaluations) {
        stop = true;
        break;
      }
      Permutation candidate = propose_neighbor(current, rng, schedule.neighbor);
      const double h = eval(candidate);
      ++result.evaluations;
      const double delta = h - h_current;
      const bool accept = delta >= 0.0 || unit(rng) < std::exp(delta / temperature);
      if (accept) {
        current = std::move(candidate);
        h_current = h;
      }
      if (h_current > result.H_best) {
        result.H_best = h_current;
        result.best = current;
        since_improvement = 0;
      } else {
        ++since_improvement;
      }
      result.trace.push_back({result.evaluations - 1, temperature, h, accept});
      if (since_improvement >= schedule.stall_limit) {
        stop = true;
        break;
      }
    }
    temperature *= schedule.cooling;
  }
  result.unique_evaluations = eval.size();
  return result;
}

OrderingResult search_order(const OrderObjective& objective, const Permutation& init,
                            const AnnealSchedule& schedule, std::size_t threads) {
  schedule.validate();
  const std::size_t chains = schedule.restarts;
  std::vector<OrderingResult> results(chains);
  parallel_for(chains, threads, [&](std::size_t k) {
    AnnealSchedule chain = schedule;
    Permutation start = init;
    if (k > 0) {
      chain.seed = derive_seed(schedule.seed, 0x5245535441525453ULL, k);  // "RESTARTS"
      Rng init_rng(derive_seed(schedule.seed, 0x494e4954ULL, k));       // "INIT"
      start = Permutation::random(init.size(), init_rng);
    }
    results[k] = anneal(objective, start, chain);
    results[k].restart = k;
  });

  std::size_t best = 0;
  std::size_t total = 0;
  std::size_t unique = 0;
  for (std::size_t k = 0; k < chains; ++k) {
    total += results[k].evaluations;
    unique += results[k].unique_evaluations;
    if (results[k].H_best > results[best].H_best) best = k;
  }
  OrderingResult out = std::move(results[best]);
  out.evaluations = total;
  out.unique_evaluations = unique;
  return out;
}

OrderingResult exhaustive_search(const OrderObjective& objective, std::size_t m) {
  if (m > kMaxExhaustiveDocuments) {
    throw DomainError("refusing exhaustive search: m = " + std::to_string(m) + " needs " +
                      std::to_string(static_cast<long long>(canonical_permutation_count(m))) +
                      " canonical orders (limit m <= " + std::to_string(kMaxExhaustiveDocuments) +
                      ")");
  }
  if (m == 0) throw DomainError("exhaustive search needs at least one document");
  CachedObjective eval(objective);
  std::vector<int> order(m);
  for (std::size_t k = 0; k < m; ++k) order[k] = static_cast<int>(k + 1);

  OrderingResult result;
  bool first = true;
  do {
    if (m >= 2 && order.front() > order.back()) continue;
    Permutation p(order);
    const double h = eval(p);
    result.trace.push_back({result.evaluations, 0.0, h, true});
    ++result.evaluations;
    if (first || h > result.H_best) {
      result.best = std::move(p);
      result.H_best = h;
      first = false;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  result.unique_evaluations = eval.size();
  return result;
}

}  // namespace chronorder
