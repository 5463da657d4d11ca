#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "chronorder/permutation.hpp"
#include "chronorder/rng.hpp"

namespace chronorder {

using OrderObjective = std::function<double(const Permutation&)>;

inline constexpr std::size_t kSegmentLength = 4;

struct SegmentMove {
  std::size_t start = 0;   // 0-based first position of the segment
  std::size_t length = kSegmentLength;
  bool reverse = false;
  std::optional<std::size_t> insert_at;  // index into the sequence with the segment removed
};

/// Applies a reverse and/or relocate of a contiguous segment. Not canonicalised.
Permutation apply_segment_move(const Permutation& perm, const SegmentMove& move);

struct NeighborOptions {
  /// Segment operations composed per proposal; 1 unless experimenting.
  std::size_t segments_per_proposal = 1;
};

/// Random neighbour under the length-4 reverse/move scheme, canonical and
/// distinct from the input. With m < 5 an adjacent transposition is used
/// instead; with m == 2 the single reversal class is returned unchanged.
/// When m % 4 is 0 or 1 every segment move is an even permutation and so is
/// the full reversal, so half the proposals are adjacent transpositions to keep
/// all m!/2 orders reachable.
Permutation propose_neighbor(const Permutation& perm, Rng& rng,
                             const NeighborOptions& options = {});

/// Every distinct canonical state reachable from perm in one proposal.
std::vector<Permutation> enumerate_neighbors(const Permutation& perm);

struct AnnealSchedule {
  /// Unset: the standard deviation of H over `calibration_samples` random orders.
  std::optional<double> t_initial;
  double cooling = 0.95;
  std::size_t proposals_per_temp = 100;
  std::size_t max_evaluations = 20'000;
  std::size_t stall_limit = 2'000;
  std::size_t calibration_samples = 50;
  std::size_t restarts = 3;
  std::uint64_t seed = 1;
  NeighborOptions neighbor{};

  void validate() const;
};

struct TracePoint {
  std::size_t evaluation;
  double temperature;
  double H;
  bool accepted;
};

struct OrderingResult {
  Permutation best;
  double H_best = 0.0;
  std::vector<TracePoint> trace;
  std::size_t evaluations = 0;
  std::size_t unique_evaluations = 0;
  double t_initial = 0.0;
  std::size_t restart = 0;  // which restart produced `best`
};

/// Temperature from the spread of H over random orders.
double calibrate_temperature(const OrderObjective& objective, std::size_t m,
                             std::size_t samples, Rng& rng);

/// One Metropolis chain maximising objective, geometric cooling, best-ever
/// state returned canonical. Deterministic for a given schedule.seed.
OrderingResult anneal(const OrderObjective& objective, const Permutation& init,
                      const AnnealSchedule& schedule);

/// schedule.restarts independent chains (the first from init, the others from
/// random orders), best of. Chains run on up to `threads` workers; the result
/// does not depend on the thread count.
OrderingResult search_order(const OrderObjective& objective, const Permutation& init,
                            const AnnealSchedule& schedule, std::size_t threads = 1);

inline constexpr std::size_t kMaxExhaustiveDocuments = 8;

/// Enumerates all m!/2 canonical orders; refuses m > 8.
OrderingResult exhaustive_search(const OrderObjective& objective, std::size_t m);

}  // namespace chronorder
