#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chronorder/corpus.hpp"
#include "chronorder/kernel.hpp"
#include "chronorder/local_glm.hpp"
#include "chronorder/permutation.hpp"

namespace chronorder {

/// Discrete weight function w and design density f over the design points.
struct WeightScheme {
  std::vector<double> masses;
  std::vector<double> density;

  static WeightScheme uniform(std::size_t m);
};

enum class VarianceScale {
  proportion,  // pi (1 - pi) / r
  count,       // r pi (1 - pi)
};

struct BandwidthOptions {
  VarianceScale variance_scale = VarianceScale::proportion;
  /// Upper bound on every bandwidth; defaults to 10 x (design range + 1),
  /// i.e. 10 m on a 1..m rank design.
  std::optional<double> h_cap;
  /// |theta''| at or below this is treated as zero curvature.
  double curvature_zero_tolerance = 1e-10;
  IrlsOptions pilot{};
};

struct BandwidthEstimate {
  std::string word;
  double h_amise = 0.0;
  double A = 0.0;
  double B = 0.0;
  bool degenerate = false;  // zero curvature or failed pilot; h_amise == h_cap
  bool capped = false;      // h_amise was clipped to h_cap
  double curvature = 0.0;   // pilot theta''
  bool pilot_converged = false;
};

double default_h_cap(const WordSeries& series);

/// Rule-of-thumb AMISE bandwidth h = (A / B)^(1/5) with a quadratic-logit pilot.
/// A = sum_i w_i \int K^2 / var_i, B = (\int z^2 K)^2 sum_i theta''(x_i)^2 f_i w_i n.
BandwidthEstimate amise_bandwidth(const WordSeries& series, const WeightScheme& scheme,
                                  const KernelSpec& spec, const BandwidthOptions& options = {});

struct ObjectiveValue {
  double H = 0.0;
  std::size_t n_words = 0;
  std::optional<std::vector<BandwidthEstimate>> per_word;
};

/// Median of the per-word bandwidths; even counts average the central pair.
double median_of(std::vector<double> values);

/// Precomputed state for repeatedly evaluating H over orderings of a fixed
/// count matrix. Evaluation is pure and const, so one instance can be shared
/// across threads.
class MedianObjective {
 public:
  MedianObjective(const TermDocumentCounts& counts, WeightScheme scheme, KernelSpec spec,
                  BandwidthOptions options = {});

  std::size_t num_documents() const noexcept { return m_; }
  std::size_t num_words() const noexcept { return words_.size(); }

  double operator()(const Permutation& perm) const { return evaluate(perm, false).H; }
  ObjectiveValue evaluate(const Permutation& perm, bool keep_per_word) const;

  /// The series of one word with documents placed at their rank under perm.
  WordSeries series(std::size_t word, const Permutation& perm) const;

 private:
  std::size_t m_;
  std::vector<std::string> words_;
  std::vector<double> dense_;  // words x documents, row-major
  std::vector<double> totals_;
  WeightScheme scheme_;
  KernelSpec spec_;
  BandwidthOptions options_;
};

ObjectiveValue median_objective(const TermDocumentCounts& counts, const Permutation& perm,
                                const WeightScheme& scheme, const KernelSpec& spec,
                                const BandwidthOptions& options = {}, bool keep_per_word = false);

/// Builds the rank-design series of `word` with documents ordered by perm.
WordSeries series_under(const TermDocumentCounts& counts, std::size_t word,
                        const Permutation& perm);

}  // namespace chronorder
