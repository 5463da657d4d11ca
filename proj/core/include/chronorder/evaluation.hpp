#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chronorder/annealing.hpp"
#include "chronorder/bandwidth.hpp"
#include "chronorder/corpus.hpp"
#include "chronorder/kernel.hpp"
#include "chronorder/permutation.hpp"

namespace chronorder {

/// |Spearman rho| between the time ranks two orderings assign to documents.
double spearman_abs(const Permutation& a, const Permutation& b);

/// Linear-interpolation quantile (R type 7); percentile in [0, 100].
double percentile(std::vector<double> values, double pct);

struct BaselineResult {
  double median_abs_rho = 0.0;
  std::vector<double> sample;
};

BaselineResult random_baseline(std::size_t m, std::size_t reps, Rng& rng);

enum class RankSumMethod { exact, normal };

std::string_view to_string(RankSumMethod method) noexcept;

struct RankSumResult {
  double U = 0.0;  // for the first sample
  double p_value = 1.0;
  RankSumMethod method = RankSumMethod::normal;
  double z = 0.0;  // normal approximation only
};

/// Two-sided Mann-Whitney U. Exact null distribution when both samples have
/// at most `exact_limit` values and no ties, otherwise the normal
/// approximation with tie and continuity corrections.
RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b,
                            std::size_t exact_limit = 10);

/// "< 2.2e-16" below machine epsilon, otherwise a short %g rendering.
std::string format_p_value(double p);

struct EvaluationConfig {
  std::size_t m = 10;
  int step = 24;
  SampleMode mode = SampleMode::conflated;
  std::size_t reps = 100;
  std::size_t min_docs = 2;
  VocabularyFilter filter = VocabularyFilter::distinct_documents;
  AnnealSchedule schedule{};
  BandwidthOptions bandwidth{};
  std::uint64_t master_seed = 1;
  std::size_t threads = 1;
  /// Replace annealing by exhaustive search (m <= 8 only).
  bool exhaustive = false;
  std::size_t baseline_reps = 0;  // 0: same as reps

  void validate() const;
};

struct Replication {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<std::string> doc_ids;  // column order of the count matrix
  std::vector<int> years;
  Permutation true_order;
  Permutation estimated_order;
  double abs_rho = 0.0;
  double H_est = 0.0;
  double H_true = 0.0;
  std::size_t n_words = 0;
  std::size_t evaluations = 0;
};

struct ErrorAnalysis {
  double percentile = 10.0;
  double threshold = 0.0;
  std::vector<std::size_t> replications;
  std::vector<double> H_est;
  std::vector<double> H_true;
  double fraction_true_at_least_est = 0.0;
};

struct EvaluationReport {
  std::vector<Replication> per_replication;
  double median_abs_rho = 0.0;
  double baseline_median = 0.0;
  std::vector<double> baseline_sample;
  RankSumResult test{};
  std::optional<ErrorAnalysis> error_analysis;
  std::size_t failures = 0;

  std::vector<double> abs_rhos() const;
};

EvaluationReport run_replications(const Corpus& corpus, const EvaluationConfig& config,
                                  const KernelSpec& spec);

/// Replications whose |rho| is at or below the given empirical percentile of
/// the report, with their estimated and true-order objective values.
ErrorAnalysis error_analysis(const EvaluationReport& report, double pct = 10.0);

struct SeparationTrial {
  double H_true = 0.0;
  double H_random_median = 0.0;
  std::vector<double> H_random;
};

struct SeparationStudy {
  std::vector<SeparationTrial> trials;
  double fraction_true_above_median = 0.0;
  RankSumResult test{};
};

/// H at the true order against H over random orders, across resampled sets.
SeparationStudy separation_study(const Corpus& corpus, const EvaluationConfig& config,
                                 const KernelSpec& spec, std::size_t trials,
                                 std::size_t random_orders);

struct InformativeWord {
  std::string word;
  double h_amise = 0.0;
  double max_probability = 0.0;
  std::uint64_t frequency = 0;
};

struct InformativeWordReport {
  std::vector<InformativeWord> words;
  double freq_percentile = 50.0;
  double prob_percentile = 88.0;
  double freq_threshold = 0.0;
  double prob_threshold = 0.0;
  std::size_t candidates = 0;       // vocabulary size before filtering
  std::size_t after_frequency = 0;  // survivors of the frequency filter
};

/// Frequency percentile filter, then per-word rule-of-thumb bandwidth under
/// perm and the maximum of the locally constant curve over the rank positions;
/// keeps words at or above the score percentile, best first.
InformativeWordReport informative_words(const TermDocumentCounts& counts, const Permutation& perm,
                                        double freq_percentile, double prob_percentile,
                                        const KernelSpec& spec, const WeightScheme& scheme,
                                        const BandwidthOptions& options = {});

/// The ordering a sample's true ranks describe, over count-matrix columns.
Permutation truth_permutation(const std::vector<int>& true_rank);

}  // namespace chronorder
