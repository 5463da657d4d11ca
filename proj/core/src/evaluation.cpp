#include "chronorder/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "chronorder/error.hpp"
#include "chronorder/parallel.hpp"

namespace chronorder {

namespace {

constexpr std::uint64_t kReplicationStream = 0x5245504cULL;  // "REPL"
constexpr std::uint64_t kAnnealStream = 0x414e4e45ULL;       // "ANNE"
constexpr std::uint64_t kBaselineStream = 0x42415345ULL;     // "BASE"
constexpr std::uint64_t kSeparationStream = 0x53455041ULL;   // "SEPA"

}  // namespace

double spearman_abs(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw DomainError("spearman: orderings of different lengths (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
  const std::size_t m = a.size();
  if (m < 2) throw DomainError("spearman: needs at least two documents");
  const auto pa = a.positions();
  const auto pb = b.positions();
  double d2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = pa[i] - pb[i];
    d2 += d * d;
  }
  const double mm = static_cast<double>(m);
  const double rho = 1.0 - 6.0 * d2 / (mm * (mm * mm - 1.0));
  return std::clamp(std::abs(rho), 0.0, 1.0);
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw DomainError("percentile of an empty sample");
  if (!(pct >= 0.0 && pct <= 100.0)) throw DomainError("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * pct / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

BaselineResult random_baseline(std::size_t m, std::size_t reps, Rng& rng) {
  if (m < 2) throw ValidationError("baseline needs m >= 2");
  if (reps == 0) throw ValidationError("baseline needs at least one replication");
  BaselineResult out;
  out.sample.reserve(reps);
  const Permutation identity = Permutation::identity(m);
  for (std::size_t r = 0; r < reps; ++r) {
    out.sample.push_back(spearman_abs(Permutation::random(m, rng), identity));
  }
  out.median_abs_rho = median_of(out.sample);
  return out;
}

Permutation truth_permutation(const std::vector<int>& true_rank) {
  std::vector<int> order(true_rank.size(), 0);
  for (std::size_t col = 0; col < true_rank.size(); ++col) {
    const int r = true_rank[col];
    if (r < 1 || r > static_cast<int>(true_rank.size())) throw ValidationError("true rank out of range");
    order[r - 1] = static_cast<int>(col + 1);
  }
  return Permutation(std::move(order));
}

void EvaluationConfig::validate() const {
  if (m < 3) throw ValidationError("m must be >= 3 (the quadratic pilot needs three design points)");
  if (step < 1) throw ValidationError("step must be >= 1");
  if (reps == 0) throw ValidationError("reps must be >= 1");
  if (min_docs == 0) throw ValidationError("min_docs must be >= 1");
  if (exhaustive && m > kMaxExhaustiveDocuments) {
    throw ValidationError("exhaustive search is limited to m <= " +
                          std::to_string(kMaxExhaustiveDocuments));
  }
  schedule.validate();
}

std::vector<double> EvaluationReport::abs_rhos() const {
  std::vector<double> out;
  for (const auto& r : per_replication) {
    if (r.ok) out.push_back(r.abs_rho);
  }
  return out;
}

namespace {

Replication run_one(const Corpus& corpus, const EvaluationConfig& config, const KernelSpec& spec,
                    std::size_t index) {
  Replication rep;
  rep.index = index;
  rep.seed = derive_seed(config.master_seed, kReplicationStream, index);
  Rng rng(rep.seed);
  try {
    const auto sample = systematic_sample(corpus, config.m, config.step, rng, config.mode);
    const auto counts = build_counts(sample.documents, config.min_docs, config.filter);
    rep.doc_ids = counts.document_ids();
    rep.years = sample.years;
    const MedianObjective objective(counts, WeightScheme::uniform(config.m), spec, config.bandwidth);
    rep.n_words = objective.num_words();
    const OrderObjective fn = [&](const Permutation& p) { return objective(p); };

    OrderingResult result;
    if (config.exhaustive) {
      result = exhaustive_search(fn, config.m);
    } else {
      const Permutation init = Permutation::random(config.m, rng);
      AnnealSchedule schedule = config.schedule;
      schedule.seed = derive_seed(rep.seed, kAnnealStream);
      result = search_order(fn, init, schedule, 1);
    }
    rep.true_order = truth_permutation(sample.true_rank).canonical();
    rep.estimated_order = result.best;
    rep.abs_rho = spearman_abs(result.best, rep.true_order);
    rep.H_est = result.H_best;
    rep.H_true = objective(rep.true_order);
    rep.evaluations = result.evaluations;
    rep.ok = true;
  } catch (const Error& e) {
    rep.ok = false;
    rep.error = e.what();
  }
  return rep;
}

}  // namespace

EvaluationReport run_replications(const Corpus& corpus, const EvaluationConfig& config,
                                  const KernelSpec& spec) {
  config.validate();
  if (!corpus.fully_dated()) throw ValidationError("evaluation needs a fully dated corpus");

  EvaluationReport report;
  report.per_replication.resize(config.reps);
  parallel_for(config.reps, config.threads, [&](std::size_t r) {
    report.per_replication[r] = run_one(corpus, config, spec, r);
  });

  const auto rhos = report.abs_rhos();
  report.failures = config.reps - rhos.size();
  Rng baseline_rng(derive_seed(config.master_seed, kBaselineStream));
  const auto baseline =
      random_baseline(config.m, config.baseline_reps ? config.baseline_reps : config.reps, baseline_rng);
  report.baseline_median = baseline.median_abs_rho;
  report.baseline_sample = baseline.sample;
  if (!rhos.empty()) {
    report.median_abs_rho = median_of(rhos);
    report.test = rank_sum_test(rhos, report.baseline_sample);
    report.error_analysis = error_analysis(report);
  }
  return report;
}

ErrorAnalysis error_analysis(const EvaluationReport& report, double pct) {
  const auto rhos = report.abs_rhos();
  if (rhos.empty()) throw ValidationError("error analysis needs at least one successful replication");
  ErrorAnalysis out;
  out.percentile = pct;
  out.threshold = percentile(rhos, pct);
  std::size_t at_least = 0;
  for (const auto& rep : report.per_replication) {
    if (!rep.ok || rep.abs_rho > out.threshold) continue;
    out.replications.push_back(rep.index);
    out.H_est.push_back(rep.H_est);
    out.H_true.push_back(rep.H_true);
    if (rep.H_true >= rep.H_est) ++at_least;
  }
  out.fraction_true_at_least_est =
      out.replications.empty() ? 0.0 : static_cast<double>(at_least) / out.replications.size();
  return out;
}

SeparationStudy separation_study(const Corpus& corpus, const EvaluationConfig& config,
                                 const KernelSpec& spec, std::size_t trials,
                                 std::size_t random_orders) {
  if (trials == 0 || random_orders == 0) throw ValidationError("separation study needs trials and orders");
  SeparationStudy study;
  study.trials.resize(trials);
  parallel_for(trials, config.threads, [&](std::size_t t) {
    Rng rng(derive_seed(config.master_seed, kSeparationStream, t));
    const auto sample = systematic_sample(corpus, config.m, config.step, rng, config.mode);
    const auto counts = build_counts(sample.documents, config.min_docs, config.filter);
    const MedianObjective objective(counts, WeightScheme::uniform(config.m), spec, config.bandwidth);
    auto& trial = study.trials[t];
    trial.H_true = objective(truth_permutation(sample.true_rank));
    for (std::size_t k = 0; k < random_orders; ++k) {
      trial.H_random.push_back(objective(Permutation::random(config.m, rng)));
    }
    trial.H_random_median = median_of(trial.H_random);
  });

  std::vector<double> truths, randoms;
  std::size_t above = 0;
  for (const auto& t : study.trials) {
    truths.push_back(t.H_true);
    randoms.insert(randoms.end(), t.H_random.begin(), t.H_random.end());
    if (t.H_true > t.H_random_median) ++above;
  }
  study.fraction_true_above_median = static_cast<double>(above) / static_cast<double>(trials);
  study.test = rank_sum_test(truths, randoms);
  return study;
}

InformativeWordReport informative_words(const TermDocumentCounts& counts, const Permutation& perm,
                                        double freq_percentile, double prob_percentile,
                                        const KernelSpec& spec, const WeightScheme& scheme,
                                        const BandwidthOptions& options) {
  InformativeWordReport report;
  report.freq_percentile = freq_percentile;
  report.prob_percentile = prob_percentile;
  report.candidates = counts.num_words();
  if (perm.size() != counts.num_documents()) throw ValidationError("ordering size differs from document count");
  if (counts.num_words() == 0) return report;

  std::vector<double> freqs(counts.num_words());
  for (std::size_t w = 0; w < counts.num_words(); ++w) freqs[w] = static_cast<double>(counts.word_frequency(w));
  report.freq_threshold = percentile(freqs, freq_percentile);

  std::vector<InformativeWord> scored;
  for (std::size_t w = 0; w < counts.num_words(); ++w) {
    if (freqs[w] < report.freq_threshold) continue;
    const auto series = series_under(counts, w, perm);
    const auto est = amise_bandwidth(series, scheme, spec, options);
    double best = 0.0;
    for (std::size_t k = 1; k <= perm.size(); ++k) {
      best = std::max(best, local_constant_pi(series, static_cast<double>(k), est.h_amise, spec));
    }
    scored.push_back({counts.vocabulary()[w], est.h_amise, best,
                      static_cast<std::uint64_t>(freqs[w])});
  }
  report.after_frequency = scored.size();
  if (scored.empty()) return report;

  std::vector<double> scores;
  scores.reserve(scored.size());
  for (const auto& s : scored) scores.push_back(s.max_probability);
  report.prob_threshold = percentile(scores, prob_percentile);
  for (auto& s : scored) {
    if (s.max_probability >= report.prob_threshold) report.words.push_back(std::move(s));
  }
  std::sort(report.words.begin(), report.words.end(), [](const auto& a, const auto& b) {
    if (a.max_probability != b.max_probability) return a.max_probability > b.max_probability;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.word < b.word;
  });
  return report;
}

}  // namespace chronorder
