#include "chronorder/bandwidth.hpp"

#include <algorithm>
#include <cmath>

#include "chronorder/error.hpp"

namespace chronorder {

WeightScheme WeightScheme::uniform(std::size_t m) {
  if (m == 0) throw ValidationError("weight scheme needs at least one design point");
  const double mass = 1.0 / static_cast<double>(m);
  return WeightScheme{std::vector<double>(m, mass), std::vector<double>(m, mass)};
}

namespace {

double cap_for_range(double lo, double hi) { return 10.0 * (hi - lo + 1.0); }

BandwidthEstimate estimate_oriented(std::span<const double> x, std::span<const double> y,
                                    std::span<const double> r, const WeightScheme& scheme,
                                    const KernelSpec& spec, const BandwidthOptions& options,
                                    std::string word) {
  const std::size_t n = x.size();
  BandwidthEstimate est;
  est.word = std::move(word);
  const double h_cap = options.h_cap.value_or(cap_for_range(x.front(), x.back()));

  const auto pilot = fit_quadratic_logit(x, y, r, options.pilot);
  est.pilot_converged = pilot.converged;
  est.curvature = pilot.second_derivative();

  const double k2 = spec.squared_integral();
  double A = 0.0;
  double curvature_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = pilot.fitted_probabilities[i];
    const double var = options.variance_scale == VarianceScale::proportion
                           ? p * (1.0 - p) / r[i]
                           : r[i] * p * (1.0 - p);
    A += k2 / var * scheme.masses[i];
    // theta'' is constant under a quadratic pilot
    curvature_sum += est.curvature * est.curvature * scheme.density[i] * scheme.masses[i];
  }
  const double mu2 = spec.second_moment();
  const double B = mu2 * mu2 * curvature_sum * static_cast<double>(n);
  est.A = A;
  est.B = B;

  const double ratio = A / B;
  est.degenerate = !pilot.converged ||
                   std::abs(est.curvature) <= options.curvature_zero_tolerance ||
                   !(B > 0.0) || !std::isfinite(ratio);
  if (est.degenerate) {
    est.h_amise = h_cap;
    est.capped = true;
    return est;
  }
  const double h = std::pow(ratio, 0.2);
  est.capped = h > h_cap;
  est.h_amise = std::min(h, h_cap);
  return est;
}

// True when the (y, r) sequence read backwards sorts before it read forwards.
bool reads_smaller_backwards(std::span<const double> y, std::span<const double> r) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    if (y[j] != y[i]) return y[j] < y[i];
    if (r[j] != r[i]) return r[j] < r[i];
  }
  return false;
}

// A, B and h are unchanged by mirroring the design, but a pilot that does not
// settle (separated zeros) stops wherever rounding takes it. Fitting every
// series in one canonical orientation makes an order and its reverse give
// bit-identical estimates.
BandwidthEstimate estimate_from_columns(std::span<const double> x, std::span<const double> y,
                                        std::span<const double> r, const WeightScheme& scheme,
                                        const KernelSpec& spec, const BandwidthOptions& options,
                                        std::string word) {
  const std::size_t n = x.size();
  if (scheme.masses.size() != n || scheme.density.size() != n) {
    throw ValidationError("weight scheme does not match the " + std::to_string(n) +
                          " design points of '" + word + "'");
  }
  if (!reads_smaller_backwards(y, r)) return estimate_oriented(x, y, r, scheme, spec, options, std::move(word));

  std::vector<double> mx(n), my(n), mr(n);
  WeightScheme ms{std::vector<double>(n), std::vector<double>(n)};
  const double ends = x.front() + x.back();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    mx[i] = ends - x[j];
    my[i] = y[j];
    mr[i] = r[j];
    ms.masses[i] = scheme.masses[j];
    ms.density[i] = scheme.density[j];
  }
  return estimate_oriented(mx, my, mr, ms, spec, options, std::move(word));
}

}  // namespace

double default_h_cap(const WordSeries& series) {
  return cap_for_range(series.observations().front().x, series.observations().back().x);
}

BandwidthEstimate amise_bandwidth(const WordSeries& series, const WeightScheme& scheme,
                                  const KernelSpec& spec, const BandwidthOptions& options) {
  const auto& obs = series.observations();
  std::vector<double> x(obs.size()), y(obs.size()), r(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    x[i] = obs[i].x;
    y[i] = obs[i].y;
    r[i] = obs[i].r;
  }
  return estimate_from_columns(x, y, r, scheme, spec, options, series.word());
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw ObjectiveError("median of an empty set");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

MedianObjective::MedianObjective(const TermDocumentCounts& counts, WeightScheme scheme,
                                 KernelSpec spec, BandwidthOptions options)
    : m_(counts.num_documents()),
      words_(counts.vocabulary()),
      totals_(counts.totals().begin(), counts.totals().end()),
      scheme_(std::move(scheme)),
      spec_(spec),
      options_(std::move(options)) {
  if (words_.empty()) throw ObjectiveError("empty vocabulary: no word occurs in enough documents");
  if (scheme_.masses.size() != m_) throw ValidationError("weight scheme size differs from document count");
  dense_.assign(words_.size() * m_, 0.0);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    for (const auto& e : counts.row(w)) dense_[w * m_ + e.doc] = e.count;
  }
}

ObjectiveValue MedianObjective::evaluate(const Permutation& perm, bool keep_per_word) const {
  if (perm.size() != m_) {
    throw ValidationError("ordering has " + std::to_string(perm.size()) + " documents, expected " +
                          std::to_string(m_));
  }
  std::vector<double> x(m_), y(m_), r(m_);
  std::vector<std::size_t> column(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    x[k] = static_cast<double>(k + 1);
    column[k] = static_cast<std::size_t>(perm[k] - 1);
    r[k] = totals_[column[k]];
  }

  ObjectiveValue value;
  value.n_words = words_.size();
  std::vector<double> hs;
  hs.reserve(words_.size());
  if (keep_per_word) value.per_word.emplace().reserve(words_.size());
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const double* row = dense_.data() + w * m_;
    for (std::size_t k = 0; k < m_; ++k) y[k] = row[column[k]];
    auto est = estimate_from_columns(x, y, r, scheme_, spec_, options_,
                                     keep_per_word ? words_[w] : std::string{});
    hs.push_back(est.h_amise);
    if (keep_per_word) value.per_word->push_back(std::move(est));
  }
  value.H = median_of(std::move(hs));
  return value;
}

WordSeries MedianObjective::series(std::size_t word, const Permutation& perm) const {
  std::vector<Observation> obs;
  obs.reserve(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    const auto col = static_cast<std::size_t>(perm[k] - 1);
    obs.push_back({static_cast<double>(k + 1), dense_[word * m_ + col], totals_[col]});
  }
  return WordSeries(words_.at(word), std::move(obs), DesignScale::rank);
}

ObjectiveValue median_objective(const TermDocumentCounts& counts, const Permutation& perm,
                                const WeightScheme& scheme, const KernelSpec& spec,
                                const BandwidthOptions& options, bool keep_per_word) {
  return MedianObjective(counts, scheme, spec, options).evaluate(perm, keep_per_word);
}

WordSeries series_under(const TermDocumentCounts& counts, std::size_t word, const Permutation& perm) {
  if (perm.size() != counts.num_documents()) throw ValidationError("ordering size differs from document count");
  const auto dense = counts.dense_row(word);
  std::vector<Observation> obs;
  obs.reserve(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const auto col = static_cast<std::size_t>(perm[k] - 1);
    obs.push_back({static_cast<double>(k + 1), static_cast<double>(dense[col]),
                   static_cast<double>(counts.totals()[col])});
  }
  return WordSeries(counts.vocabulary()[word], std::move(obs), DesignScale::rank);
}

}  // namespace chronorder
