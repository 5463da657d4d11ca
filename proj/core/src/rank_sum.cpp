#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <vector>

#include "chronorder/error.hpp"
#include "chronorder/evaluation.hpp"

namespace chronorder {

std::string_view to_string(RankSumMethod method) noexcept {
  return method == RankSumMethod::exact ? "exact" : "normal";
}

namespace {

// Number of arrangements giving each value of U for sample sizes (n1, n2).
std::vector<double> exact_u_counts(std::size_t n1, std::size_t n2) {
  // table[i][j] is the distribution for sizes (i, j), built bottom-up
  const std::size_t max_u = n1 * n2;
  std::vector<std::vector<std::vector<double>>> table(
      n1 + 1, std::vector<std::vector<double>>(n2 + 1));
  for (std::size_t i = 0; i <= n1; ++i) {
    for (std::size_t j = 0; j <= n2; ++j) {
      auto& dist = table[i][j];
      dist.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        dist[0] = 1.0;
        continue;
      }
      // the largest value belongs to sample one (adds j to U) or to sample two
      const auto& with_one = table[i - 1][j];
      const auto& with_two = table[i][j - 1];
      for (std::size_t u = 0; u < with_one.size(); ++u) dist[u + j] += with_one[u];
      for (std::size_t u = 0; u < with_two.size(); ++u) dist[u] += with_two[u];
    }
  }
  (void)max_u;
  return table[n1][n2];
}

}  // namespace

RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b,
                            std::size_t exact_limit) {
  if (a.empty() || b.empty()) throw ValidationError("rank sum test needs two non-empty samples");
  const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;

  std::vector<std::pair<double, int>> pooled;
  pooled.reserve(n);
  for (const double v : a) pooled.emplace_back(v, 0);
  for (const double v : b) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[j + 1].first == pooled[i].first) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    const double t = static_cast<double>(j - i + 1);
    if (t > 1) ties = true;
    tie_term += t * t * t - t;
    for (std::size_t k = i; k <= j; ++k) {
      if (pooled[k].second == 0) rank_sum_a += mid_rank;
    }
    i = j + 1;
  }

  RankSumResult out;
  out.U = rank_sum_a - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  const double nn1 = static_cast<double>(n1), nn2 = static_cast<double>(n2), nn = static_cast<double>(n);

  if (pooled.front().first == pooled.back().first) {
    out.method = RankSumMethod::normal;
    out.p_value = 1.0;
    return out;
  }

  if (!ties && n1 <= exact_limit && n2 <= exact_limit) {
    out.method = RankSumMethod::exact;
    const auto counts = exact_u_counts(n1, n2);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const auto u = static_cast<std::size_t>(std::llround(out.U));
    double lower = 0.0, upper = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (k <= u) lower += counts[k];
      if (k >= u) upper += counts[k];
    }
    out.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    return out;
  }

  out.method = RankSumMethod::normal;
  const double mean = nn1 * nn2 / 2.0;
  const double var = nn1 * nn2 / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (!(var > 0.0)) {
    out.p_value = 1.0;
    return out;
  }
  const double diff = out.U - mean;
  const double correction = diff > 0 ? 0.5 : (diff < 0 ? -0.5 : 0.0);
  out.z = (diff - correction) / std::sqrt(var);
  out.p_value = std::min(1.0, std::erfc(std::abs(out.z) / std::sqrt(2.0)));
  return out;
}

std::string format_p_value(double p) {
  if (p < std::numeric_limits<double>::epsilon()) return "< 2.2e-16";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", p);
  return buf;
}

}  // namespace chronorder
