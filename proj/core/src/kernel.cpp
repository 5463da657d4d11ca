#include "chronorder/kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <tuple>

#include "chronorder/error.hpp"

namespace chronorder {

namespace {

double student_t_log_norm(double df) {
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * std::numbers::pi);
}

double student_t_density(double z, double df, double log_norm) {
  const double base = 1.0 + z * z / df;
  const double exponent = 0.5 * (df + 1.0);
  if (exponent == 3.0) {
    const double inv = 1.0 / base;
    return std::exp(log_norm) * inv * inv * inv;
  }
  return std::exp(log_norm - exponent * std::log(base));
}

double simpson(double lo, double hi, int intervals, auto&& f) {
  if (intervals % 2 != 0) ++intervals;
  const double step = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * step);
  return sum * step / 3.0;
}

}  // namespace

KernelSpec::KernelSpec(double df, double log_norm, double second_moment, double squared_integral,
                       SquaredIntegralMethod method)
    : df_(df),
      log_norm_(log_norm),
      second_moment_(second_moment),
      squared_integral_(squared_integral),
      method_(method) {}

KernelSpec KernelSpec::student_t(double degrees_of_freedom, SquaredIntegralMethod method,
                                 std::uint64_t monte_carlo_seed) {
  if (!(degrees_of_freedom > 2.0) || !std::isfinite(degrees_of_freedom)) {
    throw DomainError("kernel degrees of freedom must exceed 2 for a finite second moment");
  }
  const double log_norm = student_t_log_norm(degrees_of_freedom);
  const double second = degrees_of_freedom / (degrees_of_freedom - 2.0);

  // \int K^2 costs ~1e6 density evaluations; memoise per configuration.
  static std::mutex cache_mutex;
  static std::map<std::tuple<double, int, std::uint64_t>, double> cache;
  const auto key = std::make_tuple(degrees_of_freedom, static_cast<int>(method),
                                   method == SquaredIntegralMethod::monte_carlo ? monte_carlo_seed : 0);
  double squared = 0.0;
  {
    std::lock_guard lock(cache_mutex);
    if (const auto it = cache.find(key); it != cache.end()) squared = it->second;
  }
  if (squared == 0.0) {
    KernelSpec probe(degrees_of_freedom, log_norm, second, 1.0, method);
    squared = method == SquaredIntegralMethod::quadrature
                  ? kernel_moment_quadrature(probe, 0, 2)
                  : squared_integral_monte_carlo(probe, 1'000'000, monte_carlo_seed);
    std::lock_guard lock(cache_mutex);
    cache.emplace(key, squared);
  }
  return KernelSpec(degrees_of_freedom, log_norm, second, squared, method);
}

double KernelSpec::density(double z) const noexcept {
  return student_t_density(z, df_, log_norm_);
}

double kernel_weight(double u, double h, const KernelSpec& spec) {
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
  return spec.density(u / h) / h;
}

double kernel_moment_quadrature(const KernelSpec& spec, int power, int exponent, double lo,
                                double hi, int intervals) {
  return simpson(lo, hi, intervals, [&](double z) {
    return std::pow(z, power) * std::pow(spec.density(z), exponent);
  });
}

double squared_integral_monte_carlo(const KernelSpec& spec, std::uint64_t samples,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::student_t_distribution<double> dist(spec.degrees_of_freedom());
  double sum = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) sum += spec.density(dist(rng));
  return sum / static_cast<double>(samples);
}

}  // namespace chronorder
