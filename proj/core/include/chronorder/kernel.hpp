#pragma once

#include <cstdint>

namespace chronorder {

enum class KernelFamily { student_t };

enum class SquaredIntegralMethod {
  quadrature,   // composite Simpson over [-200, 200], 1e6 intervals
  monte_carlo,  // E[K(Z)] with Z ~ t(df), 1e6 draws
};

/// Student-t smoothing kernel with its precomputed moments. Immutable once
/// built; copies are cheap.
class KernelSpec {
 public:
  static KernelSpec student_t(double degrees_of_freedom = 5.0,
                              SquaredIntegralMethod method = SquaredIntegralMethod::quadrature,
                              std::uint64_t monte_carlo_seed = 20240101);

  KernelFamily family() const noexcept { return KernelFamily::student_t; }
  double degrees_of_freedom() const noexcept { return df_; }
  /// \int z^2 K(z) dz = df / (df - 2).
  double second_moment() const noexcept { return second_moment_; }
  /// \int K(z)^2 dz.
  double squared_integral() const noexcept { return squared_integral_; }
  SquaredIntegralMethod squared_integral_method() const noexcept { return method_; }

  double density(double z) const noexcept;

 private:
  KernelSpec(double df, double log_norm, double second_moment, double squared_integral,
             SquaredIntegralMethod method);

  double df_;
  double log_norm_;
  double second_moment_;
  double squared_integral_;
  SquaredIntegralMethod method_;
};

/// K_h(u) = K(u / h) / h. Throws DomainError for h <= 0.
double kernel_weight(double u, double h, const KernelSpec& spec);

/// Composite Simpson rule for \int_{lo}^{hi} z^power K(z)^exponent dz.
double kernel_moment_quadrature(const KernelSpec& spec, int power, int exponent,
                                double lo = -200.0, double hi = 200.0,
                                int intervals = 1'000'000);

double squared_integral_monte_carlo(const KernelSpec& spec, std::uint64_t samples,
                                    std::uint64_t seed);

}  // namespace chronorder
