#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chronorder/kernel.hpp"

namespace chronorder {

inline constexpr double kProbabilityClamp = 1e-8;

double logistic(double eta) noexcept;
double logit(double p) noexcept;
double clamp_probability(double p) noexcept;

enum class DesignScale { rank, year };

struct Observation {
  double x;  // design point
  double y;  // occurrences of the word
  double r;  // total tokens in the document
};

/// One word's binomial data along the time axis. Validated on construction:
/// 0 <= y <= r, r >= 1, x strictly increasing, at least one observation.
class WordSeries {
 public:
  WordSeries(std::string word, std::vector<Observation> observations,
             DesignScale scale = DesignScale::rank);

  const std::string& word() const noexcept { return word_; }
  const std::vector<Observation>& observations() const noexcept { return obs_; }
  std::size_t size() const noexcept { return obs_.size(); }
  DesignScale scale() const noexcept { return scale_; }

  double pooled_proportion() const noexcept;

 private:
  std::string word_;
  std::vector<Observation> obs_;
  DesignScale scale_;
};

/// Locally constant estimate: sum y K_h / sum r K_h.
double local_constant_pi(const WordSeries& series, double t, double h,
                         const KernelSpec& spec);

enum class LocalDegree { p0, p1 };

struct LocalFit {
  LocalDegree degree = LocalDegree::p1;
  double beta0 = 0.0;
  double beta1 = 0.0;  // zero for p0 fits
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;

  double probability() const noexcept { return logistic(beta0); }
};

struct LocalLikelihood {
  double value;
  std::array<double, 2> gradient;
  std::array<double, 3> hessian;  // (d00, d01, d11)
};

/// Kernel-weighted binomial log-likelihood at t for logit beta0 + beta1 (x - t),
/// without the binomial-coefficient constant.
LocalLikelihood local_log_likelihood(const WordSeries& series, double t, double h,
                                     const KernelSpec& spec, double beta0, double beta1);

/// Locally constant fit expressed as a LocalFit (beta0 = logit of the ratio).
LocalFit local_constant_fit(const WordSeries& series, double t, double h,
                            const KernelSpec& spec);

struct NewtonOptions {
  int max_iterations = 50;
  double gradient_tolerance = 1e-8;
  int max_halvings = 30;
};

/// Locally linear (p = 1) fit by damped Newton-Raphson, started from the
/// locally constant solution with zero slope.
LocalFit local_linear_fit(const WordSeries& series, double t, double h,
                          const KernelSpec& spec, const NewtonOptions& options = {});

struct QuadraticLogitFit {
  std::array<double, 3> coefficients{};  // b0 + b1 x + b2 x^2, original x units
  std::vector<double> fitted_probabilities;
  bool converged = false;
  int iterations = 0;
  double deviance = 0.0;

  double second_derivative() const noexcept { return 2.0 * coefficients[2]; }
};

struct IrlsOptions {
  int max_iterations = 100;
  double deviance_tolerance = 1e-12;
};

/// Global binomial regression with a quadratic logit, by iteratively
/// reweighted least squares on a centred and scaled design.
QuadraticLogitFit fit_quadratic_logit(const WordSeries& series, const IrlsOptions& options = {});

/// Same fit on raw columns; x needs at least three distinct values.
QuadraticLogitFit fit_quadratic_logit(std::span<const double> x, std::span<const double> y,
                                      std::span<const double> r, const IrlsOptions& options = {});

}  // namespace chronorder
