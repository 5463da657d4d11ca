#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "chronorder/error.hpp"
#include "chronorder/kernel.hpp"
#include "chronorder/local_glm.hpp"
#include "glm_oracle.hpp"
#include "test_support.hpp"

using namespace chronorder;
using testing_support::random_series;

namespace {

using oracle::t5;
using oracle::grid_maximiser;
const auto oracle_loglik = oracle::local_loglik;

WordSeries make(std::vector<std::array<double, 3>> rows) {
  std::vector<Observation> obs;
  for (auto [x, y, r] : rows) obs.push_back({x, y, r});
  return WordSeries("w", obs);
}

}  // namespace

TEST(Kernel, DensityAtZero) {
  const auto k = KernelSpec::student_t();
  EXPECT_NEAR(kernel_weight(0.0, 1.0, k), 0.379607, 1e-6);
  EXPECT_NEAR(k.density(0.0), t5(0.0), 1e-14);
}

TEST(Kernel, SymmetryAndScale) {
  const auto k = KernelSpec::student_t();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-20, 20), h(0.01, 30);
  for (int i = 0; i < 200; ++i) {
    const double uu = u(rng), hh = h(rng);
    EXPECT_DOUBLE_EQ(kernel_weight(uu, hh, k), kernel_weight(-uu, hh, k));
    EXPECT_NEAR(kernel_weight(uu, hh, k), t5(uu / hh) / hh, 1e-12);
  }
  EXPECT_DOUBLE_EQ(kernel_weight(0.0, 2.0, k), kernel_weight(0.0, 1.0, k) / 2.0);
}

TEST(Kernel, NonPositiveBandwidthIsDomainError) {
  const auto k = KernelSpec::student_t();
  EXPECT_THROW(kernel_weight(0.0, 0.0, k), DomainError);
  EXPECT_THROW(kernel_weight(0.0, -1.0, k), DomainError);
  EXPECT_THROW(KernelSpec::student_t(2.0), DomainError);
}

TEST(Kernel, Moments) {
  const auto k = KernelSpec::student_t();
  EXPECT_NEAR(k.second_moment(), 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(kernel_moment_quadrature(k, 2, 1), 5.0 / 3.0, 1e-3);
  EXPECT_NEAR(kernel_moment_quadrature(k, 0, 1), 1.0, 1e-6);
  // closed form c^2 sqrt(5) B(1/2, 11/2)
  const double c = t5(0.0);
  const double beta = std::tgamma(0.5) * std::tgamma(5.5) / std::tgamma(6.0);
  EXPECT_NEAR(k.squared_integral(), c * c * std::sqrt(5.0) * beta, 1e-10);
}

TEST(Kernel, MonteCarloAgreesWithQuadrature) {
  const auto q = KernelSpec::student_t();
  const auto mc = KernelSpec::student_t(5.0, SquaredIntegralMethod::monte_carlo, 11);
  EXPECT_NEAR(mc.squared_integral() / q.squared_integral(), 1.0, 0.01);
  EXPECT_EQ(mc.squared_integral(),
            KernelSpec::student_t(5.0, SquaredIntegralMethod::monte_carlo, 11).squared_integral());
}

TEST(LocalConstant, HandEvaluation) {
  const auto k = KernelSpec::student_t();
  const auto s = make({{1, 1, 10}, {2, 2, 10}, {3, 3, 10}});
  EXPECT_NEAR(local_constant_pi(s, 2.0, 1.0, k), 0.2, 1e-15);
  const double k0 = t5(0), k1 = t5(1), k2 = t5(2);
  const double expected = (1 * k0 + 2 * k1 + 3 * k2) / (10 * (k0 + k1 + k2));
  EXPECT_NEAR(local_constant_pi(s, 1.0, 1.0, k), expected, 1e-14);
}

TEST(LocalConstant, Limits) {
  const auto k = KernelSpec::student_t();
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = random_series(rng, 3 + rep % 9);
    for (double t = 0.0; t <= 13.0; t += 0.5) {
      EXPECT_NEAR(local_constant_pi(s, t, 1e9, k), s.pooled_proportion(), 1e-6);
    }
    for (const auto& o : s.observations()) {
      EXPECT_NEAR(local_constant_pi(s, o.x, 1e-6, k), o.y / o.r, 1e-6);
    }
  }
}

TEST(LocalConstant, VanishingWeightsAreDegenerate) {
  const auto k = KernelSpec::student_t();
  const auto s = make({{1, 1, 10}, {2, 2, 10}});
  EXPECT_THROW(local_constant_pi(s, 1e12, 1e-300, k), DegenerateEvaluationError);
}

TEST(LocalConstant, BoundedByObservedProportions) {
  const auto k = KernelSpec::student_t();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> t(-5, 20), h(0.05, 50);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = random_series(rng, 2 + rep % 11);
    double lo = 1, hi = 0;
    for (const auto& o : s.observations()) lo = std::min(lo, o.y / o.r), hi = std::max(hi, o.y / o.r);
    const double v = local_constant_pi(s, t(rng), h(rng), k);
    EXPECT_GE(v, lo - 1e-15);
    EXPECT_LE(v, hi + 1e-15);
  }
}

TEST(LocalGlm, ShiftAndReflection) {
  const auto k = KernelSpec::student_t();
  std::mt19937_64 rng(9);
  const auto s = random_series(rng, 9);
  std::vector<Observation> shifted, reflected;
  for (const auto& o : s.observations()) shifted.push_back({o.x + 1000.0, o.y, o.r});
  for (auto it = s.observations().rbegin(); it != s.observations().rend(); ++it) {
    reflected.push_back({10.0 - it->x, it->y, it->r});
  }
  const WordSeries sh("w", shifted), rf("w", reflected);
  for (double t : {1.0, 3.3, 7.5}) {
    EXPECT_NEAR(local_constant_pi(sh, t + 1000.0, 1.7, k), local_constant_pi(s, t, 1.7, k), 1e-12);
    EXPECT_NEAR(local_constant_pi(rf, 10.0 - t, 1.7, k), local_constant_pi(s, t, 1.7, k), 1e-12);
    EXPECT_NEAR(local_linear_fit(sh, t + 1000.0, 1.7, k).probability(),
                local_linear_fit(s, t, 1.7, k).probability(), 1e-8);
    EXPECT_NEAR(local_linear_fit(rf, 10.0 - t, 1.7, k).probability(),
                local_linear_fit(s, t, 1.7, k).probability(), 1e-8);
  }
}

TEST(LocalLinear, FlatData) {
  const auto k = KernelSpec::student_t();
  const auto s = make({{1, 5, 100}, {2, 10, 200}, {3, 15, 300}, {4, 5, 100}, {5, 20, 400}});
  const auto fit = local_linear_fit(s, 3.0, 1.5, k);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.beta1, 0.0, 1e-8);
  EXPECT_NEAR(fit.probability(), 0.05, 1e-8);
}

TEST(LocalLinear, MatchesGridSearch) {
  const auto k = KernelSpec::student_t();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> h(0.8, 4.0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = random_series(rng, 4 + rep % 5);
    const double t = 1.0 + (s.size() - 1) * 0.37;
    const double hh = h(rng);
    const auto fit = local_linear_fit(s, t, hh, k);
    ASSERT_TRUE(fit.converged);
    const auto [g0, g1] = grid_maximiser(s, t, hh);
    EXPECT_NEAR(fit.beta0, g0, 1e-4) << "rep " << rep;
    EXPECT_NEAR(fit.beta1, g1, 1e-4) << "rep " << rep;
  }
}

TEST(LocalLinear, GradientMatchesFiniteDifferences) {
  const auto k = KernelSpec::student_t();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> b0(-4, 0), b1(-1, 1);
  for (int rep = 0; rep < 30; ++rep) {
    const auto s = random_series(rng, 6);
    const double a = b0(rng), b = b1(rng);
    const auto at = local_log_likelihood(s, 3.2, 1.3, k, a, b);
    EXPECT_NEAR(at.value, oracle_loglik(s, 3.2, 1.3, a, b), 1e-9 * std::abs(at.value));
    const double e = 1e-5;
    const double d0 = (local_log_likelihood(s, 3.2, 1.3, k, a + e, b).value -
                       local_log_likelihood(s, 3.2, 1.3, k, a - e, b).value) / (2 * e);
    const double d1 = (local_log_likelihood(s, 3.2, 1.3, k, a, b + e).value -
                       local_log_likelihood(s, 3.2, 1.3, k, a, b - e).value) / (2 * e);
    EXPECT_NEAR(at.gradient[0], d0, 1e-6 * std::max(1.0, std::abs(d0)));
    EXPECT_NEAR(at.gradient[1], d1, 1e-6 * std::max(1.0, std::abs(d1)));
  }
}

TEST(LocalLinear, BeatsLocallyConstantLikelihood) {
  const auto k = KernelSpec::student_t();
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 30; ++rep) {
    const auto s = random_series(rng, 8);
    const auto p1 = local_linear_fit(s, 4.5, 2.0, k);
    const auto p0 = local_constant_fit(s, 4.5, 2.0, k);
    EXPECT_GE(local_log_likelihood(s, 4.5, 2.0, k, p1.beta0, p1.beta1).value,
              local_log_likelihood(s, 4.5, 2.0, k, p0.beta0, 0.0).value - 1e-9);
  }
}

TEST(LocalLinear, RecoversGeneratingSlope) {
  const auto k = KernelSpec::student_t();
  std::mt19937_64 rng(14);
  std::vector<Observation> obs;
  for (int i = 0; i < 200; ++i) {
    const double x = (i + 0.5) / 200.0;
    const double p = logistic(-1.0 + 2.0 * x);
    std::binomial_distribution<int> y(1000, p);
    obs.push_back({x, static_cast<double>(y(rng)), 1000.0});
  }
  const WordSeries s("w", obs);
  const auto fit = local_linear_fit(s, 0.5, 0.5, k);
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.beta1, 2.0, 0.1);
}

TEST(QuadraticLogit, RecoversCoefficients) {
  std::mt19937_64 rng(15);
  std::vector<Observation> obs;
  for (int i = 0; i < 50; ++i) {
    const double x = -8.0 + 16.0 * i / 49.0;
    std::binomial_distribution<int> y(500, logistic(0.3 - 0.1 * x + 0.05 * x * x));
    obs.push_back({x, static_cast<double>(y(rng)), 500.0});
  }
  const auto fit = fit_quadratic_logit(WordSeries("w", obs));
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.coefficients[0], 0.3, 0.03);
  EXPECT_NEAR(fit.coefficients[1], -0.1, 0.01);
  EXPECT_NEAR(fit.coefficients[2], 0.05, 0.005);
  EXPECT_DOUBLE_EQ(fit.second_derivative(), 2 * fit.coefficients[2]);
}

TEST(QuadraticLogit, FlatProportionsHaveNoCurvature) {
  const auto s = make({{1, 3, 100}, {2, 6, 200}, {3, 9, 300}, {4, 3, 100}, {5, 30, 1000}, {6, 12, 400}});
  const auto fit = fit_quadratic_logit(s);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT(std::abs(fit.coefficients[2]), 1e-6);
  for (double p : fit.fitted_probabilities) EXPECT_NEAR(p, 0.03, 1e-9);
}

TEST(QuadraticLogit, SingleNonzeroCount) {
  const auto s = make({{1, 0, 100}, {2, 0, 100}, {3, 0, 100}, {4, 5, 100}, {5, 0, 100}, {6, 0, 100}});
  const auto fit = fit_quadratic_logit(s);
  for (double p : fit.fitted_probabilities) {
    EXPECT_GE(p, kProbabilityClamp);
    EXPECT_LE(p, 1.0 - kProbabilityClamp);
    EXPECT_TRUE(std::isfinite(p));
  }
  for (double c : fit.coefficients) EXPECT_TRUE(std::isfinite(c));
}

TEST(QuadraticLogit, AllZeroCountsSitAtTheClamp) {
  const auto s = make({{1, 0, 50}, {2, 0, 80}, {3, 0, 20}, {4, 0, 60}});
  const auto fit = fit_quadratic_logit(s);
  EXPECT_EQ(fit.coefficients[1], 0.0);
  EXPECT_EQ(fit.coefficients[2], 0.0);
  for (double p : fit.fitted_probabilities) EXPECT_DOUBLE_EQ(p, kProbabilityClamp);
}

TEST(WordSeries, Validation) {
  EXPECT_THROW(make({}), ValidationError);
  EXPECT_THROW(make({{1, 5, 4}}), ValidationError);
  EXPECT_THROW(make({{1, 1, 4}, {1, 1, 4}}), ValidationError);
  EXPECT_THROW(make({{1, 0, 0.5}}), ValidationError);
}
