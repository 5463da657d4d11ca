#include "chronorder/local_glm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "chronorder/error.hpp"

namespace chronorder {

double logistic(double eta) noexcept {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double logit(double p) noexcept { return std::log(p / (1.0 - p)); }

double clamp_probability(double p) noexcept {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

namespace {

// log(1 + exp(eta)) without overflow
double softplus(double eta) noexcept {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double binomial_deviance(std::span<const double> y, std::span<const double> r,
                         std::span<const double> mu) {
  double dev = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0.0) dev += y[i] * std::log(y[i] / (r[i] * mu[i]));
    const double miss = r[i] - y[i];
    if (miss > 0.0) dev += miss * std::log(miss / (r[i] * (1.0 - mu[i])));
  }
  return 2.0 * dev;
}

}  // namespace

WordSeries::WordSeries(std::string word, std::vector<Observation> observations, DesignScale scale)
    : word_(std::move(word)), obs_(std::move(observations)), scale_(scale) {
  if (obs_.empty()) throw ValidationError("word series '" + word_ + "' has no observations");
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    const auto& o = obs_[i];
    if (!(o.r >= 1.0)) throw ValidationError("word series '" + word_ + "': total below 1");
    if (!(o.y >= 0.0 && o.y <= o.r)) {
      throw ValidationError("word series '" + word_ + "': count outside [0, total]");
    }
    if (i > 0 && !(o.x > obs_[i - 1].x)) {
      throw ValidationError("word series '" + word_ + "': design points must strictly increase");
    }
  }
}

double WordSeries::pooled_proportion() const noexcept {
  double y = 0.0, r = 0.0;
  for (const auto& o : obs_) {
    y += o.y;
    r += o.r;
  }
  return y / r;
}

double local_constant_pi(const WordSeries& series, double t, double h, const KernelSpec& spec) {
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
  double num = 0.0, den = 0.0;
  for (const auto& o : series.observations()) {
    const double w = spec.density((o.x - t) / h) / h;
    num += o.y * w;
    den += o.r * w;
  }
  if (!(den > 0.0) || !std::isfinite(den) || !std::isfinite(num)) {
    throw DegenerateEvaluationError("kernel weights vanish at t = " + std::to_string(t) +
                                    " for '" + series.word() + "'");
  }
  return std::clamp(num / den, 0.0, 1.0);
}

LocalLikelihood local_log_likelihood(const WordSeries& series, double t, double h,
                                     const KernelSpec& spec, double beta0, double beta1) {
  if (!(h > 0.0)) throw DomainError("bandwidth must be positive");
  LocalLikelihood out{0.0, {0.0, 0.0}, {0.0, 0.0, 0.0}};
  for (const auto& o : series.observations()) {
    const double d = o.x - t;
    const double w = spec.density(d / h) / h;
    const double eta = beta0 + beta1 * d;
    const double mu = logistic(eta);
    out.value += w * (o.y * eta - o.r * softplus(eta));
    const double resid = w * (o.y - o.r * mu);
    out.gradient[0] += resid;
    out.gradient[1] += resid * d;
    const double curv = w * o.r * mu * (1.0 - mu);
    out.hessian[0] -= curv;
    out.hessian[1] -= curv * d;
    out.hessian[2] -= curv * d * d;
  }
  return out;
}

LocalFit local_constant_fit(const WordSeries& series, double t, double h, const KernelSpec& spec) {
  LocalFit fit;
  fit.degree = LocalDegree::p0;
  fit.beta0 = logit(clamp_probability(local_constant_pi(series, t, h, spec)));
  fit.beta1 = 0.0;
  fit.converged = true;
  fit.log_likelihood = local_log_likelihood(series, t, h, spec, fit.beta0, 0.0).value;
  return fit;
}

LocalFit local_linear_fit(const WordSeries& series, double t, double h, const KernelSpec& spec,
                          const NewtonOptions& options) {
  std::size_t weighted = 0;
  for (const auto& o : series.observations()) {
    if (spec.density((o.x - t) / h) / h > 0.0) ++weighted;
  }
  if (weighted < 2) throw DomainError("locally linear fit needs two weighted design points");

  LocalFit fit;
  fit.degree = LocalDegree::p1;
  fit.beta0 = local_constant_fit(series, t, h, spec).beta0;
  fit.beta1 = 0.0;

  auto current = local_log_likelihood(series, t, h, spec, fit.beta0, fit.beta1);
  for (int it = 0; it < options.max_iterations; ++it) {
    fit.iterations = it;
    if (std::hypot(current.gradient[0], current.gradient[1]) < options.gradient_tolerance) {
      fit.converged = true;
      break;
    }
    const auto& H = current.hessian;
    const double det = H[0] * H[2] - H[1] * H[1];
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
    // Newton direction -H^{-1} g
    const double step0 = -(H[2] * current.gradient[0] - H[1] * current.gradient[1]) / det;
    const double step1 = -(-H[1] * current.gradient[0] + H[0] * current.gradient[1]) / det;

    double scale = 1.0;
    auto trial = local_log_likelihood(series, t, h, spec, fit.beta0 + step0, fit.beta1 + step1);
    int halvings = 0;
    while (!(trial.value >= current.value) && halvings < options.max_halvings) {
      scale *= 0.5;
      ++halvings;
      trial = local_log_likelihood(series, t, h, spec, fit.beta0 + scale * step0,
                                   fit.beta1 + scale * step1);
    }
    if (!(trial.value >= current.value)) break;

    const double moved = std::hypot(scale * step0, scale * step1);
    fit.beta0 += scale * step0;
    fit.beta1 += scale * step1;
    current = trial;
    fit.iterations = it + 1;
    // steps below rounding of the coefficients: the gradient cannot shrink further
    if (moved <= 1e-15 * (1.0 + std::hypot(fit.beta0, fit.beta1))) {
      fit.converged = std::hypot(current.gradient[0], current.gradient[1]) <
                      1e3 * options.gradient_tolerance;
      break;
    }
  }
  if (!fit.converged &&
      std::hypot(current.gradient[0], current.gradient[1]) < options.gradient_tolerance) {
    fit.converged = true;
  }
  fit.log_likelihood = current.value;
  return fit;
}

QuadraticLogitFit fit_quadratic_logit(const WordSeries& series, const IrlsOptions& options) {
  const auto& obs = series.observations();
  std::vector<double> x(obs.size()), y(obs.size()), r(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    x[i] = obs[i].x;
    y[i] = obs[i].y;
    r[i] = obs[i].r;
  }
  return fit_quadratic_logit(x, y, r, options);
}

QuadraticLogitFit fit_quadratic_logit(std::span<const double> x, std::span<const double> y,
                                      std::span<const double> r, const IrlsOptions& options) {
  const std::size_t n = x.size();
  if (y.size() != n || r.size() != n) throw ValidationError("quadratic logit: column lengths differ");
  if (std::set<double>(x.begin(), x.end()).size() < 3) {
    throw ValidationError("quadratic logit needs at least 3 distinct design points");
  }

  QuadraticLogitFit fit;
  fit.fitted_probabilities.assign(n, 0.0);

  const bool all_zero = std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; });
  bool all_full = true;
  for (std::size_t i = 0; i < n; ++i) all_full = all_full && y[i] == r[i];
  if (all_zero || all_full) {
    const double p = all_zero ? kProbabilityClamp : 1.0 - kProbabilityClamp;
    fit.coefficients = {logit(p), 0.0, 0.0};
    fit.fitted_probabilities.assign(n, p);
    fit.converged = true;
    fit.deviance = binomial_deviance(y, r, fit.fitted_probabilities);
    return fit;
  }

  double center = 0.0;
  for (const double v : x) center += v;
  center /= static_cast<double>(n);
  double scale = 0.0;
  for (const double v : x) scale = std::max(scale, std::abs(v - center));

  std::vector<double> u(n), eta(n), mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = (x[i] - center) / scale;
    mu[i] = clamp_probability((y[i] + 0.5) / (r[i] + 1.0));
    eta[i] = logit(mu[i]);
  }

  Eigen::Vector3d gamma = Eigen::Vector3d::Zero();
  double dev_old = binomial_deviance(y, r, mu);
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::Matrix3d xtwx = Eigen::Matrix3d::Zero();
    Eigen::Vector3d xtwz = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double var = mu[i] * (1.0 - mu[i]);
      const double w = r[i] * var;
      const double z = eta[i] + (y[i] / r[i] - mu[i]) / var;
      const double u2 = u[i] * u[i];
      xtwx(0, 0) += w;
      xtwx(0, 1) += w * u[i];
      xtwx(0, 2) += w * u2;
      xtwx(1, 2) += w * u2 * u[i];
      xtwx(2, 2) += w * u2 * u2;
      xtwz(0) += w * z;
      xtwz(1) += w * u[i] * z;
      xtwz(2) += w * u2 * z;
    }
    xtwx(1, 1) = xtwx(0, 2);
    xtwx(1, 0) = xtwx(0, 1);
    xtwx(2, 0) = xtwx(0, 2);
    xtwx(2, 1) = xtwx(1, 2);

    const Eigen::LDLT<Eigen::Matrix3d> ldlt(xtwx);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
    const Eigen::Vector3d next = ldlt.solve(xtwz);
    if (!next.allFinite()) break;
    gamma = next;
    fit.iterations = it;

    for (std::size_t i = 0; i < n; ++i) {
      eta[i] = gamma(0) + gamma(1) * u[i] + gamma(2) * u[i] * u[i];
      mu[i] = clamp_probability(logistic(eta[i]));
    }
    const double dev = binomial_deviance(y, r, mu);
    if (std::abs(dev - dev_old) / (std::abs(dev) + 0.1) < options.deviance_tolerance) {
      fit.converged = true;
      fit.deviance = dev;
      break;
    }
    dev_old = dev;
    fit.deviance = dev;
  }

  // back to original x units: g0 + g1 (x - c)/s + g2 (x - c)^2 / s^2
  const double s2 = scale * scale;
  fit.coefficients[2] = gamma(2) / s2;
  fit.coefficients[1] = gamma(1) / scale - 2.0 * gamma(2) * center / s2;
  fit.coefficients[0] = gamma(0) - gamma(1) * center / scale + gamma(2) * center * center / s2;
  fit.fitted_probabilities = std::move(mu);
  return fit;
}

}  // namespace chronorder
