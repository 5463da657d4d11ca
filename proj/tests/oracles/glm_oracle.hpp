#pragma once

// Reference computations for the local likelihood, written without the library.

#include <cmath>
#include <numbers>
#include <utility>

#include "chronorder/local_glm.hpp"

namespace oracle {

// t(5) density: c (1 + z^2/5)^-3 with c = Gamma(3) / (sqrt(5 pi) Gamma(5/2)).
inline double t5(double z) {
  const double c = 2.0 / (std::sqrt(5.0 * std::numbers::pi) * std::tgamma(2.5));
  return c * std::pow(1.0 + z * z / 5.0, -3.0);
}

// Kernel-weighted binomial log-likelihood without the constant.
inline double local_loglik(const chronorder::WordSeries& s, double t, double h, double b0, double b1) {
  double ll = 0.0;
  for (const auto& o : s.observations()) {
    const double w = t5((o.x - t) / h) / h;
    const double eta = b0 + b1 * (o.x - t);
    ll += w * (o.y * eta - o.r * std::log1p(std::exp(eta)));
  }
  return ll;
}

// Dense grid, then repeated local refinement around the best cell; relies only
// on concavity of the likelihood.
inline std::pair<double, double> grid_maximiser(const chronorder::WordSeries& s, double t, double h) {
  double c0 = -2.0, c1 = 0.0, span0 = 6.0, span1 = 3.0;
  for (int level = 0; level < 7; ++level) {
    const int n = 60;
    double best = -INFINITY, bb0 = c0, bb1 = c1;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double b0 = c0 - span0 + 2.0 * span0 * i / n;
        const double b1 = c1 - span1 + 2.0 * span1 * j / n;
        const double v = local_loglik(s, t, h, b0, b1);
        if (v > best) best = v, bb0 = b0, bb1 = b1;
      }
    }
    c0 = bb0, c1 = bb1;
    span0 *= 0.1, span1 *= 0.1;
  }
  return {c0, c1};
}

}  // namespace oracle
