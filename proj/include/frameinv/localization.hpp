#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "frameinv/gram.hpp"

namespace frameinv {

/// Power-law envelope |entry(j, l)| ~ c (1 + |j - l|)^{-s}.
struct LocalizationFit {
  double c = 0.0;
  double s = 0.0;
  /// RMS residual of the log-log fit.
  double residual = 0.0;
  /// Off-diagonals are numerically zero; c and s carry no information.
  bool saturated = false;
  /// Largest |entry| per offset k = 1..k_max (index 0 holds k = 1).
  std::vector<double> envelope;
};

inline constexpr double localization_zero_floor = 1e-13;

/// Fits the off-diagonal decay of a Gram or cross-Gram. Offsets k in
/// [4, k_max / 2] enter the fit to skip near-diagonal transients and the
/// thinly populated far corners.
inline LocalizationFit estimate_localization(const CrossGram& g) {
  const int k_max = g.rows.half_width() + g.cols.half_width();
  detail::require(k_max >= 8, "estimate_localization: need at least 8 distinct off-diagonal offsets, got " +
                                  std::to_string(k_max));
  LocalizationFit fit;
  fit.envelope.assign(static_cast<std::size_t>(k_max), 0.0);
  for (Eigen::Index a = 0; a < g.entries.rows(); ++a) {
    const int j = g.rows.index(static_cast<std::size_t>(a));
    for (Eigen::Index b = 0; b < g.entries.cols(); ++b) {
      const int k = std::abs(j - g.cols.index(static_cast<std::size_t>(b)));
      if (k == 0) continue;
      double& d = fit.envelope[static_cast<std::size_t>(k - 1)];
      d = std::max(d, std::abs(g.entries(a, b)));
    }
  }

  if (std::all_of(fit.envelope.begin(), fit.envelope.end(),
                  [](double d) { return d < localization_zero_floor; })) {
    fit.saturated = true;
    fit.c = 1.0;
    fit.s = std::numeric_limits<double>::infinity();
    return fit;
  }

  const int k_lo = 4;
  const int k_hi = std::max(k_lo + 1, k_max / 2);
  std::vector<double> xs, ys;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double d = fit.envelope[static_cast<std::size_t>(k - 1)];
    if (d < localization_zero_floor) continue;
    xs.push_back(std::log1p(static_cast<double>(k)));
    ys.push_back(std::log(d));
  }
  if (xs.size() < 2) {
    fit.saturated = true;
    fit.c = 1.0;
    fit.s = std::numeric_limits<double>::infinity();
    return fit;
  }

  const auto count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    rss += e * e;
  }
  fit.s = -slope;
  fit.c = std::exp(intercept);
  fit.residual = std::sqrt(rss / count);
  return fit;
}

}  // namespace frameinv
