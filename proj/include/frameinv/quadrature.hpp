#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "frameinv/errors.hpp"

namespace frameinv {

/// Composite Gauss-Legendre rule on [-1, 1] with equal panels.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int panels = 0;
  int order = 0;

  template <class F>
  auto integrate(F&& f) const {
    decltype(f(0.0) * 1.0) sum{};
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

namespace detail {

/// Nodes and weights of the order-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on P_order.
inline void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(order), 0.0);
  w.assign(static_cast<std::size_t>(order), 0.0);
  const auto n = static_cast<unsigned>(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, z);
      const double pm = std::legendre(n - 1, z);
      dp = order * (z * p - pm) / (z * z - 1.0);
      const double dz = p / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    {
      const double p = std::legendre(n, z);
      const double pm = std::legendre(n - 1, z);
      dp = order * (z * p - pm) / (z * z - 1.0);
    }
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(order - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(order - 1 - i)] = wi;
  }
  if (order % 2 == 1) x[static_cast<std::size_t>(order / 2)] = 0.0;
}

}  // namespace detail

inline QuadratureRule build_quadrature(int panels, int order) {
  detail::require(panels >= 1, "build_quadrature: panels must be at least 1, got " + std::to_string(panels));
  detail::require(order >= 2, "build_quadrature: order must be at least 2, got " + std::to_string(order));
  std::vector<double> x, w;
  detail::gauss_legendre(order, x, w);
  QuadratureRule q;
  q.panels = panels;
  q.order = order;
  q.nodes.reserve(static_cast<std::size_t>(panels) * x.size());
  q.weights.reserve(q.nodes.capacity());
  const double h = 2.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = -1.0 + p * h;
    const double mid = a + 0.5 * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      q.nodes.push_back(mid + 0.5 * h * x[k]);
      q.weights.push_back(0.5 * h * w[k]);
    }
  }
  return q;
}

inline constexpr int default_quadrature_order = 24;
inline constexpr int default_min_panels = 32;

/// Default rule for frequencies up to half_width: max(32, half_width) panels of order 24.
inline QuadratureRule default_quadrature(int half_width, int min_panels = default_min_panels,
                                         int order = default_quadrature_order) {
  return build_quadrature(std::max(min_panels, half_width), order);
}

/// Whether q resolves exponentials with |frequency| <= half_width + 1.
inline bool resolves(const QuadratureRule& q, int half_width) {
  return static_cast<long long>(q.panels) * q.order >= 4LL * (half_width + 1);
}

}  // namespace frameinv
