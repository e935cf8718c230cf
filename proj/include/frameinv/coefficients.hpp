#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frameinv/frame.hpp"
#include "frameinv/index_set.hpp"
#include "frameinv/linalg.hpp"
#include "frameinv/quadrature.hpp"
#include "frameinv/target_function.hpp"

namespace frameinv {

/// Complex coefficients over a symmetric index set, tagged with the frame they refer to.
struct CoefVector {
  IndexSet index_set;
  Eigen::VectorXcd values;
  std::string frame_id;

  Complex value(int j) const { return values(static_cast<Eigen::Index>(index_set.position(j))); }
  std::size_t size() const noexcept { return index_set.size(); }
};

/// <f, psi_j> = (1/2) sum_k w_k f(x_k) e^{+i pi lambda_j x_k} for |j| <= idx.half_width.
inline CoefVector frame_coefficients(const TargetFunction& f, const FrameFamily& frame, IndexSet idx,
                                     const QuadratureRule& q) {
  detail::require(frame.index_set().covers(idx), "frame_coefficients: index set exceeds the frame");
  if (!resolves(q, idx.half_width()))
    throw DomainError("frame_coefficients: quadrature under-resolved; need panels*order >= " +
                      std::to_string(4 * (idx.half_width() + 1)) + ", have " +
                      std::to_string(q.panels * q.order));
  std::vector<double> fw(q.nodes.size());
  for (std::size_t k = 0; k < fw.size(); ++k) fw[k] = 0.5 * q.weights[k] * f(q.nodes[k]);

  CoefVector out{idx, Eigen::VectorXcd(static_cast<Eigen::Index>(idx.size())), frame.id()};
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const double omega = std::numbers::pi * frame.frequency(idx.index(p));
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < fw.size(); ++k) {
      const double phase = omega * q.nodes[k];
      re += fw[k] * std::cos(phase);
      im += fw[k] * std::sin(phase);
    }
    out.values(static_cast<Eigen::Index>(p)) = {re, im};
  }
  return out;
}

inline CoefVector frame_coefficients(const TargetFunction& f, const FrameFamily& frame, int half_width) {
  return frame_coefficients(f, frame, IndexSet(half_width), default_quadrature(half_width));
}

}  // namespace frameinv
