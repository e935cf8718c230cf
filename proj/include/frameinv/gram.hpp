#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "frameinv/frame.hpp"
#include "frameinv/index_set.hpp"
#include "frameinv/linalg.hpp"

namespace frameinv {

/// <e^{-i pi lambda x}, e^{-i pi mu x}> under <f,g> = (1/2) int_{-1}^{1} f conj(g) dx,
/// which is sinc(pi (lambda - mu)). Integer separations give exact zeros.
inline Complex exp_inner_product(double lambda, double mu) {
  const double d = lambda - mu;
  if (d == 0.0) return 1.0;
  // Reduce the sine argument so large separations keep full relative accuracy.
  const double k = std::nearbyint(d);
  const double r = d - k;
  const double sign = std::fmod(std::fabs(k), 2.0) == 1.0 ? -1.0 : 1.0;
  return sign * std::sin(std::numbers::pi * r) / (std::numbers::pi * d);
}

/// Matrix of inner products entry(j, l) = <row_j, col_l> between two frames.
struct CrossGram {
  IndexSet rows;
  IndexSet cols;
  Eigen::MatrixXcd entries;
  std::string row_frame_id;
  std::string col_frame_id;

  Complex entry(int j, int l) const {
    return entries(static_cast<Eigen::Index>(rows.position(j)), static_cast<Eigen::Index>(cols.position(l)));
  }
  bool is_self() const { return row_frame_id == col_frame_id && rows == cols; }
};

inline CrossGram gram(const FrameFamily& row_frame, const FrameFamily& col_frame, IndexSet rows,
                      IndexSet cols) {
  detail::require(row_frame.index_set().covers(rows),
                  "gram: row index set exceeds the row frame (" + row_frame.id() + ")");
  detail::require(col_frame.index_set().covers(cols),
                  "gram: column index set exceeds the column frame (" + col_frame.id() + ")");
  CrossGram g{rows, cols, Eigen::MatrixXcd(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size())),
              row_frame.id(), col_frame.id()};
  const bool self = g.is_self();
  for (Eigen::Index a = 0; a < g.entries.rows(); ++a) {
    const double lambda = row_frame.frequency(rows.index(static_cast<std::size_t>(a)));
    for (Eigen::Index b = self ? a : 0; b < g.entries.cols(); ++b) {
      const double mu = col_frame.frequency(cols.index(static_cast<std::size_t>(b)));
      g.entries(a, b) = exp_inner_product(lambda, mu);
      if (self) g.entries(b, a) = std::conj(g.entries(a, b));
    }
  }
  return g;
}

inline CrossGram gram(const FrameFamily& row_frame, const FrameFamily& col_frame, int row_half_width,
                      int col_half_width) {
  return gram(row_frame, col_frame, IndexSet(row_half_width), IndexSet(col_half_width));
}

inline CrossGram self_gram(const FrameFamily& frame, int half_width) {
  return gram(frame, frame, IndexSet(half_width), IndexSet(half_width));
}

/// Matrix M with M(j, l) = <col_l, row_j>: the map from expansion coefficients
/// a (g = sum a_l col_l) to the samples <g, row_j>.
inline Eigen::MatrixXcd sampling_matrix(const CrossGram& cross) { return cross.entries.conjugate(); }

}  // namespace frameinv
