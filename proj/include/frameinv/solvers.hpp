#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "frameinv/coefficients.hpp"
#include "frameinv/frame.hpp"
#include "frameinv/gram.hpp"
#include "frameinv/linalg.hpp"
#include "frameinv/operators.hpp"

namespace frameinv {

enum class SolveStatus { converged, max_iterations, stagnation, diverged };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::stagnation: return "stagnation";
    case SolveStatus::diverged: return "diverged";
  }
  return "?";
}

struct SolveReport {
  CoefVector solution;
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
};

inline constexpr double default_tolerance = 1e-5;
inline constexpr int default_max_iterations = 500;
inline constexpr double cg_breakdown_threshold = 1e-300;

/// Called after every iteration with (iteration, current iterate, relative residual).
using IterationObserver = std::function<void(int, const Eigen::VectorXcd&, double)>;

namespace detail {
inline void require_rhs(const LinearMap& map, const CoefVector& rhs, double tol, int max_iter) {
  require(rhs.index_set == map.index_set(), "solver: right-hand side does not match the map's index set");
  require(tol > 0.0, "solver: tolerance must be positive");
  require(max_iter >= 0, "solver: max_iter must be nonnegative");
}
}  // namespace detail

/// Conjugate gradient acceleration for the Hermitian PSD moment system, in the
/// three-term form
///   alpha_j = <r_j, p_j> / <p_j, W p_j>,  x_{j+1} = x_j + alpha_j p_j,
///   r_{j+1} = r_j - alpha_j W p_j,
///   p_{j+1} = W p_j - (<W p_j, W p_j> / <p_j, W p_j>) p_j
///                   - (<W p_j, W p_{j-1}> / <p_{j-1}, W p_{j-1}>) p_{j-1},
/// starting from x_0 = 0, r_0 = p_0 = rhs, p_{-1} = 0. Stops once
/// ||r_j|| / ||rhs|| <= tol. Each new direction is rescaled to unit length,
/// which leaves the iterates unchanged because the recurrence is homogeneous.
inline SolveReport cg_solve(const LinearMap& map, const CoefVector& rhs, double tol = default_tolerance,
                            int max_iter = default_max_iterations, const IterationObserver& observer = {}) {
  detail::require_rhs(map, rhs, tol, max_iter);
  const Eigen::Index n = map.dimension();
  SolveReport report;
  report.solution = {rhs.index_set, Eigen::VectorXcd::Zero(n), map.frame_id()};
  Eigen::VectorXcd& x = report.solution.values;

  const double rhs_norm = rhs.values.norm();
  if (rhs_norm == 0.0) {
    report.converged = true;
    report.status = SolveStatus::converged;
    return report;
  }

  Eigen::VectorXcd r = rhs.values;
  Eigen::VectorXcd p = r / r.norm();
  Eigen::VectorXcd p_prev = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd wp_prev = Eigen::VectorXcd::Zero(n);
  double curv_prev = 0.0;
  double rel = 1.0;

  for (int j = 0; j < max_iter; ++j) {
    const Eigen::VectorXcd wp = map.apply(p);
    const double curv = p.dot(wp).real();  // <p_j, W p_j>
    if (!(curv > cg_breakdown_threshold)) {
      report.status = SolveStatus::stagnation;
      report.final_relative_residual = rel;
      return report;
    }
    const Complex alpha = p.dot(r) / curv;  // <r_j, p_j> = p_j^H r_j
    x += alpha * p;
    r -= alpha * wp;
    rel = r.norm() / rhs_norm;
    report.iterations = j + 1;
    if (observer) observer(j + 1, x, rel);
    if (rel <= tol) {
      report.converged = true;
      report.status = SolveStatus::converged;
      report.final_relative_residual = rel;
      return report;
    }

    Eigen::VectorXcd next = wp - (wp.squaredNorm() / curv) * p;
    if (curv_prev > 0.0) next -= (wp_prev.dot(wp) / curv_prev) * p_prev;  // <W p_j, W p_{j-1}>
    const double len = next.norm();
    if (!(len > 0.0) || !std::isfinite(len)) {
      report.status = SolveStatus::stagnation;
      report.final_relative_residual = rel;
      return report;
    }
    p_prev = p;
    wp_prev = wp;
    curv_prev = curv;
    p = next / len;
  }
  report.status = SolveStatus::max_iterations;
  report.final_relative_residual = rel;
  return report;
}

enum class BoundsMethod { eigen_numeric, user_supplied };

/// Frame bounds A (lower) and B (upper).
struct FrameBounds {
  double A = 1.0;
  double B = 1.0;
  BoundsMethod method = BoundsMethod::user_supplied;

  /// Bounds for the relaxed iteration, which uses A/2 as the lower bound of W_n.
  static FrameBounds user_supplied(double A, double B) {
    detail::require(A > 0.0 && B > 0.0 && 0.5 * A <= B,
                    "FrameBounds: need 0 < A/2 <= B, got A=" + std::to_string(A) + ", B=" + std::to_string(B));
    return {A, B, BoundsMethod::user_supplied};
  }

  /// Per-step error contraction (B - A/2) / (A/2 + B) of the relaxed iteration.
  double contraction() const { return (B - 0.5 * A) / (0.5 * A + B); }
};

/// Number of consecutive residual increases treated as divergence.
inline constexpr int richardson_divergence_window = 10;

/// Frame algorithm x_j = x_{j-1} + 2/(A/2 + B) (rhs - W x_{j-1}), x_0 = 0.
inline SolveReport richardson_solve(const LinearMap& map, const CoefVector& rhs, const FrameBounds& bounds,
                                    double tol = default_tolerance, int max_iter = 20 * default_max_iterations,
                                    const IterationObserver& observer = {}) {
  detail::require_rhs(map, rhs, tol, max_iter);
  detail::require(bounds.A > 0.0 && bounds.B > 0.0 && 0.5 * bounds.A <= bounds.B,
                  "richardson_solve: invalid frame bounds");
  const double relax = 2.0 / (0.5 * bounds.A + bounds.B);
  SolveReport report;
  report.solution = {rhs.index_set, Eigen::VectorXcd::Zero(map.dimension()), map.frame_id()};
  Eigen::VectorXcd& x = report.solution.values;
  const double rhs_norm = rhs.values.norm();
  if (rhs_norm == 0.0) {
    report.converged = true;
    report.status = SolveStatus::converged;
    return report;
  }
  Eigen::VectorXcd r = rhs.values;
  double rel = 1.0;
  int growth = 0;
  for (int j = 1; j <= max_iter; ++j) {
    x += relax * r;
    r = rhs.values - map.apply(x);
    const double next_rel = r.norm() / rhs_norm;
    growth = next_rel > rel ? growth + 1 : 0;
    rel = next_rel;
    report.iterations = j;
    if (observer) observer(j, x, rel);
    if (rel <= tol) {
      report.converged = true;
      report.status = SolveStatus::converged;
      break;
    }
    if (growth >= richardson_divergence_window || !std::isfinite(rel)) {
      report.status = SolveStatus::diverged;
      break;
    }
  }
  if (!report.converged && report.status != SolveStatus::diverged) report.status = SolveStatus::max_iterations;
  report.final_relative_residual = rel;
  return report;
}

/// Relative pivot threshold used to decide the numerical rank in direct_ls.
inline constexpr double direct_ls_rank_threshold = 1e-12;

/// argmin_a sum_j |<g, psi_j> - f_hat_j|^2 over g = sum_l a_l phi_l, via
/// column-pivoted Householder QR of the sampling matrix.
inline CoefVector direct_ls(const CrossGram& omega, const CoefVector& f_hat) {
  detail::require(f_hat.index_set == omega.rows, "direct_ls: frame data does not match the cross-Gram rows");
  const Eigen::MatrixXcd m = sampling_matrix(omega);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
  qr.setThreshold(direct_ls_rank_threshold);
  if (qr.rank() < m.cols())
    throw NumericalError("direct_ls: sampling matrix is rank deficient (numerical rank " + std::to_string(qr.rank()) +
                         " of " + std::to_string(m.cols()) + ")");
  return {omega.cols, qr.solve(f_hat.values), omega.col_frame_id};
}

/// Numeric frame bounds: extreme eigenvalues of the moment matrix of the frame
/// against the integer basis on the square probe {|j|, |l| <= probe}, i.e.
/// Rayleigh bounds of the frame operator over band-limited probes.
inline FrameBounds estimate_frame_bounds(const FrameFamily& frame, int probe_half_width, int largest_n = 0) {
  detail::require(probe_half_width >= 1, "estimate_frame_bounds: probe half width must be positive");
  detail::require(probe_half_width >= 4 * largest_n,
                  "estimate_frame_bounds: probe half width " + std::to_string(probe_half_width) +
                      " is smaller than 4x the largest n (" + std::to_string(largest_n) + ")");
  detail::require(frame.half_width() >= probe_half_width, "estimate_frame_bounds: frame does not cover the probe");
  const CrossGram cross = gram(frame, integer_basis(probe_half_width), probe_half_width, probe_half_width);
  const Eigen::MatrixXcd m = sampling_matrix(cross);
  const Eigen::VectorXd ev = hermitian_eigenvalues(m.adjoint() * m);
  FrameBounds b{ev(0), ev(ev.size() - 1), BoundsMethod::eigen_numeric};
  if (!(b.A > 0.0)) throw NumericalError("estimate_frame_bounds: probe matrix is singular");
  return b;
}

/// 2-norm condition number of a Hermitian matrix; +inf when singular.
inline double condition_number(const Eigen::MatrixXcd& hermitian) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(hermitian).cwiseAbs();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

/// Condition number of the moment matrix the solvers iterate on.
inline double condition_number(const LinearMap& map) { return condition_number(map.matrix()); }

}  // namespace frameinv
