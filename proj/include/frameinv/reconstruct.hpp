#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "frameinv/coefficients.hpp"
#include "frameinv/frame.hpp"
#include "frameinv/gram.hpp"
#include "frameinv/operators.hpp"
#include "frameinv/quadrature.hpp"
#include "frameinv/solvers.hpp"
#include "frameinv/target_function.hpp"

namespace frameinv {

enum class Method { new_method, cc, finite_section, fourier };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::new_method: return "new";
    case Method::cc: return "cc";
    case Method::finite_section: return "finite-section";
    case Method::fourier: return "fourier";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  if (name == "new") return Method::new_method;
  if (name == "cc") return Method::cc;
  if (name == "finite-section") return Method::finite_section;
  if (name == "fourier") return Method::fourier;
  throw DomainError("unknown method '" + std::string(name) + "' (valid: new, cc, finite-section, fourier)");
}

/// sum_j coef_j e^{-i pi lambda_j x} at each grid point.
inline std::vector<Complex> evaluate_expansion(const CoefVector& coef, const FrameFamily& frame,
                                               std::span<const double> grid) {
  detail::require(frame.index_set().covers(coef.index_set), "evaluate_expansion: frame does not cover the coefficients");
  detail::require(coef.frame_id == frame.id(), "evaluate_expansion: coefficients refer to frame '" + coef.frame_id +
                                                   "', not '" + frame.id() + "'");
  std::vector<Complex> out(grid.size());
  for (std::size_t p = 0; p < coef.index_set.size(); ++p) {
    const Complex c = coef.values(static_cast<Eigen::Index>(p));
    if (c == Complex{}) continue;
    const double omega = -std::numbers::pi * frame.frequency(coef.index_set.index(p));
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] += c * std::polar(1.0, omega * grid[i]);
  }
  return out;
}

/// Uniform grid of `size` points on [-1, 1] including both endpoints.
inline std::vector<double> uniform_grid(int size) {
  detail::require(size >= 2, "uniform_grid: need at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) g[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (size - 1);
  g.back() = 1.0;
  return g;
}

struct ErrorMetrics {
  /// sqrt(int_{-1}^{1} |f - g|^2 dx).
  double l2_error = 0.0;
  double max_pointwise = 0.0;
  std::vector<double> pointwise;
};

/// L2 error by quadrature and |f(x) - g(x)| on the grid; the imaginary part
/// of the reconstruction counts as error.
inline ErrorMetrics error_metrics(const TargetFunction& f, const CoefVector& coef, const FrameFamily& frame,
                                  const QuadratureRule& q, std::span<const double> grid) {
  if (!resolves(q, coef.index_set.half_width()))
    throw DomainError("error_metrics: quadrature under-resolved for half width " +
                      std::to_string(coef.index_set.half_width()));
  ErrorMetrics e;
  const std::vector<Complex> at_nodes = evaluate_expansion(coef, frame, q.nodes);
  double sum = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) sum += q.weights[k] * std::norm(f(q.nodes[k]) - at_nodes[k]);
  e.l2_error = std::sqrt(sum);
  const std::vector<Complex> at_grid = evaluate_expansion(coef, frame, grid);
  e.pointwise.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    e.pointwise[i] = std::abs(f(grid[i]) - at_grid[i]);
    e.max_pointwise = std::max(e.max_pointwise, e.pointwise[i]);
  }
  return e;
}

struct ReconstructionOptions {
  double tol = default_tolerance;
  int max_iter = default_max_iterations;
  int quadrature_min_panels = default_min_panels;
  int quadrature_order = default_quadrature_order;
  int grid_size = 1024;
  bool keep_pointwise = false;
};

struct ReconstructionResult {
  Method method = Method::new_method;
  int n = 0;
  int m = 0;
  CoefVector coefficients;
  double l2_error = 0.0;
  double max_pointwise_error = 0.0;
  int iterations = 0;
  double condition_number = 1.0;
  std::uint64_t seed = 0;
  std::chrono::duration<double, std::milli> wall_time{};
  bool converged = true;
  double final_relative_residual = 0.0;
  std::vector<double> grid;
  std::vector<double> pointwise;
};

/// Reconstructs f from the frame coefficients {<f, psi_j>}_{|j| <= m} with 2n+1 terms.
///   new            : W_n^{-1} Q_n S_m f in the integer basis (CG on Omega^H Omega).
///   cc             : V_n^{-1} P_n S_m f in span{psi_l} (CG on the moment matrix G).
///   finite-section : truncated finite section applied to S_m f, solved directly.
///   fourier        : partial sum of the integer Fourier series (m = n).
inline ReconstructionResult reconstruct(Method method, const TargetFunction& f, const FrameFamily& frame, int n, int m,
                                        const ReconstructionOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  detail::require(n >= 0, "reconstruct: n must be nonnegative");
  ReconstructionResult res;
  res.method = method;
  res.n = n;
  res.seed = frame.seed();

  const FrameFamily basis = integer_basis(n);
  const FrameFamily* expansion_frame = &basis;

  if (method == Method::fourier) {
    res.m = n;
    res.coefficients = frame_coefficients(f, basis, IndexSet(n),
                                          default_quadrature(n, opt.quadrature_min_panels, opt.quadrature_order));
    res.condition_number = 1.0;
  } else {
    detail::require(m >= n, "reconstruct: need m >= n (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
    detail::require(frame.half_width() >= m, "reconstruct: frame does not cover |j| <= m");
    res.m = m;
    const CoefVector f_hat =
        frame_coefficients(f, frame, IndexSet(m), default_quadrature(m, opt.quadrature_min_panels, opt.quadrature_order));

    if (method == Method::cc) {
      const CrossGram psi_rect = gram(frame, frame, m, n);
      const LinearMap v = assemble_V(psi_rect, self_gram(frame, n));
      const SolveReport sr = cg_solve(v, moments_of_frame_data(psi_rect, f_hat), opt.tol, opt.max_iter);
      res.coefficients = sr.solution;
      res.iterations = sr.iterations;
      res.converged = sr.converged;
      res.final_relative_residual = sr.final_relative_residual;
      res.condition_number = condition_number(v);
      expansion_frame = &frame;
    } else {
      const CrossGram omega = gram(frame, basis, m, n);
      const CoefVector moments = moments_of_frame_data(omega, f_hat);
      if (method == Method::new_method) {
        const LinearMap w = assemble_W(omega, self_gram(basis, n));
        const SolveReport sr = cg_solve(w, moments, opt.tol, opt.max_iter);
        res.coefficients = sr.solution;
        res.iterations = sr.iterations;
        res.converged = sr.converged;
        res.final_relative_residual = sr.final_relative_residual;
        res.condition_number = condition_number(w);
      } else {
        res.coefficients = finite_section(omega, moments, m);
        const Eigen::MatrixXcd sm = sampling_matrix(omega);
        res.condition_number = condition_number(Eigen::MatrixXcd(sm.adjoint() * sm));
        res.final_relative_residual = 0.0;
      }
    }
  }

  const QuadratureRule q = default_quadrature(n, opt.quadrature_min_panels, opt.quadrature_order);
  const std::vector<double> grid = uniform_grid(opt.grid_size);
  ErrorMetrics e = error_metrics(f, res.coefficients, *expansion_frame, q, grid);
  res.l2_error = e.l2_error;
  res.max_pointwise_error = e.max_pointwise;
  if (opt.keep_pointwise) {
    res.grid = grid;
    res.pointwise = std::move(e.pointwise);
  }
  res.wall_time = std::chrono::steady_clock::now() - start;
  return res;
}

}  // namespace frameinv
