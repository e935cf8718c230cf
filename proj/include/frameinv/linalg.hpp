#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frameinv/errors.hpp"

namespace frameinv {

using Complex = std::complex<double>;

/// Relative eigenvalue floor below which a Gram matrix is treated as singular.
inline constexpr double singular_gram_threshold = 1e-10;

inline bool has_zero_imaginary_part(const Eigen::MatrixXcd& m) {
  return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0;
}

/// Ascending eigenvalues of a Hermitian matrix. Exponential-family Grams are
/// real symmetric, so the cheaper real solver is used when possible.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw DomainError("hermitian_eigenvalues: matrix is not square");
  if (m.size() == 0) return {};
  if (has_zero_imaginary_part(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Maximum entrywise deviation from Hermitian symmetry.
inline double hermitian_defect(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Solver for Hermitian positive semidefinite Gram systems. When the matrix is
/// numerically singular (lambda_min <= threshold * lambda_max) it restricts to
/// the principal submatrix picked by diagonally pivoted LDL^T, dropping pivots
/// below the threshold; dropped unknowns are set to zero.
class HermitianSolver {
 public:
  HermitianSolver() = default;

  explicit HermitianSolver(const Eigen::MatrixXcd& gram, double rel_threshold = singular_gram_threshold) {
    if (gram.rows() != gram.cols()) throw DomainError("HermitianSolver: Gram matrix is not square");
    const Eigen::Index n = gram.rows();
    dimension_ = n;
    if (n == 0) return;
    const Eigen::VectorXd ev = hermitian_eigenvalues(gram);
    lambda_min_ = ev(0);
    lambda_max_ = ev(n - 1);
    if (!(lambda_max_ > 0.0))
      throw NumericalError("HermitianSolver: Gram matrix has no positive eigenvalue");
    const double floor = rel_threshold * lambda_max_;

    if (lambda_min_ > floor) {
      active_.resize(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) active_[static_cast<std::size_t>(i)] = i;
      factor_.compute(gram);
      return;
    }

    Eigen::LDLT<Eigen::MatrixXcd> pivoted(gram);
    Eigen::VectorXi order = Eigen::VectorXi::LinSpaced(n, 0, static_cast<int>(n - 1));
    order = pivoted.transpositionsP() * order;
    const Eigen::VectorXd d = pivoted.vectorD().real();
    for (Eigen::Index i = 0; i < n && d(i) > floor; ++i) active_.push_back(order(i));
    if (active_.empty())
      throw NumericalError("HermitianSolver: no well-conditioned principal submatrix");
    std::sort(active_.begin(), active_.end());

    // Shrink further until the kept block itself clears the threshold.
    for (;;) {
      const Eigen::MatrixXcd sub = submatrix(gram);
      const Eigen::VectorXd sev = hermitian_eigenvalues(sub);
      if (sev(0) > rel_threshold * sev(sev.size() - 1)) {
        lambda_min_ = sev(0);
        lambda_max_ = sev(sev.size() - 1);
        factor_.compute(sub);
        break;
      }
      if (active_.size() == 1)
        throw NumericalError("HermitianSolver: no well-conditioned principal submatrix");
      active_.pop_back();
    }
  }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
    if (rhs.size() != dimension_) throw DomainError("HermitianSolver: right-hand side size mismatch");
    if (dimension_ == 0) return {};
    if (!reduced()) return factor_.solve(rhs);
    Eigen::VectorXcd sub_rhs(static_cast<Eigen::Index>(active_.size()));
    for (std::size_t i = 0; i < active_.size(); ++i) sub_rhs(static_cast<Eigen::Index>(i)) = rhs(active_[i]);
    const Eigen::VectorXcd sub_x = factor_.solve(sub_rhs);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dimension_);
    for (std::size_t i = 0; i < active_.size(); ++i) x(active_[i]) = sub_x(static_cast<Eigen::Index>(i));
    return x;
  }

  Eigen::Index dimension() const noexcept { return dimension_; }
  bool reduced() const noexcept { return static_cast<Eigen::Index>(active_.size()) != dimension_; }
  const std::vector<Eigen::Index>& active() const noexcept { return active_; }
  /// Extreme eigenvalues of the (possibly reduced) system actually solved.
  double lambda_min() const noexcept { return lambda_min_; }
  double lambda_max() const noexcept { return lambda_max_; }

 private:
  Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& gram) const {
    const auto k = static_cast<Eigen::Index>(active_.size());
    Eigen::MatrixXcd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = gram(active_[a], active_[b]);
    return sub;
  }

  Eigen::Index dimension_ = 0;
  std::vector<Eigen::Index> active_;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
  Eigen::LDLT<Eigen::MatrixXcd> factor_;
};

}  // namespace frameinv
