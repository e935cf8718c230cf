#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "frameinv/coefficients.hpp"
#include "frameinv/gram.hpp"
#include "frameinv/linalg.hpp"

namespace frameinv {

enum class MapLabel { W, V, finite_section };

inline std::string_view to_string(MapLabel label) {
  switch (label) {
    case MapLabel::W: return "W";
    case MapLabel::V: return "V";
    case MapLabel::finite_section: return "finite-section";
  }
  return "?";
}

/// Coefficient-space form of a compressed frame operator Q_n S_m (W) or
/// P_n S_m (V) on the span of 2n+1 spanning elements.
///
/// For g = sum_l a_l e_l the moments <S_m g, e_k> are moment() * a; the
/// operator itself maps a to the coefficients of the projection of S_m g,
/// i.e. gram^{-1} moment() a. Solvers work on the Hermitian moment system.
class LinearMap {
 public:
  LinearMap(MapLabel label, Eigen::MatrixXcd moment, const Eigen::MatrixXcd& expansion_gram,
            IndexSet index_set, std::string frame_id)
      : label_(label),
        moment_(std::move(moment)),
        gram_solver_(expansion_gram),
        index_set_(index_set),
        frame_id_(std::move(frame_id)) {
    detail::require(moment_.rows() == moment_.cols(), "LinearMap: moment matrix must be square");
    detail::require(moment_.rows() == static_cast<Eigen::Index>(index_set_.size()),
                    "LinearMap: index set does not match the matrix size");
    detail::require(expansion_gram.rows() == moment_.rows(), "LinearMap: Gram size mismatch");
  }

  MapLabel label() const noexcept { return label_; }
  Eigen::Index dimension() const noexcept { return moment_.rows(); }
  const IndexSet& index_set() const noexcept { return index_set_; }
  const std::string& frame_id() const noexcept { return frame_id_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return moment_; }
  const HermitianSolver& gram_solver() const noexcept { return gram_solver_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
    detail::require(x.size() == dimension(), "LinearMap::apply: dimension mismatch");
    return moment_ * x;
  }

  /// Coefficients of the projected image: gram^{-1} (moment * x).
  Eigen::VectorXcd apply_operator(const Eigen::VectorXcd& x) const { return gram_solver_.solve(apply(x)); }

 private:
  MapLabel label_;
  Eigen::MatrixXcd moment_;
  HermitianSolver gram_solver_;
  IndexSet index_set_;
  std::string frame_id_;
};

/// Gram matrix K with K(k, l) = <e_l, e_k>, the system matrix for expansion
/// coefficients given moments <h, e_k>. Equals the transpose of the self-Gram.
inline Eigen::MatrixXcd expansion_gram(const CrossGram& self) {
  detail::require(self.is_self(), "expansion_gram: expected a self-Gram");
  return self.entries.transpose();
}

/// <S_m f, e_k> = sum_j <f, psi_j> <psi_j, e_k> from frame data over the cross-Gram rows.
inline CoefVector moments_of_frame_data(const CrossGram& cross, const CoefVector& frame_data) {
  detail::require(frame_data.index_set == cross.rows, "moments_of_frame_data: frame data must match the cross-Gram rows");
  detail::require(frame_data.frame_id == cross.row_frame_id,
                  "moments_of_frame_data: frame data comes from a different frame");
  return {cross.cols, sampling_matrix(cross).adjoint() * frame_data.values, cross.col_frame_id};
}

namespace detail {

inline LinearMap assemble_moment_map(MapLabel label, const CrossGram& cross, const CrossGram& self, const char* who) {
  require(self.is_self(), std::string(who) + ": expected a self-Gram for the reconstruction frame");
  require(cross.cols == self.rows, std::string(who) + ": cross-Gram columns do not match the self-Gram");
  require(cross.col_frame_id == self.row_frame_id, std::string(who) + ": cross-Gram and self-Gram use different frames");
  require(cross.rows.half_width() >= cross.cols.half_width(),
          std::string(who) + ": need at least as many samples as unknowns (m >= n)");
  const Eigen::MatrixXcd m = sampling_matrix(cross);
  Eigen::MatrixXcd moment = m.adjoint() * m;
  // Exact Hermitian symmetry for the solvers.
  moment = 0.5 * (moment + moment.adjoint()).eval();
  return LinearMap(label, std::move(moment), expansion_gram(self), self.rows, self.row_frame_id);
}

}  // namespace detail

/// W_n = Q_n S_m on span{phi_l : |l| <= n}. omega holds <psi_j, phi_l> with
/// 2m+1 rows; phi_self is Phi_n.
inline LinearMap assemble_W(const CrossGram& omega, const CrossGram& phi_self) {
  return detail::assemble_moment_map(MapLabel::W, omega, phi_self, "assemble_W");
}

/// V_n = P_n S_m on span{psi_l : |l| <= n}. psi_rect holds <psi_j, psi_l>
/// with 2m+1 rows; psi_self is Psi_n.
inline LinearMap assemble_V(const CrossGram& psi_rect, const CrossGram& psi_self) {
  detail::require(psi_rect.row_frame_id == psi_rect.col_frame_id,
                  "assemble_V: rows and columns must come from the sampling frame");
  return detail::assemble_moment_map(MapLabel::V, psi_rect, psi_self, "assemble_V");
}

/// Expansion coefficients of the orthogonal projection onto span{e_l}, given
/// the moments <h, e_k>. Realizes P_n, Q_n and U_n^{-1}.
inline CoefVector project(const CrossGram& gram_self, const CoefVector& moments) {
  detail::require(gram_self.is_self(), "project: expected a self-Gram");
  detail::require(moments.index_set == gram_self.rows, "project: moments do not match the Gram size");
  const HermitianSolver solver(expansion_gram(gram_self));
  return {moments.index_set, solver.solve(moments.values), gram_self.row_frame_id};
}

/// Condition number above which a truncated finite-section system counts as singular.
inline constexpr double finite_section_max_condition = 1e14;

/// Truncated finite-section system sum_i g_i <S phi_i, phi_j> = f_j with
/// <S phi_i, phi_j> = sum_{|k| <= m} <phi_i, psi_k> <psi_k, phi_j>. Returns the
/// basis coefficients of the approximation to S^{-1} f.
inline CoefVector finite_section(const CrossGram& psi_to_phi, const CoefVector& f_hat_basis, int m) {
  detail::require(psi_to_phi.rows.half_width() >= m, "finite_section: cross-Gram must cover |k| <= m");
  detail::require(f_hat_basis.index_set == psi_to_phi.cols, "finite_section: basis data must match the columns");
  const Eigen::Index offset = psi_to_phi.rows.half_width() - m;
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(m) + 1;
  const Eigen::MatrixXcd sm = sampling_matrix(psi_to_phi).middleRows(offset, rows);
  const Eigen::MatrixXcd system = sm.adjoint() * sm;
  const Eigen::VectorXd ev = hermitian_eigenvalues(0.5 * (system + system.adjoint()));
  const double cond = ev(0) > 0.0 ? ev(ev.size() - 1) / ev(0) : INFINITY;
  if (!(cond < finite_section_max_condition))
    throw NumericalError("finite_section: truncated system is singular (condition number " + std::to_string(cond) + ")");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  return {f_hat_basis.index_set, lu.solve(f_hat_basis.values), psi_to_phi.col_frame_id};
}

}  // namespace frameinv
