#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "frameinv/gram.hpp"
#include "frameinv/linalg.hpp"

namespace frameinv {

/// Mixed-localization constant of the jittered Fourier frame against the
/// integer basis, as quoted for the unnormalized integral.
inline constexpr double default_c1 = 8.0 / std::numbers::pi;
/// The same constant under the normalized inner product used by this library.
inline constexpr double normalized_c1 = 4.0 / std::numbers::pi;

struct TheoryConstants {
  double A_mn = 0.0;
  double B_mn_bound = 0.0;
  /// B_mn with the |j| sum truncated at j_max.
  double B_mn_exact = 0.0;
  /// Upper bound on the part of B_mn dropped by the truncation.
  double tail_remainder_bound = 0.0;
  int j_max = 0;
  double lambda_min_psi = 0.0;
  double lambda_min_phi = 0.0;
};

struct DecayParams {
  double c0 = 1.0;
  double c1 = default_c1;
  double s = 1.0;
};

namespace detail {
inline void require_decay(double s, int n, int m) {
  require(s > 0.5, "decay exponent s must exceed 1/2, got " + std::to_string(s));
  require(n >= 1, "n must be at least 1");
  require(m > n, "m must exceed n (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
}
}  // namespace detail

/// c0^2 / ((2s-1) lambda_min) * n (m-n)^{-(2s-1)}.
inline double a_mn(double c0, double s, double lambda_min, int n, int m) {
  detail::require_decay(s, n, m);
  detail::require(lambda_min > 0.0, "a_mn: lambda_min must be positive");
  return c0 * c0 / ((2.0 * s - 1.0) * lambda_min) * n * std::pow(double(m - n), -(2.0 * s - 1.0));
}

/// c1^2 / (2s-1) / lambda_min * n (m-n)^{-(2s-1)}.
inline double b_mn_bound(double c1, double s, double lambda_min, int n, int m) {
  detail::require_decay(s, n, m);
  detail::require(lambda_min > 0.0, "b_mn_bound: lambda_min must be positive");
  return c1 * c1 / (2.0 * s - 1.0) / lambda_min * n * std::pow(double(m - n), -(2.0 * s - 1.0));
}

/// lambda_min(Phi_n)^{-1} sum_{m < |j| <= j_max} sum_{|l| <= n} |<phi_l, psi_j>|^2,
/// where tail_cross has rows psi_j (|j| <= j_max) and columns phi_l.
inline double b_mn_truncated(const CrossGram& tail_cross, int m, double lambda_min_phi) {
  detail::require(tail_cross.rows.half_width() > m, "b_mn_truncated: cross-Gram rows must extend past m");
  detail::require(lambda_min_phi > 0.0, "b_mn_truncated: lambda_min must be positive");
  double sum = 0.0;
  for (Eigen::Index a = 0; a < tail_cross.entries.rows(); ++a) {
    if (std::abs(tail_cross.rows.index(static_cast<std::size_t>(a))) <= m) continue;
    sum += tail_cross.entries.row(a).squaredNorm();
  }
  return sum / lambda_min_phi;
}

inline double tail_remainder_bound(double c1, double s, int n, int j_max) {
  return c1 * c1 * n * std::pow(double(j_max - n), -(2.0 * s - 1.0)) / (2.0 * s - 1.0);
}

/// Positive part of the smallest eigenvalue, using the principal-submatrix
/// fallback for singular Grams.
inline double gram_lambda_min(const CrossGram& self) {
  detail::require(self.is_self(), "gram_lambda_min: expected a self-Gram");
  return HermitianSolver(self.entries).lambda_min();
}

/// psi_self = Psi_n, phi_self = Phi_n, tail_cross = [<psi_j, phi_l>] for
/// |j| <= j_max, |l| <= n.
inline TheoryConstants theory_constants(const CrossGram& psi_self, const CrossGram& phi_self,
                                        const CrossGram& tail_cross, const DecayParams& p, int m, int n) {
  detail::require_decay(p.s, n, m);
  detail::require(psi_self.rows.half_width() == n && phi_self.rows.half_width() == n,
                  "theory_constants: self-Grams must have half width n");
  detail::require(tail_cross.cols.half_width() == n, "theory_constants: cross-Gram columns must have half width n");
  TheoryConstants t;
  t.lambda_min_psi = gram_lambda_min(psi_self);
  t.lambda_min_phi = gram_lambda_min(phi_self);
  t.j_max = tail_cross.rows.half_width();
  t.A_mn = a_mn(p.c0, p.s, t.lambda_min_psi, n, m);
  t.B_mn_bound = b_mn_bound(p.c1, p.s, t.lambda_min_phi, n, m);
  t.B_mn_exact = b_mn_truncated(tail_cross, m, t.lambda_min_phi);
  t.tail_remainder_bound = tail_remainder_bound(p.c1, p.s, n, t.j_max) / t.lambda_min_phi;
  return t;
}

/// Builds the Grams from the two frames, truncating the tail at j_max = 10 m.
inline TheoryConstants theory_constants(const FrameFamily& sampling, const FrameFamily& admissible,
                                        const DecayParams& p, int m, int n) {
  detail::require_decay(p.s, n, m);
  const int j_max = 10 * m;
  const FrameFamily wide = make_frame(sampling.kind(), j_max, sampling.jitter_bound(), sampling.seed());
  return theory_constants(self_gram(wide, n), self_gram(admissible, n), gram(wide, admissible, j_max, n), p, m,
                          n);
}

enum class MRule { cc, inverse, reconstruction, fourier };

inline std::string_view to_string(MRule rule) {
  switch (rule) {
    case MRule::cc: return "cc";
    case MRule::inverse: return "inverse";
    case MRule::reconstruction: return "reconstruction";
    case MRule::fourier: return "fourier";
  }
  return "?";
}

inline MRule parse_m_rule(std::string_view name) {
  if (name == "cc") return MRule::cc;
  if (name == "inverse") return MRule::inverse;
  if (name == "reconstruction") return MRule::reconstruction;
  if (name == "fourier") return MRule::fourier;
  throw DomainError("unknown m rule '" + std::string(name) + "' (valid: cc, inverse, reconstruction, fourier)");
}

struct ChooseMParams {
  /// Lower frame bound.
  double A = 1.0;
  /// Localization prefactor (c0 for cc, c1 otherwise).
  double c = default_c1;
  double s = 1.0;
  double lambda_min = 1.0;
  double alpha = 1.0;
  /// Self-localization rate of the admissible frame (inverse rule).
  double t = 1.0;
};

/// Number of frame samples m (half width) for reconstruction size n.
/// Non-integer formula values round up.
inline int choose_m(MRule rule, int n, const ChooseMParams& p) {
  detail::require(n >= 1, "choose_m: n must be at least 1");
  detail::require(p.A > 0.0, "choose_m: A must be positive");
  const double nn = n;
  double m = 0.0;
  if (rule == MRule::fourier) {
    const double api2 = p.A * std::numbers::pi * std::numbers::pi;
    m = (api2 + 128.0) / api2 * nn;
  } else {
    detail::require(p.s > 0.5, "choose_m: s must exceed 1/2");
    detail::require(p.lambda_min > 0.0, "choose_m: lambda_min must be positive");
    const double q = 2.0 * p.s - 1.0;
    const double denom = p.A * q * p.lambda_min;
    switch (rule) {
      case MRule::cc: m = nn + std::pow(2.0 * nn / denom, 1.0 / q); break;
      case MRule::inverse:
        detail::require(p.alpha > 0.0, "choose_m: alpha must be positive");
        m = nn + p.alpha * std::pow(2.0 * p.c * p.c / denom, 1.0 / q) * std::pow(nn, (p.t + 0.5) / q);
        break;
      case MRule::reconstruction: m = nn + std::pow(2.0 * p.c * p.c * nn / denom, 1.0 / q); break;
      case MRule::fourier: break;
    }
  }
  // Absorb rounding noise so exact integers are not bumped up by one.
  const double rounded = std::ceil(m - 1e-9 * std::max(1.0, m));
  if (!(rounded <= static_cast<double>(std::numeric_limits<int>::max())))
    throw DomainError("choose_m: rule '" + std::string(to_string(rule)) + "' asks for m = " + std::to_string(m) +
                      " at n = " + std::to_string(n) + ", beyond the representable range");
  return static_cast<int>(rounded);
}

}  // namespace frameinv
