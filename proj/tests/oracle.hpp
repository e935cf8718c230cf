#pragma once

// Reference values computed independently of the library: adaptive
// Gauss-Kronrod quadrature straight from the defining integrals.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

/// Integral over [a, b] split into `pieces` equal parts, each done adaptively.
inline double integrate(const std::function<double(double)>& f, double a, double b, int pieces = 1) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  const double h = (b - a) / pieces;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * h;
    const double hi = p + 1 == pieces ? b : lo + h;
    total += gauss_kronrod<double, 61>::integrate(f, lo, hi, 3, 1e-13);
  }
  return total;
}

inline int pieces_for(double frequency) { return 2 + static_cast<int>(std::ceil(std::abs(frequency) / 4.0)); }

/// (1/2) int_{-1}^{1} e^{-i pi lambda x} conj(e^{-i pi mu x}) dx.
inline std::complex<double> inner_product(double lambda, double mu) {
  const double d = std::numbers::pi * (lambda - mu);
  const int pieces = pieces_for(lambda - mu);
  const double re = 0.5 * integrate([d](double x) { return std::cos(d * x); }, -1.0, 1.0, pieces);
  const double im = -0.5 * integrate([d](double x) { return std::sin(d * x); }, -1.0, 1.0, pieces);
  return {re, im};
}

/// (1/2) int_{-1}^{1} f(x) e^{+i pi lambda x} dx.
inline std::complex<double> coefficient(const std::function<double(double)>& f, double lambda) {
  const double w = std::numbers::pi * lambda;
  const int pieces = pieces_for(lambda);
  const double re = 0.5 * integrate([&](double x) { return f(x) * std::cos(w * x); }, -1.0, 1.0, pieces);
  const double im = 0.5 * integrate([&](double x) { return f(x) * std::sin(w * x); }, -1.0, 1.0, pieces);
  return {re, im};
}

/// sqrt(int_{-1}^{1} |f - g|^2) for a complex-valued g.
inline double l2_distance(const std::function<double(double)>& f,
                          const std::function<std::complex<double>(double)>& g, int pieces = 64) {
  return std::sqrt(integrate([&](double x) { return std::norm(f(x) - g(x)); }, -1.0, 1.0, pieces));
}

}  // namespace oracle
