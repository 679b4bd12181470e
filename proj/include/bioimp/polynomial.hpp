#pragma once

#include <complex>
#include <span>
#include <vector>

namespace bioimp::poly {

/// Real polynomial, coefficients in ascending powers.
using Coeffs = std::vector<double>;

Coeffs multiply(std::span<const double> a, std::span<const double> b);
Coeffs add(std::span<const double> a, std::span<const double> b);
Coeffs scale(std::span<const double> a, double factor);
Coeffs derivative(std::span<const double> a);
std::complex<double> eval(std::span<const double> a, std::complex<double> x);

/// Index of the highest non-zero coefficient, -1 for the zero polynomial.
int degree(std::span<const double> a);

struct Roots {
  std::vector<std::complex<double>> values;
  /// True when the closed form was abandoned for companion-matrix eigenvalues
  /// because the discriminant was within 1e-10 (relative) of zero.
  bool near_degenerate = false;
};

/// Roots of a polynomial of degree 1..3. Closed-form quadratic/cubic formulas,
/// Newton-polished; companion-matrix eigenvalues near a zero discriminant.
/// Real roots from the closed forms carry an exactly zero imaginary part.
Roots roots(std::span<const double> a);

}  // namespace bioimp::poly
