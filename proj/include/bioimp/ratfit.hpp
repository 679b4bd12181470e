#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bioimp/spectra.hpp"

namespace bioimp {

/// Degrees of the numerator (N) and denominator (M) polynomials.
/// 0 <= N <= M <= 3; fitting and synthesis accept only (1,2) and (2,3).
class ModelOrders {
 public:
  ModelOrders(int numerator, int denominator);

  int numerator() const noexcept { return n_; }
  int denominator() const noexcept { return m_; }
  int unknowns() const noexcept { return n_ + m_ + 1; }
  bool supported() const noexcept { return (n_ == 1 && m_ == 2) || (n_ == 2 && m_ == 3); }
  /// Throws ValidationError unless supported().
  void require_supported() const;

  friend bool operator==(const ModelOrders&, const ModelOrders&) = default;

 private:
  int n_;
  int m_;
};

/// Z(p) = (A0 + A1 p + ... + AN p^N) / (1 + B1 p + ... + BM p^M), p = j omega.
/// A_n in ohm*s^n, B_m in s^m. B0 = 1 is implicit.
class RationalImpedance {
 public:
  RationalImpedance(std::vector<double> num_coeffs, std::vector<double> den_coeffs, double omega_scale = 1.0);

  const std::vector<double>& num_coeffs() const noexcept { return num_; }
  /// B1..BM.
  const std::vector<double>& den_coeffs() const noexcept { return den_; }
  ModelOrders orders() const noexcept { return orders_; }
  /// Angular frequency (rad/s) the coefficients were normalized by while solving.
  double omega_scale() const noexcept { return omega_scale_; }

  /// All A_n > 0 and all B_m > 0. Reported, never enforced.
  bool is_positive() const noexcept;

  /// Denominator as a full polynomial [1, B1, ..., BM] in ascending powers.
  std::vector<double> denominator_polynomial() const;

 private:
  std::vector<double> num_;
  std::vector<double> den_;
  ModelOrders orders_;
  double omega_scale_;
};

/// Complex impedance at angular frequency omega. Negative omega is allowed and
/// yields the conjugate. Throws PoleAtFrequency when |D(j omega)| < 1e-300.
std::complex<double> evaluate(const RationalImpedance& model, double omega_rad_s);

/// The real linear system in the unknowns [A0..AN, B1..BM], two rows per
/// frequency, with every omega divided by omega_scale.
struct LinearSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  double omega_scale = 1.0;
};

/// Geometric mean of the angular frequencies in the view.
double geometric_mean_omega(std::span<const FitPoint> view);

/// Throws InsufficientData when 2K < N+M+1.
LinearSystem build_system(std::span<const FitPoint> view, ModelOrders orders);
LinearSystem build_system(std::span<const FitPoint> view, ModelOrders orders, double omega_scale);

struct FitResult {
  RationalImpedance model;
  /// |N(j w_k) - Z_k D(j w_k)| per usable frequency, ohms. This is what the
  /// least-squares solve minimizes (summed in squares).
  std::vector<double> equation_residuals;
  /// |Z_model(w_k) - Z_k| per usable frequency, ohms.
  std::vector<double> fit_errors;
  double condition_estimate = 0.0;
  std::vector<FitPoint> view;
};

constexpr double kSingularConditionThreshold = 1e12;

/// Square systems are solved exactly, overdetermined ones in the least-squares
/// sense, both through a column-pivoted Householder QR of the
/// column-equilibrated system. Throws SingularSystem when the condition
/// estimate exceeds kSingularConditionThreshold.
FitResult fit_rational(std::span<const FitPoint> view, ModelOrders orders);
FitResult fit_rational(const Spectrum& spectrum, ModelOrders orders);

/// Per-frequency equation residuals of arbitrary coefficients against data.
std::vector<double> equation_residuals(const RationalImpedance& model, std::span<const FitPoint> view);

/// Sum of squared equation residuals.
double equation_residual_norm2(const RationalImpedance& model, std::span<const FitPoint> view);

}  // namespace bioimp
