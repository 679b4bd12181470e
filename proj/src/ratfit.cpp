#include "bioimp/ratfit.hpp"

#include <cmath>
#include <string>

#include "bioimp/errors.hpp"

namespace bioimp {

ModelOrders::ModelOrders(int numerator, int denominator) : n_(numerator), m_(denominator) {
  if (n_ < 0 || n_ > m_ || m_ > 3) {
    throw ValidationError("model orders must satisfy 0 <= N <= M <= 3, got (" + std::to_string(n_) + "," +
                          std::to_string(m_) + ")");
  }
}

void ModelOrders::require_supported() const {
  if (!supported()) {
    throw ValidationError("unsupported model orders (" + std::to_string(n_) + "," + std::to_string(m_) +
                          "); use (1,2) or (2,3)");
  }
}

namespace {

ModelOrders orders_for(const std::vector<double>& num, const std::vector<double>& den) {
  if (num.empty()) throw ValidationError("numerator needs at least A0");
  return ModelOrders(static_cast<int>(num.size()) - 1, static_cast<int>(den.size()));
}

}  // namespace

RationalImpedance::RationalImpedance(std::vector<double> num_coeffs, std::vector<double> den_coeffs,
                                     double omega_scale)
    : num_(std::move(num_coeffs)),
      den_(std::move(den_coeffs)),
      orders_(orders_for(num_, den_)),
      omega_scale_(omega_scale) {
  for (double c : num_) {
    if (!std::isfinite(c)) throw ValidationError("non-finite numerator coefficient");
  }
  for (double c : den_) {
    if (!std::isfinite(c)) throw ValidationError("non-finite denominator coefficient");
  }
  if (!std::isfinite(omega_scale_) || omega_scale_ <= 0.0) {
    throw ValidationError("omega_scale must be positive");
  }
}

bool RationalImpedance::is_positive() const noexcept {
  for (double c : num_) {
    if (!(c > 0.0)) return false;
  }
  for (double c : den_) {
    if (!(c > 0.0)) return false;
  }
  return true;
}

std::vector<double> RationalImpedance::denominator_polynomial() const {
  std::vector<double> d{1.0};
  d.insert(d.end(), den_.begin(), den_.end());
  return d;
}

namespace {

// Horner evaluation of an ascending-power real polynomial at a complex point.
std::complex<double> horner(std::span<const double> coeffs, std::complex<double> p) {
  std::complex<double> acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * p + *it;
  return acc;
}

}  // namespace

std::complex<double> evaluate(const RationalImpedance& model, double omega_rad_s) {
  const std::complex<double> p{0.0, omega_rad_s};
  const auto den = model.denominator_polynomial();
  const auto d = horner(den, p);
  if (std::abs(d) < 1e-300) {
    throw PoleAtFrequency("model has a pole at omega = " + format_number(omega_rad_s) + " rad/s",
                          omega_rad_s);
  }
  return horner(model.num_coeffs(), p) / d;
}

double geometric_mean_omega(std::span<const FitPoint> view) {
  if (view.empty()) throw InsufficientData("no frequencies");
  double log_sum = 0.0;
  for (const auto& pt : view) log_sum += std::log(pt.omega_rad_s);
  return std::exp(log_sum / static_cast<double>(view.size()));
}

LinearSystem build_system(std::span<const FitPoint> view, ModelOrders orders) {
  return build_system(view, orders, geometric_mean_omega(view));
}

LinearSystem build_system(std::span<const FitPoint> view, ModelOrders orders, double omega_scale) {
  const int n = orders.numerator();
  const int m = orders.denominator();
  const auto unknowns = static_cast<Eigen::Index>(orders.unknowns());
  const auto rows = static_cast<Eigen::Index>(2 * view.size());
  if (rows < unknowns) {
    throw InsufficientData(std::to_string(view.size()) + " usable frequencies give " + std::to_string(rows) +
                           " equations for " + std::to_string(unknowns) + " unknowns");
  }
  LinearSystem sys{Eigen::MatrixXd::Zero(rows, unknowns), Eigen::VectorXd::Zero(rows), omega_scale};
  // Z D(p) = N(p) rearranged: N(p) - Z (D(p) - 1) = Z, split into real and
  // imaginary rows.
  for (std::size_t k = 0; k < view.size(); ++k) {
    const double w = view[k].omega_rad_s / omega_scale;
    const std::complex<double> z{view[k].resistance_ohm, view[k].reactance_ohm};
    const auto re = static_cast<Eigen::Index>(2 * k);
    const auto im = re + 1;
    std::complex<double> p_pow{1.0, 0.0};
    const std::complex<double> p{0.0, w};
    for (int i = 0; i <= n; ++i) {
      sys.matrix(re, i) = p_pow.real();
      sys.matrix(im, i) = p_pow.imag();
      p_pow *= p;
    }
    p_pow = p;
    for (int j = 1; j <= m; ++j) {
      const auto term = -z * p_pow;
      sys.matrix(re, n + j) = term.real();
      sys.matrix(im, n + j) = term.imag();
      p_pow *= p;
    }
    sys.rhs(re) = z.real();
    sys.rhs(im) = z.imag();
  }
  return sys;
}

std::vector<double> equation_residuals(const RationalImpedance& model, std::span<const FitPoint> view) {
  std::vector<double> out;
  out.reserve(view.size());
  const auto den = model.denominator_polynomial();
  for (const auto& pt : view) {
    const std::complex<double> p{0.0, pt.omega_rad_s};
    const std::complex<double> z{pt.resistance_ohm, pt.reactance_ohm};
    out.push_back(std::abs(horner(model.num_coeffs(), p) - z * horner(den, p)));
  }
  return out;
}

double equation_residual_norm2(const RationalImpedance& model, std::span<const FitPoint> view) {
  double sum = 0.0;
  for (double r : equation_residuals(model, view)) sum += r * r;
  return sum;
}

FitResult fit_rational(std::span<const FitPoint> view, ModelOrders orders) {
  orders.require_supported();
  const auto sys = build_system(view, orders);

  // Column equilibration: the A columns are O(1) while the B columns carry
  // the measured ohms.
  Eigen::VectorXd col_norm = sys.matrix.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < col_norm.size(); ++j) {
    if (col_norm(j) == 0.0) col_norm(j) = 1.0;
  }
  const Eigen::MatrixXd scaled = sys.matrix * col_norm.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  const double largest = diag.maxCoeff();
  const double smallest = diag.minCoeff();
  const double condition = smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity();
  if (!(condition <= kSingularConditionThreshold)) {
    throw SingularSystem("fit system is singular to working precision (condition estimate " +
                             format_number(condition) + ")",
                         condition);
  }
  const Eigen::VectorXd x = qr.solve(sys.rhs).cwiseQuotient(col_norm);

  const int n = orders.numerator();
  const int m = orders.denominator();
  std::vector<double> a(static_cast<std::size_t>(n + 1));
  std::vector<double> b(static_cast<std::size_t>(m));
  for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = x(i) / std::pow(sys.omega_scale, i);
  for (int j = 1; j <= m; ++j) b[static_cast<std::size_t>(j - 1)] = x(n + j) / std::pow(sys.omega_scale, j);

  FitResult result{RationalImpedance(std::move(a), std::move(b), sys.omega_scale), {}, {}, condition,
                   std::vector<FitPoint>(view.begin(), view.end())};
  result.equation_residuals = equation_residuals(result.model, view);
  for (const auto& pt : view) {
    const std::complex<double> z{pt.resistance_ohm, pt.reactance_ohm};
    result.fit_errors.push_back(std::abs(evaluate(result.model, pt.omega_rad_s) - z));
  }
  return result;
}

FitResult fit_rational(const Spectrum& spectrum, ModelOrders orders) {
  orders.require_supported();
  const auto view = fitting_view(spectrum);
  return fit_rational(view, orders);
}

}  // namespace bioimp
