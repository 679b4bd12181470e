#include "bioimp/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "bioimp/errors.hpp"

namespace bioimp::poly {

Coeffs multiply(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Coeffs add(std::span<const double> a, std::span<const double> b) {
  Coeffs out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Coeffs scale(std::span<const double> a, double factor) {
  Coeffs out(a.begin(), a.end());
  for (double& c : out) c *= factor;
  return out;
}

Coeffs derivative(std::span<const double> a) {
  if (a.size() <= 1) return {0.0};
  Coeffs out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = static_cast<double>(i) * a[i];
  return out;
}

std::complex<double> eval(std::span<const double> a, std::complex<double> x) {
  std::complex<double> acc{0.0, 0.0};
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int degree(std::span<const double> a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
    if (a[static_cast<std::size_t>(i)] != 0.0) return i;
  }
  return -1;
}

namespace {

constexpr double kNearZeroDiscriminant = 1e-10;

double newton_polish(std::span<const double> a, double x) {
  const auto da = derivative(a);
  for (int iter = 0; iter < 3; ++iter) {
    const double f = eval(a, x).real();
    const double df = eval(da, x).real();
    if (df == 0.0) break;
    const double step = f / df;
    if (!std::isfinite(step)) break;
    const double next = x - step;
    // Keep the step only if it does not make things worse.
    if (std::abs(eval(a, next).real()) > std::abs(f)) break;
    x = next;
  }
  return x;
}

std::vector<std::complex<double>> companion_roots(std::span<const double> monic, int deg) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) c(i, deg - 1) = -monic[static_cast<std::size_t>(i)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < deg; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

// Stable quadratic x^2 + b x + c. Returns false when the discriminant is
// near zero.
bool quadratic(double b, double c, std::vector<std::complex<double>>& out) {
  const double disc = b * b - 4.0 * c;
  const double mag = b * b + 4.0 * std::abs(c);
  if (mag == 0.0 || std::abs(disc) <= kNearZeroDiscriminant * mag) return false;
  if (disc > 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    out.emplace_back(q, 0.0);
    out.emplace_back(q != 0.0 ? c / q : -b - q, 0.0);
  } else {
    const double re = -0.5 * b;
    const double im = 0.5 * std::sqrt(-disc);
    out.emplace_back(re, im);
    out.emplace_back(re, -im);
  }
  return true;
}

// Monic cubic x^3 + b x^2 + c x + d.
bool cubic(double b, double c, double d, std::vector<std::complex<double>>& out) {
  const double shift = b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double half_q2 = 0.25 * q * q;
  const double third_p3 = p * p * p / 27.0;
  const double disc = half_q2 + third_p3;
  const double mag = half_q2 + std::abs(third_p3);
  if (mag == 0.0 || std::abs(disc) <= kNearZeroDiscriminant * mag) return false;
  // Triple root: the depressed cubic vanishes up to rounding.
  const double coeff_scale = b * b + std::abs(c) + std::pow(std::abs(d), 2.0 / 3.0);
  if (std::abs(p) <= 1e-7 * coeff_scale && std::abs(q) <= 1e-7 * std::pow(coeff_scale, 1.5)) return false;
  if (disc < 0.0) {
    // Three distinct real roots, trigonometric form.
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      out.emplace_back(r * std::cos(theta - 2.0 * 3.14159265358979323846 * k / 3.0) - shift, 0.0);
    }
  } else {
    // One real root and a conjugate pair.
    const double s = std::sqrt(disc);
    const double big = -0.5 * q + std::copysign(s, -q);
    const double u = std::cbrt(big);
    const double v = u != 0.0 ? -p / (3.0 * u) : 0.0;
    const double real_root = u + v - shift;
    out.emplace_back(real_root, 0.0);
    out.emplace_back(-0.5 * (u + v) - shift, 0.5 * std::sqrt(3.0) * (u - v));
    out.emplace_back(-0.5 * (u + v) - shift, -0.5 * std::sqrt(3.0) * (u - v));
  }
  return true;
}

}  // namespace

Roots roots(std::span<const double> a) {
  const int deg = degree(a);
  if (deg < 1 || deg > 3) throw ValidationError("root finding supports degrees 1 to 3");
  if (a[0] == 0.0) {
    // Zero root; deflate by x.
    Roots rest = deg == 1 ? Roots{} : roots(a.subspan(1, static_cast<std::size_t>(deg)));
    rest.values.insert(rest.values.begin(), {0.0, 0.0});
    return rest;
  }

  // Balance: x = s y with s = |a0/a_deg|^(1/deg) makes the constant and
  // leading terms equal in magnitude.
  const double s = std::pow(std::abs(a[0] / a[static_cast<std::size_t>(deg)]), 1.0 / deg);
  Coeffs monic(static_cast<std::size_t>(deg) + 1);
  const double lead = a[static_cast<std::size_t>(deg)] * std::pow(s, deg);
  for (int k = 0; k <= deg; ++k) {
    monic[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)] * std::pow(s, k) / lead;
  }

  Roots result;
  bool ok = true;
  if (deg == 1) {
    result.values.emplace_back(-monic[0], 0.0);
  } else if (deg == 2) {
    ok = quadratic(monic[1], monic[0], result.values);
  } else {
    ok = cubic(monic[2], monic[1], monic[0], result.values);
  }
  if (!ok) {
    result.values = companion_roots(monic, deg);
    result.near_degenerate = true;
  }
  for (auto& r : result.values) {
    if (!result.near_degenerate && r.imag() == 0.0) r = {newton_polish(monic, r.real()), 0.0};
    r *= s;
  }
  return result;
}

}  // namespace bioimp::poly
