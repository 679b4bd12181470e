#pragma once

// Test-only reference computations. Nothing here calls into the fitting or
// synthesis code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "bioimp/circuits.hpp"
#include "bioimp/spectra.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Gaussian elimination with partial pivoting on a square system.
inline std::vector<double> dense_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Rows of the interpolation conditions written out by hand for orders
/// (2,3) and (1,2), raw (unscaled) omega. Unknowns [A0..AN, B1..BM].
inline void equations(double w, double r, double x, int n, int m, Matrix& a, std::vector<double>& b) {
  std::vector<double> re, im;
  // A0, A1, A2 contributions: (jw)^k
  re.push_back(1.0);
  im.push_back(0.0);
  re.push_back(0.0);
  im.push_back(w);
  if (n == 2) {
    re.push_back(-w * w);
    im.push_back(0.0);
  }
  // B1: +wX / -wR ; B2: +w^2 R / +w^2 X ; B3: -w^3 X / +w^3 R
  re.push_back(w * x);
  im.push_back(-w * r);
  re.push_back(w * w * r);
  im.push_back(w * w * x);
  if (m == 3) {
    re.push_back(-w * w * w * x);
    im.push_back(w * w * w * r);
  }
  a.push_back(re);
  a.push_back(im);
  b.push_back(r);
  b.push_back(x);
}

/// Solve with the unknowns pre-scaled by powers of w0 so the pivoted solve
/// stays well conditioned; returns de-scaled [A..., B...].
inline std::vector<double> interpolate(const std::vector<bioimp::FitPoint>& view, int n, int m) {
  double log_sum = 0.0;
  for (const auto& p : view) log_sum += std::log(p.omega_rad_s);
  const double w0 = std::exp(log_sum / view.size());
  Matrix a;
  std::vector<double> b;
  for (const auto& p : view) equations(p.omega_rad_s / w0, p.resistance_ohm, p.reactance_ohm, n, m, a, b);
  auto x = dense_solve(a, b);
  for (int i = 0; i <= n; ++i) x[i] /= std::pow(w0, i);
  for (int j = 1; j <= m; ++j) x[n + j] /= std::pow(w0, j);
  return x;
}

/// Least squares through the normal equations A^T A x = A^T b (scaled omega).
inline std::vector<double> normal_equations(const std::vector<bioimp::FitPoint>& view, int n, int m) {
  double log_sum = 0.0;
  for (const auto& p : view) log_sum += std::log(p.omega_rad_s);
  const double w0 = std::exp(log_sum / view.size());
  Matrix a;
  std::vector<double> b;
  for (const auto& p : view) equations(p.omega_rad_s / w0, p.resistance_ohm, p.reactance_ohm, n, m, a, b);
  const std::size_t k = a.front().size();
  Matrix ata(k, std::vector<double>(k, 0.0));
  std::vector<double> atb(k, 0.0);
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      atb[i] += a[r][i] * b[r];
      for (std::size_t j = 0; j < k; ++j) ata[i][j] += a[r][i] * a[r][j];
    }
  }
  auto x = dense_solve(ata, atb);
  for (int i = 0; i <= n; ++i) x[i] /= std::pow(w0, i);
  for (int j = 1; j <= m; ++j) x[n + j] /= std::pow(w0, j);
  return x;
}

/// Direct evaluation of sum R_i / (1 + j w R_i C_i).
inline std::complex<double> foster_direct(const std::vector<double>& r, const std::vector<double>& c, double w) {
  std::complex<double> z = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) z += r[i] / std::complex<double>(1.0, w * r[i] * c[i]);
  return z;
}

/// Physical Foster circuit with distinct time constants spread over three
/// decades around 1 microsecond.
inline bioimp::FosterCircuit random_physical_foster(std::mt19937_64& rng, int branches) {
  std::uniform_real_distribution<double> log_r(1.0, 4.0);
  std::vector<double> log_tau;
  std::uniform_real_distribution<double> spread(-7.5, -4.5);
  while (static_cast<int>(log_tau.size()) < branches) {
    const double t = spread(rng);
    if (std::all_of(log_tau.begin(), log_tau.end(), [&](double o) { return std::abs(o - t) > 0.05; })) {
      log_tau.push_back(t);
    }
  }
  std::vector<bioimp::RcBranch> out;
  for (double lt : log_tau) {
    const double r = std::pow(10.0, log_r(rng));
    out.push_back({r, std::pow(10.0, lt) / r});
  }
  return bioimp::FosterCircuit(std::move(out));
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> f;
  for (int i = 0; i < n; ++i) f.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return f;
}

}  // namespace oracle
