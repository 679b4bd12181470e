#include "bioimp/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bioimp/errors.hpp"
#include "bioimp/polynomial.hpp"

namespace bioimp {

namespace {

constexpr double kDistinctRelTol = 1e-9;
// Eigenvalues of a defective companion matrix split by about sqrt(eps), so a
// true repeated root shows up this far apart on the near-degenerate path.
constexpr double kCompanionClusterRelTol = 1.5e-7;
constexpr double kDegenerateLeadRel = 1e-12;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::string describe_roots(std::span<const std::complex<double>> roots) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i) os << ", ";
    os << format_number(roots[i].real());
    if (roots[i].imag() != 0.0) {
      os << (roots[i].imag() < 0 ? " - " : " + ") << format_number(std::abs(roots[i].imag())) << "j";
    }
  }
  os << ']';
  return os.str();
}

void require_realizable_orders(const RationalImpedance& model) {
  const auto o = model.orders();
  o.require_supported();
  if (o.numerator() != o.denominator() - 1) {
    throw ValidationError("synthesis needs numerator order M-1");
  }
}

}  // namespace

FosterCircuit::FosterCircuit(std::vector<RcBranch> branches) : branches_(std::move(branches)) {
  if (branches_.size() < 2 || branches_.size() > 3) {
    throw ValidationError("Foster circuit needs 2 or 3 branches, got " + std::to_string(branches_.size()));
  }
  for (const auto& b : branches_) {
    if (!std::isfinite(b.resistance_ohm) || !std::isfinite(b.capacitance_f)) {
      throw ValidationError("non-finite Foster element");
    }
  }
}

bool FosterCircuit::is_physical() const noexcept {
  return std::all_of(branches_.begin(), branches_.end(),
                     [](const RcBranch& b) { return b.resistance_ohm > 0.0 && b.capacitance_f > 0.0; });
}

bool FosterCircuit::is_canonical() const noexcept {
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    for (std::size_t j = i + 1; j < branches_.size(); ++j) {
      const double a = branches_[i].time_constant_s();
      const double b = branches_[j].time_constant_s();
      if (std::abs(a - b) <= kDistinctRelTol * std::max(std::abs(a), std::abs(b))) return false;
    }
  }
  return true;
}

double FosterCircuit::dc_resistance_ohm() const noexcept {
  double sum = 0.0;
  for (const auto& b : branches_) sum += b.resistance_ohm;
  return sum;
}

CauerCircuit::CauerCircuit(std::vector<double> ladder) : ladder_(std::move(ladder)) {
  if (ladder_.size() != 4 && ladder_.size() != 6) {
    throw ValidationError("Cauer ladder needs 4 or 6 elements, got " + std::to_string(ladder_.size()));
  }
  if (!all_finite(ladder_)) throw ValidationError("non-finite Cauer element");
}

bool CauerCircuit::is_physical() const noexcept {
  return std::all_of(ladder_.begin(), ladder_.end(), [](double x) { return x > 0.0; });
}

double CauerCircuit::dc_resistance_ohm() const noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < stages(); ++k) sum += resistance_ohm(k);
  return sum;
}

std::complex<double> foster_impedance(const FosterCircuit& circuit, double omega_rad_s) {
  std::complex<double> z{0.0, 0.0};
  for (const auto& b : circuit.branches()) {
    z += b.resistance_ohm / std::complex<double>(1.0, omega_rad_s * b.resistance_ohm * b.capacitance_f);
  }
  return z;
}

std::complex<double> cauer_impedance(const CauerCircuit& circuit, double omega_rad_s) {
  auto guard = [&](std::complex<double> v) {
    if (std::abs(v) < 1e-300) {
      throw PoleAtFrequency("ladder has a pole at omega = " + format_number(omega_rad_s) + " rad/s",
                            omega_rad_s);
    }
  };
  const std::size_t n = circuit.stages();
  std::complex<double> z = circuit.resistance_ohm(n - 1);
  for (std::size_t k = n; k-- > 0;) {
    guard(z);
    const std::complex<double> y = std::complex<double>(0.0, omega_rad_s * circuit.capacitance_f(k)) + 1.0 / z;
    guard(y);
    z = 1.0 / y;
    if (k > 0) z += circuit.resistance_ohm(k - 1);
  }
  return z;
}

FosterCircuit foster_synthesis(const RationalImpedance& model) {
  require_realizable_orders(model);
  const auto den = model.denominator_polynomial();
  const int m = model.orders().denominator();
  if (poly::degree(den) != m) {
    throw PoleError("denominator degree is below " + std::to_string(m) + " (leading coefficient is zero)", {});
  }
  const auto found = poly::roots(den);
  const auto& p = found.values;

  auto separation_tol = found.near_degenerate ? kCompanionClusterRelTol : kDistinctRelTol;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (std::abs(p[i] - p[j]) < separation_tol * std::max(std::abs(p[i]), std::abs(p[j]))) {
        throw NonDistinctPoles("repeated denominator roots " + describe_roots(p), p);
      }
    }
  }
  for (const auto& r : p) {
    const bool real = found.near_degenerate ? std::abs(r.imag()) <= kDistinctRelTol * std::abs(r)
                                            : r.imag() == 0.0;
    if (!real) throw ComplexPoles("complex denominator roots " + describe_roots(p), p);
  }
  for (const auto& r : p) {
    if (r.real() >= 0.0) throw UnstablePoles("denominator root with non-negative real part " + describe_roots(p), p);
  }

  const auto dden = poly::derivative(den);
  std::vector<RcBranch> branches;
  for (const auto& root : p) {
    const double pole = root.real();
    const double residue = (poly::eval(model.num_coeffs(), pole) / poly::eval(dden, pole)).real();
    if (residue == 0.0 || !std::isfinite(residue)) {
      throw PoleError("pole at " + format_number(pole) + " rad/s is cancelled by a numerator zero", p);
    }
    branches.push_back({-residue / pole, 1.0 / residue});
  }
  std::sort(branches.begin(), branches.end(),
            [](const RcBranch& a, const RcBranch& b) { return a.time_constant_s() < b.time_constant_s(); });
  return FosterCircuit(std::move(branches));
}

namespace {

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double c : a) m = std::max(m, std::abs(c));
  return m;
}

// Leading coefficient at the expected degree, checked against the rest.
double lead_at(const poly::Coeffs& a, int deg, std::size_t extracted, const char* what) {
  const double lead = a[static_cast<std::size_t>(deg)];
  if (std::abs(lead) <= kDegenerateLeadRel * max_abs(a)) {
    throw DegenerateExpansion(std::string("continued fraction stopped early: ") + what +
                                  " leading coefficient vanished after " + std::to_string(extracted) +
                                  " elements",
                              extracted);
  }
  return lead;
}

}  // namespace

CauerCircuit cauer_synthesis(const RationalImpedance& model) {
  require_realizable_orders(model);
  const int m = model.orders().denominator();
  const double b_lead = model.den_coeffs().back();
  // Normalized variable q = p / sigma keeps the polynomial coefficients O(1).
  const double sigma = b_lead != 0.0 ? std::pow(std::abs(b_lead), -1.0 / m) : model.omega_scale();

  poly::Coeffs num(model.num_coeffs());
  poly::Coeffs den = model.denominator_polynomial();
  for (std::size_t k = 0; k < num.size(); ++k) num[k] *= std::pow(sigma, static_cast<double>(k));
  for (std::size_t k = 0; k < den.size(); ++k) den[k] *= std::pow(sigma, static_cast<double>(k));

  std::vector<double> ladder;
  for (int stage = 0; stage < m; ++stage) {
    // Z = num / den, deg num = d, deg den = d + 1. Admittance den / num has a
    // pole at infinity with residue c.
    const int d = m - 1 - stage;
    const double num_lead = lead_at(num, d, ladder.size(), "impedance numerator");
    const double den_lead = lead_at(den, d + 1, ladder.size(), "impedance denominator");
    const double c = den_lead / num_lead;
    for (int k = 0; k <= d; ++k) {
      den[static_cast<std::size_t>(k + 1)] -= c * num[static_cast<std::size_t>(k)];
    }
    den.resize(static_cast<std::size_t>(d) + 1);
    ladder.push_back(c / sigma);

    // Z = num / den, equal degrees: constant at infinity r.
    const double rem_lead = lead_at(den, d, ladder.size(), "remainder");
    const double r = num[static_cast<std::size_t>(d)] / rem_lead;
    for (int k = 0; k <= d; ++k) num[static_cast<std::size_t>(k)] -= r * den[static_cast<std::size_t>(k)];
    num.resize(static_cast<std::size_t>(d));
    ladder.push_back(r);
  }
  if (!all_finite(ladder)) throw DegenerateExpansion("continued fraction produced non-finite elements", 0);
  return CauerCircuit(std::move(ladder));
}

RationalImpedance circuit_to_rational(const FosterCircuit& circuit) {
  poly::Coeffs den{1.0};
  for (const auto& b : circuit.branches()) {
    const double factor[] = {1.0, b.time_constant_s()};
    den = poly::multiply(den, factor);
  }
  poly::Coeffs num;
  const auto branches = circuit.branches();
  for (std::size_t i = 0; i < branches.size(); ++i) {
    poly::Coeffs term{branches[i].resistance_ohm};
    for (std::size_t j = 0; j < branches.size(); ++j) {
      if (j == i) continue;
      const double factor[] = {1.0, branches[j].time_constant_s()};
      term = poly::multiply(term, factor);
    }
    num = poly::add(num, term);
  }
  return RationalImpedance(std::move(num), std::vector<double>(den.begin() + 1, den.end()));
}

RationalImpedance circuit_to_rational(const CauerCircuit& circuit) {
  // Innermost out, keeping D(0) = 1: Z = num / den.
  const std::size_t n = circuit.stages();
  poly::Coeffs num{circuit.resistance_ohm(n - 1)};
  poly::Coeffs den{1.0};
  for (std::size_t k = n; k-- > 0;) {
    // 1 / (p C + den / num) = num / (p C num + den)
    poly::Coeffs shifted{0.0};
    shifted.insert(shifted.end(), num.begin(), num.end());
    den = poly::add(poly::scale(shifted, circuit.capacitance_f(k)), den);
    if (k > 0) num = poly::add(num, poly::scale(den, circuit.resistance_ohm(k - 1)));
  }
  num.resize(n);
  den.resize(n + 1);
  return RationalImpedance(std::move(num), std::vector<double>(den.begin() + 1, den.end()));
}

}  // namespace bioimp
