#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "bioimp/ratfit.hpp"

namespace bioimp {

/// Parallel R||C branch, ohms and farads.
struct RcBranch {
  double resistance_ohm;
  double capacitance_f;
  double time_constant_s() const noexcept { return resistance_ohm * capacitance_f; }
  friend bool operator==(const RcBranch&, const RcBranch&) = default;
};

/// Series connection of 2 or 3 parallel RC branches:
/// Z = sum R_i / (1 + j w R_i C_i).
class FosterCircuit {
 public:
  explicit FosterCircuit(std::vector<RcBranch> branches);

  std::span<const RcBranch> branches() const noexcept { return branches_; }
  std::size_t size() const noexcept { return branches_.size(); }
  /// Every R_i > 0 and C_i > 0.
  bool is_physical() const noexcept;
  /// Time constants pairwise distinct to 1e-9 relative.
  bool is_canonical() const noexcept;
  double dc_resistance_ohm() const noexcept;

 private:
  std::vector<RcBranch> branches_;
};

/// Ladder of alternating shunt capacitors and series resistors,
/// [C1, R1, C2, R2 (, C3, R3)]:
/// Z = 1 / (j w C1 + 1 / (R1 + 1 / (j w C2 + ...))).
class CauerCircuit {
 public:
  explicit CauerCircuit(std::vector<double> ladder);

  std::span<const double> ladder() const noexcept { return ladder_; }
  std::size_t stages() const noexcept { return ladder_.size() / 2; }
  double capacitance_f(std::size_t stage) const { return ladder_.at(2 * stage); }
  double resistance_ohm(std::size_t stage) const { return ladder_.at(2 * stage + 1); }
  bool is_physical() const noexcept;
  double dc_resistance_ohm() const noexcept;

 private:
  std::vector<double> ladder_;
};

std::complex<double> foster_impedance(const FosterCircuit& circuit, double omega_rad_s);

/// Evaluated innermost-out. Throws PoleAtFrequency when an intermediate
/// denominator falls below 1e-300 in magnitude.
std::complex<double> cauer_impedance(const CauerCircuit& circuit, double omega_rad_s);

/// Partial-fraction realization. Poles p_i of the denominator, residues
/// r_i = N(p_i) / D'(p_i), then C_i = 1 / r_i and R_i = -r_i / p_i. Branches
/// come back sorted by ascending time constant.
///
/// Requires orders (M-1, M) with M in {2, 3} (ValidationError otherwise).
/// Throws ComplexPoles, UnstablePoles (a pole with non-negative real part) or
/// NonDistinctPoles (separation below 1e-9 relative); each carries the roots.
FosterCircuit foster_synthesis(const RationalImpedance& model);

/// Continued-fraction expansion about infinity: alternately removes the pole
/// at infinity of the admittance (shunt C) and the constant at infinity of the
/// remaining impedance (series R). Works on the frequency-normalized
/// polynomials. Throws DegenerateExpansion when a leading coefficient drops
/// below 1e-12 of its polynomial's largest coefficient.
CauerCircuit cauer_synthesis(const RationalImpedance& model);

RationalImpedance circuit_to_rational(const FosterCircuit& circuit);
RationalImpedance circuit_to_rational(const CauerCircuit& circuit);

}  // namespace bioimp
