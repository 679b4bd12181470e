#pragma once

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bioimp/circuits.hpp"
#include "bioimp/ratfit.hpp"
#include "bioimp/spectra.hpp"

namespace bioimp {

using ImpedanceSource = std::variant<RationalImpedance, FosterCircuit, CauerCircuit>;

std::complex<double> impedance(const ImpedanceSource& source, double omega_rad_s);

struct ResponseRow {
  double frequency_hz;
  double modulus_ohm;
  double phase_deg;
  double resistance_ohm;
  double reactance_ohm;
};

struct FrequencyResponse {
  std::vector<ResponseRow> rows;
  std::string source;
};

constexpr double kDefaultSweepMinHz = 1e3;
constexpr double kDefaultSweepMaxHz = 1e7;
constexpr int kDefaultSweepPoints = 200;

/// Log-spaced grid with both endpoints, inclusive.
std::vector<double> log_grid(double f_min_hz, double f_max_hz, int points);

/// Requires 0 < f_min < f_max and points >= 2 (ValidationError). A pole on the
/// grid surfaces as PoleAtFrequency naming the offending frequency.
FrequencyResponse sweep(const ImpedanceSource& source, double f_min_hz, double f_max_hz, int points,
                        std::string label = {});

struct PhasePortraitPoint {
  std::string label;
  double phase_low_deg;
  double phase_high_deg;
};

/// One point per spectrum, in series order. Frequencies must match exactly;
/// MissingFrequency otherwise.
std::vector<PhasePortraitPoint> phase_portrait(std::span<const Spectrum> series, double f_low_hz,
                                               double f_high_hz);

void write_response_csv(std::ostream& out, const FrequencyResponse& response);

/// Two stacked panels: |Z| on log-log axes and phase on a semilog axis. One
/// polyline per response. Output depends only on the inputs.
void write_response_svg(std::ostream& out, std::span<const FrequencyResponse> responses,
                        const std::string& title = {});

/// Single panel, phase at f_high against phase at f_low, points joined in
/// order.
void write_portrait_svg(std::ostream& out, std::span<const PhasePortraitPoint> points,
                        const std::string& title = {});

}  // namespace bioimp
