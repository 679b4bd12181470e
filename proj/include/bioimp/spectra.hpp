#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace bioimp {

/// Real and imaginary parts of an impedance, ohms.
struct Cartesian {
  double resistance_ohm = 0.0;
  double reactance_ohm = 0.0;
};

/// Modulus in ohms and phase in degrees.
struct Polar {
  double modulus_ohm = 0.0;
  double phase_deg = 0.0;
};

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// One reading from the meter. A zero modulus means the instrument reported
/// nothing above its floor; such samples are kept but flagged.
class ImpedanceSample {
 public:
  /// Throws ValidationError when frequency <= 0, modulus < 0 or the phase is
  /// outside [-90, 90] degrees.
  ImpedanceSample(double frequency_hz, double modulus_ohm, double phase_deg);

  double frequency_hz() const noexcept { return frequency_hz_; }
  double modulus_ohm() const noexcept { return modulus_ohm_; }
  double phase_deg() const noexcept { return phase_deg_; }
  bool below_floor() const noexcept { return modulus_ohm_ == 0.0; }
  double omega_rad_s() const noexcept { return 2.0 * kPi * frequency_hz_; }

  friend bool operator==(const ImpedanceSample&, const ImpedanceSample&) = default;

 private:
  double frequency_hz_;
  double modulus_ohm_;
  double phase_deg_;
};

/// Recording conditions. Stored for provenance, not used in any computation.
struct MeasurementMeta {
  double electrode_spacing_mm = 10.0;
  double current_electrode_area_cm2 = 1.76;
  double potential_electrode_area_cm2 = 23.35;
  int averaging_count = 256;
  double stated_error_pct = 5.0;

  friend bool operator==(const MeasurementMeta&, const MeasurementMeta&) = default;
};

/// Throws ValidationError unless every field is positive.
void validate(const MeasurementMeta& meta);

/// An ordered multi-frequency measurement of one specimen in one state.
class Spectrum {
 public:
  /// Validates: at least one sample, strictly increasing frequencies.
  Spectrum(std::vector<ImpedanceSample> samples, std::string specimen = {},
           MeasurementMeta meta = {}, std::map<std::string, std::string> annotations = {});

  std::span<const ImpedanceSample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const std::string& specimen() const noexcept { return specimen_; }
  const MeasurementMeta& meta() const noexcept { return meta_; }
  /// Free-form `# key=value` comments that are not metadata fields
  /// (e.g. `suspect`).
  const std::map<std::string, std::string>& annotations() const noexcept { return annotations_; }

  /// Sample at exactly this frequency, or nullptr.
  const ImpedanceSample* find(double frequency_hz) const noexcept;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<ImpedanceSample> samples_;
  std::string specimen_;
  MeasurementMeta meta_;
  std::map<std::string, std::string> annotations_;
};

Cartesian polar_to_cartesian(const ImpedanceSample& sample);
Cartesian polar_to_cartesian(Polar polar);
/// Phase of the zero vector is defined as 0.
Polar cartesian_to_polar(Cartesian z);

/// One row of the linear fitting problem: angular frequency and the measured
/// real/imaginary parts.
struct FitPoint {
  double omega_rad_s;
  double resistance_ohm;
  double reactance_ohm;
};

/// Usable samples as (omega, R, X), below-floor readings dropped, frequency
/// order kept. Throws InsufficientData when fewer than two remain.
std::vector<FitPoint> fitting_view(const Spectrum& spectrum);

// Spectrum CSV: optional `# key=value` comments, then the header
// `frequency_hz,modulus_ohm,phase_deg`, then one sample per row.
Spectrum parse_spectrum(std::istream& in);
Spectrum load_spectrum(const std::filesystem::path& path);
void write_spectrum(std::ostream& out, const Spectrum& spectrum);

// Series CSV: the same, with a leading `state` column naming the spectrum
// each row belongs to. States appear in series order.
std::vector<Spectrum> parse_series(std::istream& in);
std::vector<Spectrum> load_series(const std::filesystem::path& path);
void write_series(std::ostream& out, std::span<const Spectrum> series);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace bioimp
