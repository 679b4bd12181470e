#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bioimp/spectra.hpp"

namespace bioimp {

/// How the modulus of a given fruit moves under each degradation mode:
/// +1 increasing, -1 decreasing, 0 no monotone rule.
struct FruitProfile {
  std::string name;
  int dehydration_modulus_trend = 0;
  int rot_modulus_trend = 0;
};

void validate(const FruitProfile& profile);

FruitProfile apple_profile();
FruitProfile lemon_profile();
FruitProfile pear_profile();
/// Built-in profile by name (apple, lemon, pear); nullopt if unknown.
std::optional<FruitProfile> builtin_profile(std::string_view name);

// Profile file: `key=value` lines (`name`, `dehydration_modulus_trend`,
// `rot_modulus_trend`), `#` comments.
FruitProfile parse_profile(std::istream& in);
FruitProfile load_profile(const std::filesystem::path& path);
void write_profile(std::ostream& out, const FruitProfile& profile);

enum class Verdict { Fresh, Stale };
enum class Mode { Dehydration, Rot, Indeterminate };

std::string_view to_string(Verdict v);
std::string_view to_string(Mode m);

struct ClassifyOptions {
  double f_low_hz = 20e3;
  double f_high_hz = 500e3;
  double fresh_ratio = 2.0;
  double stale_ratio = 1.0;
  /// Relative modulus change treated as no change.
  double trend_deadband = 0.05;
};

constexpr double kMinUsablePhaseDeg = 0.1;

/// |phase(f_low)| / |phase(f_high)|. MissingFrequency if either frequency is
/// absent, DegeneratePhase if |phase(f_high)| <= 0.1 degrees.
double phase_ratio(const Spectrum& spectrum, double f_low_hz, double f_high_hz);

/// Trend of `to` relative to `from` with the dead-band applied.
int modulus_trend(double from_ohm, double to_ohm, double deadband);

struct StateAssessment {
  Verdict verdict = Verdict::Fresh;
  Mode mode = Mode::Indeterminate;
  double phase_ratio_start = 0.0;
  double phase_ratio_end = 0.0;
  std::vector<double> frequencies_hz;
  /// First to last spectrum, one sign per measured frequency.
  std::vector<int> modulus_trend_per_freq;
  /// Mode judged on each consecutive pair of spectra.
  std::vector<Mode> interval_modes;
  std::string evidence;
};

/// Comparative assessment of a time-ordered series (>= 2 spectra sharing one
/// frequency set, InconsistentSeries otherwise).
///
/// Mode: the first-to-last trends are matched against the profile (all
/// frequencies must agree with one of its non-zero signs). When that is
/// inconclusive, the most recent interval with a conclusive match decides.
/// Verdict: Fresh when the final phase ratio >= fresh_ratio, Stale when
/// <= stale_ratio; in between, Stale if the modulus trends show a degradation
/// mode and Fresh otherwise.
StateAssessment assess(std::span<const Spectrum> series, const FruitProfile& profile,
                       const ClassifyOptions& options = {});

/// Single-spectrum reading of the ratio alone. Advisory only: the criteria are
/// comparative. nullopt between the thresholds.
std::optional<Verdict> advisory_verdict(const Spectrum& spectrum, const ClassifyOptions& options = {});

}  // namespace bioimp
