#include "bioimp/classify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bioimp/errors.hpp"

namespace bioimp {

void validate(const FruitProfile& profile) {
  auto ok = [](int t) { return t >= -1 && t <= 1; };
  if (profile.name.empty()) throw ValidationError("profile needs a name");
  if (!ok(profile.dehydration_modulus_trend) || !ok(profile.rot_modulus_trend)) {
    throw ValidationError("profile trends must be -1, 0 or +1");
  }
}

FruitProfile apple_profile() { return {"apple", +1, -1}; }
// Lemon: modulus falls under dehydration; no rot rule is known.
FruitProfile lemon_profile() { return {"lemon", -1, 0}; }
// Pear: the modulus passes through an extremum, so neither trend is monotone.
FruitProfile pear_profile() { return {"pear", 0, 0}; }

std::optional<FruitProfile> builtin_profile(std::string_view name) {
  if (name == "apple") return apple_profile();
  if (name == "lemon") return lemon_profile();
  if (name == "pear") return pear_profile();
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

int parse_sign(std::string_view v, std::size_t line) {
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || out < -1 || out > 1) {
    throw ParseError("trend must be -1, 0 or +1", line);
  }
  return out;
}

}  // namespace

FruitProfile parse_profile(std::istream& in) {
  FruitProfile p;
  bool has_dehydration = false, has_rot = false;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto row = trim(text);
    if (row.empty() || row.front() == '#') continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line);
    const auto key = trim(row.substr(0, eq));
    const auto value = trim(row.substr(eq + 1));
    if (key == "name") {
      p.name = value;
    } else if (key == "dehydration_modulus_trend") {
      p.dehydration_modulus_trend = parse_sign(value, line);
      has_dehydration = true;
    } else if (key == "rot_modulus_trend") {
      p.rot_modulus_trend = parse_sign(value, line);
      has_rot = true;
    } else {
      throw ParseError("unknown profile key '" + std::string(key) + "'", line);
    }
  }
  if (p.name.empty() || !has_dehydration || !has_rot) {
    throw ParseError("profile needs name, dehydration_modulus_trend and rot_modulus_trend", line);
  }
  validate(p);
  return p;
}

FruitProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return parse_profile(in);
}

void write_profile(std::ostream& out, const FruitProfile& profile) {
  auto sign = [](int t) { return t > 0 ? std::string("+1") : std::to_string(t); };
  out << "name=" << profile.name << '\n'
      << "dehydration_modulus_trend=" << sign(profile.dehydration_modulus_trend) << '\n'
      << "rot_modulus_trend=" << sign(profile.rot_modulus_trend) << '\n';
}

std::string_view to_string(Verdict v) { return v == Verdict::Fresh ? "Fresh" : "Stale"; }

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Dehydration: return "Dehydration";
    case Mode::Rot: return "Rot";
    default: return "Indeterminate";
  }
}

double phase_ratio(const Spectrum& spectrum, double f_low_hz, double f_high_hz) {
  const auto* low = spectrum.find(f_low_hz);
  if (!low) throw MissingFrequency("no sample at " + format_number(f_low_hz) + " Hz", f_low_hz);
  const auto* high = spectrum.find(f_high_hz);
  if (!high) throw MissingFrequency("no sample at " + format_number(f_high_hz) + " Hz", f_high_hz);
  if (std::abs(high->phase_deg()) <= kMinUsablePhaseDeg) {
    throw DegeneratePhase("phase at " + format_number(f_high_hz) + " Hz is " + format_number(high->phase_deg()) +
                              " deg; ratio undefined",
                          high->phase_deg());
  }
  return std::abs(low->phase_deg()) / std::abs(high->phase_deg());
}

int modulus_trend(double from_ohm, double to_ohm, double deadband) {
  // A zero reading sits below the instrument floor: only the direction across
  // the floor is known.
  if (from_ohm == 0.0) return to_ohm > 0.0 ? +1 : 0;
  if (to_ohm == 0.0) return -1;
  const double rel = (to_ohm - from_ohm) / from_ohm;
  if (std::abs(rel) < deadband) return 0;
  return rel > 0.0 ? +1 : -1;
}

namespace {

std::vector<double> frequencies_of(const Spectrum& s) {
  std::vector<double> f;
  for (const auto& x : s.samples()) f.push_back(x.frequency_hz());
  return f;
}

std::vector<int> trends_between(const Spectrum& from, const Spectrum& to, double deadband) {
  std::vector<int> out;
  for (std::size_t i = 0; i < from.size(); ++i) {
    out.push_back(modulus_trend(from.samples()[i].modulus_ohm(), to.samples()[i].modulus_ohm(), deadband));
  }
  return out;
}

Mode match_profile(const std::vector<int>& trends, const FruitProfile& profile) {
  auto all_equal = [&](int sign) {
    return sign != 0 && std::all_of(trends.begin(), trends.end(), [&](int t) { return t == sign; });
  };
  if (all_equal(profile.dehydration_modulus_trend)) return Mode::Dehydration;
  if (all_equal(profile.rot_modulus_trend)) return Mode::Rot;
  return Mode::Indeterminate;
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string label(const Spectrum& s, std::size_t index) {
  return s.specimen().empty() ? "#" + std::to_string(index) : s.specimen();
}

}  // namespace

StateAssessment assess(std::span<const Spectrum> series, const FruitProfile& profile, const ClassifyOptions& options) {
  validate(profile);
  if (series.size() < 2) throw InsufficientData("assessment needs a series of at least 2 spectra");
  const auto freqs = frequencies_of(series.front());
  for (const auto& s : series) {
    if (frequencies_of(s) != freqs) {
      throw InconsistentSeries("spectrum '" + s.specimen() + "' does not share the series frequency set");
    }
  }

  StateAssessment a;
  a.frequencies_hz = freqs;
  a.phase_ratio_start = phase_ratio(series.front(), options.f_low_hz, options.f_high_hz);
  a.phase_ratio_end = phase_ratio(series.back(), options.f_low_hz, options.f_high_hz);
  a.modulus_trend_per_freq = trends_between(series.front(), series.back(), options.trend_deadband);
  for (std::size_t i = 1; i < series.size(); ++i) {
    a.interval_modes.push_back(
        match_profile(trends_between(series[i - 1], series[i], options.trend_deadband), profile));
  }

  std::ostringstream ev;
  ev << "profile " << profile.name << " (dehydration " << profile.dehydration_modulus_trend << ", rot "
     << profile.rot_modulus_trend << ")\n";
  ev << "phase ratio |phi(" << format_number(options.f_low_hz) << ")|/|phi(" << format_number(options.f_high_hz)
     << ")|: " << fmt(a.phase_ratio_start) << " -> " << fmt(a.phase_ratio_end) << '\n';
  ev << "modulus trend first->last:";
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const double from = series.front().samples()[i].modulus_ohm();
    const double to = series.back().samples()[i].modulus_ohm();
    ev << ' ' << format_number(freqs[i]) << "Hz " << format_number(from) << "->" << format_number(to) << " ("
       << (a.modulus_trend_per_freq[i] > 0 ? "+" : a.modulus_trend_per_freq[i] < 0 ? "-" : "0") << ')';
  }
  ev << '\n';

  a.mode = match_profile(a.modulus_trend_per_freq, profile);
  if (a.mode != Mode::Indeterminate) {
    ev << "mode " << to_string(a.mode) << " from first->last trends\n";
  } else {
    for (std::size_t i = a.interval_modes.size(); i-- > 0;) {
      if (a.interval_modes[i] != Mode::Indeterminate) {
        a.mode = a.interval_modes[i];
        ev << "first->last trends inconclusive; mode " << to_string(a.mode) << " from interval "
           << label(series[i], i) << "->" << label(series[i + 1], i + 1) << '\n';
        break;
      }
    }
    if (a.mode == Mode::Indeterminate) ev << "no interval matches the profile; mode Indeterminate\n";
  }

  if (a.phase_ratio_end >= options.fresh_ratio) {
    a.verdict = Verdict::Fresh;
    ev << "verdict Fresh: final ratio >= " << fmt(options.fresh_ratio) << '\n';
  } else if (a.phase_ratio_end <= options.stale_ratio) {
    a.verdict = Verdict::Stale;
    ev << "verdict Stale: final ratio <= " << fmt(options.stale_ratio) << '\n';
  } else {
    a.verdict = a.mode == Mode::Indeterminate ? Verdict::Fresh : Verdict::Stale;
    ev << "final ratio between thresholds; verdict " << to_string(a.verdict) << " from trend evidence\n";
  }

  // The two-fold phase changes the criterion rests on, reported as measured.
  const auto* low0 = series.front().find(options.f_low_hz);
  const auto* low1 = series.back().find(options.f_low_hz);
  const auto* high0 = series.front().find(options.f_high_hz);
  const auto* high1 = series.back().find(options.f_high_hz);
  if (low1->phase_deg() != 0.0 && high0->phase_deg() != 0.0) {
    const double low_change = std::abs(low0->phase_deg()) / std::abs(low1->phase_deg());
    const double high_change = std::abs(high1->phase_deg()) / std::abs(high0->phase_deg());
    ev << "low-frequency phase first/last " << fmt(low_change) << (low_change >= 2.0 ? "" : " (below 2)")
       << ", high-frequency phase last/first " << fmt(high_change) << (high_change >= 2.0 ? "" : " (below 2)")
       << '\n';
  }
  a.evidence = ev.str();
  return a;
}

std::optional<Verdict> advisory_verdict(const Spectrum& spectrum, const ClassifyOptions& options) {
  const double rho = phase_ratio(spectrum, options.f_low_hz, options.f_high_hz);
  if (rho >= options.fresh_ratio) return Verdict::Fresh;
  if (rho <= options.stale_ratio) return Verdict::Stale;
  return std::nullopt;
}

}  // namespace bioimp
