#include "bioimp/spectra.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "bioimp/errors.hpp"

namespace bioimp {

ImpedanceSample::ImpedanceSample(double frequency_hz, double modulus_ohm, double phase_deg)
    : frequency_hz_(frequency_hz), modulus_ohm_(modulus_ohm), phase_deg_(phase_deg) {
  if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0) {
    throw ValidationError("frequency must be positive, got " + format_number(frequency_hz));
  }
  if (!std::isfinite(modulus_ohm) || modulus_ohm < 0.0) {
    throw ValidationError("modulus must be non-negative, got " + format_number(modulus_ohm));
  }
  if (!std::isfinite(phase_deg) || phase_deg < -90.0 || phase_deg > 90.0) {
    throw ValidationError("phase outside [-90, 90] degrees: " + format_number(phase_deg));
  }
}

void validate(const MeasurementMeta& meta) {
  if (!(meta.electrode_spacing_mm > 0.0) || !(meta.current_electrode_area_cm2 > 0.0) ||
      !(meta.potential_electrode_area_cm2 > 0.0) || meta.averaging_count <= 0 ||
      !(meta.stated_error_pct > 0.0)) {
    throw ValidationError("measurement metadata must be positive");
  }
}

Spectrum::Spectrum(std::vector<ImpedanceSample> samples, std::string specimen, MeasurementMeta meta,
                   std::map<std::string, std::string> annotations)
    : samples_(std::move(samples)),
      specimen_(std::move(specimen)),
      meta_(meta),
      annotations_(std::move(annotations)) {
  if (samples_.empty()) throw ValidationError("spectrum has no samples");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (samples_[i].frequency_hz() <= samples_[i - 1].frequency_hz()) {
      throw ValidationError(
          samples_[i].frequency_hz() == samples_[i - 1].frequency_hz()
              ? "duplicate frequency " + format_number(samples_[i].frequency_hz()) + " Hz"
              : "frequencies not increasing at " + format_number(samples_[i].frequency_hz()) + " Hz");
    }
  }
  validate(meta_);
}

const ImpedanceSample* Spectrum::find(double frequency_hz) const noexcept {
  auto it = std::find_if(samples_.begin(), samples_.end(),
                         [&](const ImpedanceSample& s) { return s.frequency_hz() == frequency_hz; });
  return it == samples_.end() ? nullptr : &*it;
}

Cartesian polar_to_cartesian(Polar polar) {
  const double phi = deg_to_rad(polar.phase_deg);
  return {polar.modulus_ohm * std::cos(phi), polar.modulus_ohm * std::sin(phi)};
}

Cartesian polar_to_cartesian(const ImpedanceSample& sample) {
  return polar_to_cartesian(Polar{sample.modulus_ohm(), sample.phase_deg()});
}

Polar cartesian_to_polar(Cartesian z) {
  if (z.resistance_ohm == 0.0 && z.reactance_ohm == 0.0) return {0.0, 0.0};
  return {std::hypot(z.resistance_ohm, z.reactance_ohm),
          rad_to_deg(std::atan2(z.reactance_ohm, z.resistance_ohm))};
}

std::vector<FitPoint> fitting_view(const Spectrum& spectrum) {
  std::vector<FitPoint> view;
  for (const auto& s : spectrum.samples()) {
    if (s.below_floor()) continue;
    const auto z = polar_to_cartesian(s);
    view.push_back({s.omega_rad_s(), z.resistance_ohm, z.reactance_ohm});
  }
  if (view.size() < 2) {
    throw InsufficientData("spectrum '" + spectrum.specimen() + "' has " + std::to_string(view.size()) +
                           " usable samples, need at least 2");
  }
  return view;
}

std::string format_number(double value) {
  // Shortest round-trip text; plain decimal notation for everyday magnitudes.
  std::array<char, 64> buf{};
  const double mag = std::abs(value);
  const auto format = (value == 0.0 || (mag >= 1e-4 && mag < 1e15)) ? std::chars_format::fixed
                                                                     : std::chars_format::scientific;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, format);
  if (ec != std::errc{}) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  return std::string(buf.data(), end);
}

namespace {

constexpr std::string_view kSpectrumHeader = "frequency_hz,modulus_ohm,phase_deg";
constexpr std::string_view kSeriesHeader = "state,frequency_hz,modulus_ohm,phase_deg";

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("not a number: '" + std::string(field) + "'", line);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Header comments plus data rows, before any spectrum is assembled.
struct RawTable {
  std::string specimen;
  MeasurementMeta meta;
  std::map<std::string, std::string> annotations;
  struct Row {
    std::string state;
    double f, mod, phase;
    std::size_t line;
  };
  std::vector<Row> rows;
};

void apply_comment(RawTable& table, std::string_view body, std::size_t line) {
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) return;  // plain comment
  const std::string key(trim(body.substr(0, eq)));
  const std::string value(trim(body.substr(eq + 1)));
  auto number = [&] { return parse_double(value, line); };
  if (key == "specimen") {
    table.specimen = value;
  } else if (key == "electrode_spacing_mm") {
    table.meta.electrode_spacing_mm = number();
  } else if (key == "current_electrode_area_cm2") {
    table.meta.current_electrode_area_cm2 = number();
  } else if (key == "potential_electrode_area_cm2") {
    table.meta.potential_electrode_area_cm2 = number();
  } else if (key == "averaging_count") {
    const double n = number();
    if (n != std::floor(n)) throw ParseError("averaging_count must be an integer", line);
    table.meta.averaging_count = static_cast<int>(n);
  } else if (key == "stated_error_pct") {
    table.meta.stated_error_pct = number();
  } else if (!key.empty()) {
    table.annotations[key] = value;
  }
}

RawTable read_table(std::istream& in, bool with_state) {
  RawTable table;
  const auto header = with_state ? kSeriesHeader : kSpectrumHeader;
  const std::size_t columns = with_state ? 4 : 3;
  bool seen_header = false;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::string_view row = trim(text);
    if (line == 1 && row.starts_with("\xEF\xBB\xBF")) row.remove_prefix(3);
    if (row.empty()) continue;
    if (row.front() == '#') {
      if (!seen_header) apply_comment(table, trim(row.substr(1)), line);
      continue;
    }
    if (!seen_header) {
      if (row != header) {
        throw ParseError("expected header '" + std::string(header) + "', got '" + std::string(row) + "'",
                         line);
      }
      seen_header = true;
      continue;
    }
    const auto fields = split(row);
    if (fields.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()),
                       line);
    }
    const std::size_t off = with_state ? 1 : 0;
    RawTable::Row r{with_state ? std::string(fields[0]) : std::string{}, parse_double(fields[off], line),
                    parse_double(fields[off + 1], line), parse_double(fields[off + 2], line), line};
    if (with_state && r.state.empty()) throw ParseError("empty state label", line);
    table.rows.push_back(std::move(r));
  }
  if (!seen_header) throw ParseError("missing header", line == 0 ? 1 : line);
  if (table.rows.empty()) throw ParseError("no data rows", line);
  return table;
}

std::vector<ImpedanceSample> to_samples(const std::vector<const RawTable::Row*>& rows) {
  std::vector<ImpedanceSample> samples;
  samples.reserve(rows.size());
  for (const auto* r : rows) {
    try {
      samples.emplace_back(r->f, r->mod, r->phase);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(r->line) + ": " + e.what());
    }
  }
  return samples;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

void write_comments(std::ostream& out, const std::string& specimen, const MeasurementMeta& meta,
                    const std::map<std::string, std::string>& annotations) {
  if (!specimen.empty()) out << "# specimen=" << specimen << '\n';
  out << "# electrode_spacing_mm=" << format_number(meta.electrode_spacing_mm) << '\n'
      << "# current_electrode_area_cm2=" << format_number(meta.current_electrode_area_cm2) << '\n'
      << "# potential_electrode_area_cm2=" << format_number(meta.potential_electrode_area_cm2) << '\n'
      << "# averaging_count=" << meta.averaging_count << '\n'
      << "# stated_error_pct=" << format_number(meta.stated_error_pct) << '\n';
  for (const auto& [k, v] : annotations) out << "# " << k << '=' << v << '\n';
}

void write_row(std::ostream& out, const ImpedanceSample& s) {
  out << format_number(s.frequency_hz()) << ',' << format_number(s.modulus_ohm()) << ','
      << format_number(s.phase_deg()) << '\n';
}

}  // namespace

Spectrum parse_spectrum(std::istream& in) {
  RawTable table = read_table(in, false);
  std::vector<const RawTable::Row*> rows;
  for (const auto& r : table.rows) rows.push_back(&r);
  return Spectrum(to_samples(rows), table.specimen, table.meta, std::move(table.annotations));
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_spectrum(in);
}

void write_spectrum(std::ostream& out, const Spectrum& spectrum) {
  write_comments(out, spectrum.specimen(), spectrum.meta(), spectrum.annotations());
  out << kSpectrumHeader << '\n';
  for (const auto& s : spectrum.samples()) write_row(out, s);
}

// Per-state annotations travel as `state:key=value` comments.
std::vector<Spectrum> parse_series(std::istream& in) {
  RawTable table = read_table(in, true);
  std::vector<std::string> order;
  for (const auto& r : table.rows) {
    if (std::find(order.begin(), order.end(), r.state) == order.end()) order.push_back(r.state);
  }
  std::vector<Spectrum> series;
  for (const auto& state : order) {
    std::vector<const RawTable::Row*> rows;
    for (const auto& r : table.rows) {
      if (r.state == state) rows.push_back(&r);
    }
    std::map<std::string, std::string> annotations;
    const std::string prefix = state + ":";
    for (const auto& [k, v] : table.annotations) {
      if (k.starts_with(prefix)) annotations[k.substr(prefix.size())] = v;
    }
    series.emplace_back(to_samples(rows), state, table.meta, std::move(annotations));
  }
  return series;
}

std::vector<Spectrum> load_series(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_series(in);
}

void write_series(std::ostream& out, std::span<const Spectrum> series) {
  if (series.empty()) throw ValidationError("empty series");
  std::map<std::string, std::string> annotations;
  for (const auto& s : series) {
    if (s.specimen().empty() || s.specimen().find_first_of(",:\n") != std::string::npos) {
      throw ValidationError("series states need a plain non-empty label, got '" + s.specimen() + "'");
    }
    if (!(s.meta() == series.front().meta())) {
      throw ValidationError("series spectra must share measurement metadata");
    }
    for (const auto& [k, v] : s.annotations()) annotations[s.specimen() + ":" + k] = v;
  }
  write_comments(out, {}, series.front().meta(), annotations);
  out << kSeriesHeader << '\n';
  for (const auto& s : series) {
    for (const auto& sample : s.samples()) {
      out << s.specimen() << ',';
      write_row(out, sample);
    }
  }
}

}  // namespace bioimp
