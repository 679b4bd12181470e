#include "bioimp/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bioimp/errors.hpp"

namespace bioimp {

std::complex<double> impedance(const ImpedanceSource& source, double omega_rad_s) {
  return std::visit(
      [&](const auto& s) -> std::complex<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RationalImpedance>) {
          return evaluate(s, omega_rad_s);
        } else if constexpr (std::is_same_v<T, FosterCircuit>) {
          return foster_impedance(s, omega_rad_s);
        } else {
          return cauer_impedance(s, omega_rad_s);
        }
      },
      source);
}

std::vector<double> log_grid(double f_min_hz, double f_max_hz, int points) {
  if (!(f_min_hz > 0.0) || !(f_max_hz > f_min_hz) || !std::isfinite(f_max_hz)) {
    throw ValidationError("sweep needs 0 < f_min < f_max, got " + format_number(f_min_hz) + " and " +
                          format_number(f_max_hz));
  }
  if (points < 2) throw ValidationError("sweep needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double lo = std::log10(f_min_hz);
  const double step = (std::log10(f_max_hz) - lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = std::pow(10.0, lo + step * i);
  grid.front() = f_min_hz;
  grid.back() = f_max_hz;
  return grid;
}

FrequencyResponse sweep(const ImpedanceSource& source, double f_min_hz, double f_max_hz, int points,
                        std::string label) {
  FrequencyResponse out;
  out.source = std::move(label);
  for (double f : log_grid(f_min_hz, f_max_hz, points)) {
    std::complex<double> z;
    try {
      z = impedance(source, 2.0 * kPi * f);
    } catch (const PoleAtFrequency& e) {
      throw PoleAtFrequency("pole at " + format_number(f) + " Hz", e.omega_rad_s());
    }
    const auto polar = cartesian_to_polar({z.real(), z.imag()});
    out.rows.push_back({f, polar.modulus_ohm, polar.phase_deg, z.real(), z.imag()});
  }
  return out;
}

std::vector<PhasePortraitPoint> phase_portrait(std::span<const Spectrum> series, double f_low_hz,
                                               double f_high_hz) {
  std::vector<PhasePortraitPoint> out;
  for (const auto& s : series) {
    const auto* low = s.find(f_low_hz);
    if (!low) throw MissingFrequency("'" + s.specimen() + "' has no sample at " + format_number(f_low_hz) + " Hz", f_low_hz);
    const auto* high = s.find(f_high_hz);
    if (!high) throw MissingFrequency("'" + s.specimen() + "' has no sample at " + format_number(f_high_hz) + " Hz", f_high_hz);
    out.push_back({s.specimen(), low->phase_deg(), high->phase_deg()});
  }
  return out;
}

void write_response_csv(std::ostream& out, const FrequencyResponse& response) {
  out << "frequency_hz,modulus_ohm,phase_deg,resistance_ohm,reactance_ohm\n";
  for (const auto& r : response.rows) {
    out << format_number(r.frequency_hz) << ',' << format_number(r.modulus_ohm) << ','
        << format_number(r.phase_deg) << ',' << format_number(r.resistance_ohm) << ','
        << format_number(r.reactance_ohm) << '\n';
  }
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

struct Panel {
  double x, y, w, h;
  double x_lo, x_hi, y_lo, y_hi;
  double px(double v) const { return x + (v - x_lo) / (x_hi - x_lo) * w; }
  double py(double v) const { return y + h - (v - y_lo) / (y_hi - y_lo) * h; }
};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void frame(std::ostream& out, const Panel& p, const std::string& xlabel, const std::string& ylabel) {
  out << "<rect x=\"" << fixed(p.x) << "\" y=\"" << fixed(p.y) << "\" width=\"" << fixed(p.w)
      << "\" height=\"" << fixed(p.h) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  out << "<text x=\"" << fixed(p.x + p.w / 2) << "\" y=\"" << fixed(p.y + p.h + 34)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(xlabel) << "</text>\n";
  out << "<text x=\"" << fixed(p.x - 48) << "\" y=\"" << fixed(p.y + p.h / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " << fixed(p.x - 48) << ' '
      << fixed(p.y + p.h / 2) << ")\">" << escape(ylabel) << "</text>\n";
}

void tick(std::ostream& out, const Panel& p, bool x_axis, double pos, const std::string& label) {
  if (x_axis) {
    const double x = p.px(pos);
    out << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(p.y + p.h) << "\" x2=\"" << fixed(x) << "\" y2=\""
        << fixed(p.y + p.h + 5) << "\" stroke=\"#000\"/>\n";
    out << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(p.y + p.h + 18)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << label << "</text>\n";
  } else {
    const double y = p.py(pos);
    out << "<line x1=\"" << fixed(p.x - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(p.x) << "\" y2=\""
        << fixed(y) << "\" stroke=\"#000\"/>\n";
    out << "<text x=\"" << fixed(p.x - 8) << "\" y=\"" << fixed(y + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << label << "</text>\n";
  }
}

std::string decade_label(int e) { return "1e" + std::to_string(e); }

void polyline(std::ostream& out, const std::vector<std::pair<double, double>>& pts, const char* color,
              bool markers) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << (i ? " " : "") << fixed(pts[i].first) << ',' << fixed(pts[i].second);
  }
  out << "\"/>\n";
  if (markers) {
    for (const auto& [x, y] : pts) {
      out << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
  }
}

}  // namespace

void write_response_svg(std::ostream& out, std::span<const FrequencyResponse> responses, const std::string& title) {
  double f_lo = std::numeric_limits<double>::infinity(), f_hi = 0.0;
  double m_lo = std::numeric_limits<double>::infinity(), m_hi = 0.0;
  for (const auto& r : responses) {
    for (const auto& row : r.rows) {
      f_lo = std::min(f_lo, row.frequency_hz);
      f_hi = std::max(f_hi, row.frequency_hz);
      if (row.modulus_ohm > 0.0) {
        m_lo = std::min(m_lo, row.modulus_ohm);
        m_hi = std::max(m_hi, row.modulus_ohm);
      }
    }
  }
  if (!(f_hi > 0.0)) {
    f_lo = 1e3;
    f_hi = 1e7;
  }
  if (!(m_hi > 0.0)) {
    m_lo = 1.0;
    m_hi = 10.0;
  }
  const int fx0 = static_cast<int>(std::floor(std::log10(f_lo)));
  const int fx1 = std::max(fx0 + 1, static_cast<int>(std::ceil(std::log10(f_hi))));
  const int my0 = static_cast<int>(std::floor(std::log10(m_lo)));
  const int my1 = std::max(my0 + 1, static_cast<int>(std::ceil(std::log10(m_hi))));

  const Panel mag{80, 50, 560, 220, double(fx0), double(fx1), double(my0), double(my1)};
  const Panel phase{80, 340, 560, 220, double(fx0), double(fx1), -90.0, 0.0};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"640\" viewBox=\"0 0 720 640\">\n";
  out << "<rect width=\"720\" height=\"640\" fill=\"#fff\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"360\" y=\"28\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  }
  frame(out, mag, "frequency, Hz", "|Z|, ohm");
  frame(out, phase, "frequency, Hz", "phase, deg");
  for (int e = fx0; e <= fx1; ++e) {
    tick(out, mag, true, e, decade_label(e));
    tick(out, phase, true, e, decade_label(e));
  }
  for (int e = my0; e <= my1; ++e) tick(out, mag, false, e, decade_label(e));
  for (int d = -90; d <= 0; d += 15) tick(out, phase, false, d, std::to_string(d));

  for (std::size_t i = 0; i < responses.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::vector<std::pair<double, double>> mag_pts, ph_pts;
    for (const auto& row : responses[i].rows) {
      const double lx = std::log10(row.frequency_hz);
      if (row.modulus_ohm > 0.0) mag_pts.emplace_back(mag.px(lx), mag.py(std::log10(row.modulus_ohm)));
      ph_pts.emplace_back(phase.px(lx), phase.py(std::clamp(row.phase_deg, -90.0, 0.0)));
    }
    polyline(out, mag_pts, color, false);
    polyline(out, ph_pts, color, false);
    if (!responses[i].source.empty()) {
      out << "<text x=\"" << fixed(mag.x + mag.w - 8) << "\" y=\"" << fixed(mag.y + 16 + 14.0 * double(i))
          << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << escape(responses[i].source)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_portrait_svg(std::ostream& out, std::span<const PhasePortraitPoint> points, const std::string& title) {
  const Panel p{80, 50, 400, 400, -90.0, 0.0, -90.0, 0.0};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"540\" height=\"520\" viewBox=\"0 0 540 520\">\n";
  out << "<rect width=\"540\" height=\"520\" fill=\"#fff\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"280\" y=\"28\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  }
  frame(out, p, "phase at low frequency, deg", "phase at high frequency, deg");
  for (int d = -90; d <= 0; d += 15) {
    tick(out, p, true, d, std::to_string(d));
    tick(out, p, false, d, std::to_string(d));
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& pt : points) {
    pts.emplace_back(p.px(std::clamp(pt.phase_low_deg, -90.0, 0.0)), p.py(std::clamp(pt.phase_high_deg, -90.0, 0.0)));
  }
  polyline(out, pts, kPalette[0], true);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << "<text x=\"" << fixed(pts[i].first + 6) << "\" y=\"" << fixed(pts[i].second - 6)
        << "\" font-size=\"11\">" << escape(points[i].label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace bioimp
