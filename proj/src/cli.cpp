#include "bioimp/cli.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "bioimp/circuits.hpp"
#include "bioimp/classify.hpp"
#include "bioimp/errors.hpp"
#include "bioimp/fixtures.hpp"
#include "bioimp/io.hpp"
#include "bioimp/ratfit.hpp"
#include "bioimp/response.hpp"
#include "bioimp/spectra.hpp"

namespace bioimp::cli {

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool quiet = false;
  std::ostream& info() { return quiet ? null_stream() : out; }
  static std::ostream& null_stream() {
    static std::ostream null(nullptr);
    return null;
  }
};

std::ofstream create(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  return f;
}

ModelOrders parse_orders(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValidationError("orders must look like N,M (e.g. 2,3)");
  try {
    std::size_t used_n = 0, used_m = 0;
    const int n = std::stoi(text.substr(0, comma), &used_n);
    const int m = std::stoi(text.substr(comma + 1), &used_m);
    if (used_n != comma || used_m != text.size() - comma - 1) throw std::invalid_argument("trailing");
    ModelOrders orders(n, m);
    orders.require_supported();
    return orders;
  } catch (const std::logic_error&) {
    throw ValidationError("orders must look like N,M (e.g. 2,3), got '" + text + "'");
  }
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

Spectrum spectrum_input(const std::string& path, const std::string& fixture_id) {
  if (!fixture_id.empty()) return fixtures::spectrum(fixture_id);
  if (path.empty()) throw InputError("give --input or --fixture");
  return load_spectrum(path);
}

ImpedanceSource source_input(const std::string& path, const std::string& fixture_id, std::string& label) {
  if (!fixture_id.empty()) {
    const auto* f = fixtures::find(fixture_id);
    if (!f) throw InputError("unknown fixture '" + fixture_id + "'");
    const auto* c = std::get_if<fixtures::CircuitFixture>(&f->payload);
    if (!c) throw InputError("fixture '" + fixture_id + "' is not a circuit");
    label = fixture_id;
    return to_source(c->circuit);
  }
  if (path.empty()) throw InputError("give --input or --fixture");
  label = std::filesystem::path(path).filename().string();
  return load_source(path);
}

void report_roots(std::ostream& err, const PoleError& e) {
  err << "denominator roots (rad/s):";
  for (const auto& r : e.roots()) {
    err << ' ' << format_number(r.real());
    if (r.imag() != 0.0) err << (r.imag() < 0 ? "-" : "+") << format_number(std::abs(r.imag())) << 'j';
  }
  err << '\n';
}

// Maps library errors to exit codes.
int guarded(Context& ctx, const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const PoleError& e) {
    ctx.err << "error: " << e.what() << '\n';
    report_roots(ctx.err, e);
    return kNumericalError;
  } catch (const InputError& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Rational impedance fitting, RC network synthesis and freshness assessment"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("-q,--quiet", ctx.quiet, "Suppress non-error output");
  std::function<int()> action;

  // fit
  std::string fit_input, fit_fixture, fit_orders = "2,3", fit_out;
  auto* fit = app.add_subcommand("fit", "Fit a rational impedance model to a spectrum");
  auto* fit_input_opt = fit->add_option("--input", fit_input, "Spectrum CSV");
  fit->add_option("--fixture", fit_fixture, "Embedded spectrum fixture id instead of --input")->excludes(fit_input_opt);
  fit->add_option("--orders", fit_orders, "Numerator,denominator orders: 1,2 or 2,3")->capture_default_str();
  fit->add_option("--out", fit_out, "Model file to write");
  fit->callback([&] {
    action = [&] {
      return guarded(ctx, [&] {
        const auto orders = parse_orders(fit_orders);
        const auto spectrum = spectrum_input(fit_input, fit_fixture);
        const auto result = fit_rational(spectrum, orders);
        if (!fit_out.empty()) {
          auto f = create(fit_out);
          write_model(f, result.model, result.equation_residuals);
        } else {
          write_model(ctx.info(), result.model, result.equation_residuals);
        }
        auto& o = ctx.info();
        o << "orders " << orders.numerator() << "," << orders.denominator() << ", " << result.view.size()
          << " usable frequencies, condition estimate " << fmt(result.condition_estimate, 3) << '\n';
        for (std::size_t k = 0; k < result.view.size(); ++k) {
          o << "  f=" << format_number(result.view[k].omega_rad_s / (2.0 * kPi)) << " Hz  residual "
            << fmt(result.equation_residuals[k], 3) << " ohm  |Zfit-Z| " << fmt(result.fit_errors[k], 3)
            << " ohm\n";
        }
        o << "is_positive " << (result.model.is_positive() ? "true" : "false") << '\n';
      });
    };
  });

  // synth
  std::string synth_model, synth_topology = "foster", synth_out;
  auto* synth = app.add_subcommand("synth", "Synthesize a Foster or Cauer circuit from a model");
  synth->add_option("--model", synth_model, "Model file")->required();
  synth->add_option("--topology", synth_topology, "foster or cauer")
      ->check(CLI::IsMember({"foster", "cauer"}))
      ->capture_default_str();
  synth->add_option("--out", synth_out, "Circuit file to write");
  synth->callback([&] {
    action = [&] {
      return guarded(ctx, [&] {
        std::ifstream in(synth_model);
        if (!in) throw InputError("cannot open '" + synth_model + "'");
        const auto doc = read_model(in);
        const AnyCircuit circuit = synth_topology == "foster" ? AnyCircuit(foster_synthesis(doc.model))
                                                              : AnyCircuit(cauer_synthesis(doc.model));
        const auto source = std::filesystem::path(synth_model).filename().string();
        if (!synth_out.empty()) {
          auto f = create(synth_out);
          write_circuit(f, circuit, source);
        } else {
          write_circuit(ctx.info(), circuit, source);
        }
        const bool physical = std::visit([](const auto& c) { return c.is_physical(); }, circuit);
        ctx.info() << synth_topology << " circuit, is_physical " << (physical ? "true" : "false") << '\n';
      });
    };
  });

  // eval
  std::string eval_input, eval_fixture;
  std::vector<double> eval_freqs;
  auto* ev = app.add_subcommand("eval", "Evaluate a model or circuit at given frequencies");
  auto* eval_input_opt = ev->add_option("--input", eval_input, "Model or circuit file");
  ev->add_option("--fixture", eval_fixture, "Embedded circuit fixture id instead of --input")->excludes(eval_input_opt);
  ev->add_option("--freq", eval_freqs, "Frequencies in Hz")->required()->delimiter(',');
  ev->callback([&] {
    action = [&] {
      return guarded(ctx, [&] {
        std::string label;
        const auto source = source_input(eval_input, eval_fixture, label);
        FrequencyResponse r;
        r.source = label;
        for (double f : eval_freqs) {
          if (!(f > 0.0)) throw ValidationError("frequencies must be positive");
          const auto z = impedance(source, 2.0 * kPi * f);
          const auto p = cartesian_to_polar({z.real(), z.imag()});
          r.rows.push_back({f, p.modulus_ohm, p.phase_deg, z.real(), z.imag()});
        }
        write_response_csv(ctx.out, r);
      });
    };
  });

  // sweep
  std::string sweep_input, sweep_fixture, sweep_out, sweep_svg;
  double sweep_fmin = kDefaultSweepMinHz, sweep_fmax = kDefaultSweepMaxHz;
  int sweep_points = kDefaultSweepPoints;
  auto* sw = app.add_subcommand("sweep", "Tabulate |Z|, phase, R and X over a log frequency grid");
  auto* sweep_input_opt = sw->add_option("--input", sweep_input, "Model or circuit file");
  sw->add_option("--fixture", sweep_fixture, "Embedded circuit fixture id instead of --input")->excludes(sweep_input_opt);
  sw->add_option("--fmin", sweep_fmin, "Lowest frequency, Hz")->capture_default_str();
  sw->add_option("--fmax", sweep_fmax, "Highest frequency, Hz")->capture_default_str();
  sw->add_option("--points", sweep_points, "Grid points")->capture_default_str();
  sw->add_option("--out", sweep_out, "Response CSV to write (stdout when neither --out nor --svg)");
  sw->add_option("--svg", sweep_svg, "Two-panel SVG to write");
  sw->callback([&] {
    action = [&] {
      return guarded(ctx, [&] {
        std::string label;
        const auto source = source_input(sweep_input, sweep_fixture, label);
        const auto response = sweep(source, sweep_fmin, sweep_fmax, sweep_points, label);
        if (!sweep_out.empty()) {
          auto f = create(sweep_out);
          write_response_csv(f, response);
        }
        if (!sweep_svg.empty()) {
          auto f = create(sweep_svg);
          write_response_svg(f, std::span(&response, 1), label);
        }
        if (sweep_out.empty() && sweep_svg.empty()) write_response_csv(ctx.out, response);
      });
    };
  });

  // classify
  std::vector<std::string> cls_files;
  std::string cls_series, cls_profile = "apple", cls_portrait;
  ClassifyOptions cls_opts;
  auto* cls = app.add_subcommand("classify", "Assess freshness and degradation mode of a time series");
  auto* cls_files_opt = cls->add_option("spectra", cls_files, "Spectrum CSVs in time order");
  cls->add_option("--series", cls_series, "Series CSV or series fixture id instead of separate files")
      ->excludes(cls_files_opt);
  cls->add_option("--profile", cls_profile, "apple, lemon, pear or a profile file")->capture_default_str();
  cls->add_option("--f-low", cls_opts.f_low_hz, "Low frequency, Hz")->capture_default_str();
  cls->add_option("--f-high", cls_opts.f_high_hz, "High frequency, Hz")->capture_default_str();
  cls->add_option("--fresh-ratio", cls_opts.fresh_ratio, "Phase ratio at or above which a specimen is fresh")
      ->capture_default_str();
  cls->add_option("--stale-ratio", cls_opts.stale_ratio, "Phase ratio at or below which a specimen is stale")
      ->capture_default_str();
  cls->add_option("--portrait-svg", cls_portrait, "Phase portrait SVG to write");
  cls->callback([&] {
    action = [&] {
      return guarded(ctx, [&] {
        std::vector<Spectrum> series;
        if (!cls_series.empty()) {
          if (fixtures::find(cls_series)) {
            series = fixtures::series(cls_series);
          } else {
            series = load_series(cls_series);
          }
        }
        for (const auto& f : cls_files) series.push_back(load_spectrum(f));
        if (series.size() < 2) throw InsufficientData("classify needs at least two spectra in time order");
        const auto builtin = builtin_profile(cls_profile);
        const FruitProfile profile = builtin ? *builtin : load_profile(cls_profile);
        const auto a = assess(series, profile, cls_opts);
        auto& o = ctx.info();
        o << "verdict " << to_string(a.verdict) << '\n'
          << "mode " << to_string(a.mode) << '\n'
          << "phase_ratio_start " << fmt(a.phase_ratio_start, 4) << '\n'
          << "phase_ratio_end " << fmt(a.phase_ratio_end, 4) << '\n'
          << "modulus_trend";
        for (int t : a.modulus_trend_per_freq) o << ' ' << (t > 0 ? "+1" : std::to_string(t));
        o << "\n--\n" << a.evidence;
        if (!cls_portrait.empty()) {
          const auto points = phase_portrait(series, cls_opts.f_low_hz, cls_opts.f_high_hz);
          auto f = create(cls_portrait);
          write_portrait_svg(f, points, profile.name);
        }
      });
    };
  });

  // fixtures
  bool fx_list = false;
  std::string fx_dump;
  auto* fx = app.add_subcommand("fixtures", "List or dump the embedded measurement tables");
  fx->add_flag("--list", fx_list, "List fixture ids");
  fx->add_option("--dump", fx_dump, "Print one fixture (CSV or circuit document)");
  fx->callback([&] {
    action = [&] {
      return guarded(ctx, [&] {
        if (fx_list == !fx_dump.empty()) throw InputError("give exactly one of --list or --dump");
        if (fx_list) {
          for (const auto& f : fixtures::all()) {
            ctx.out << f.id << (f.suspect ? "  [suspect]" : "") << "  " << f.provenance << '\n';
          }
        } else {
          fixtures::dump(ctx.out, fx_dump);
        }
      });
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help arrives here too, with a zero exit code.
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  if (!action) return kInputError;
  return action();
}

}  // namespace bioimp::cli
