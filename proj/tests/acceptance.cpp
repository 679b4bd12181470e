// Acceptance checks. One line per criterion: `criterion N: PASS|FAIL  summary`,
// followed by indented detail lines. `--criterion N` runs a single one; the
// exit status is non-zero when any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bioimp/circuits.hpp"
#include "bioimp/classify.hpp"
#include "bioimp/errors.hpp"
#include "bioimp/fixtures.hpp"
#include "bioimp/ratfit.hpp"
#include "bioimp/response.hpp"
#include "oracles.hpp"

using namespace bioimp;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void fail(const std::string& why) {
    pass = false;
    details.push_back(why);
  }
  void note(const std::string& what) { details.push_back(what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const char* kStates[] = {"fresh", "day3", "day6"};

std::vector<std::string> three_frequency_ids() {
  std::vector<std::string> out;
  for (const char* s : {"25pct", "45pct", "90pct"}) out.push_back(std::string("table1.") + s);
  for (const char* t : {"table2", "table3", "table5", "table7"}) {
    for (const char* s : kStates) out.push_back(std::string(t) + "." + s);
  }
  return out;
}

double component_rel(double got, double want, double scale) {
  return std::abs(got - want) / (want != 0.0 ? std::abs(want) : scale);
}

double coeff_rel(const RationalImpedance& a, const RationalImpedance& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.num_coeffs().size(); ++i) {
    worst = std::max(worst, oracle::rel_err(a.num_coeffs()[i], b.num_coeffs()[i]));
  }
  for (std::size_t i = 0; i < a.den_coeffs().size(); ++i) {
    worst = std::max(worst, oracle::rel_err(a.den_coeffs()[i], b.den_coeffs()[i]));
  }
  return worst;
}

std::vector<FitPoint> sample(const FosterCircuit& c, std::span<const double> freqs_hz) {
  std::vector<FitPoint> out;
  for (double f : freqs_hz) {
    const double w = 2 * kPi * f;
    const auto z = foster_impedance(c, w);
    out.push_back({w, z.real(), z.imag()});
  }
  return out;
}

// Physical network with time constants spanning three decades.
FosterCircuit three_decade_foster(std::mt19937_64& rng, int branches) {
  std::uniform_real_distribution<double> start(-7.5, -5.5), mid(0.1, 2.9), log_r(1.0, 4.0);
  const double t0 = start(rng);
  std::vector<double> log_tau{t0, t0 + 3.0};
  if (branches == 3) log_tau.push_back(t0 + mid(rng));
  std::vector<RcBranch> b;
  for (double lt : log_tau) {
    const double r = std::pow(10.0, log_r(rng));
    b.push_back({r, std::pow(10.0, lt) / r});
  }
  return FosterCircuit(std::move(b));
}

// --- 1 -------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  int fitted = 0;
  double worst = 0, slowest_ms = 0;
  for (const auto& id : three_frequency_ids()) {
    const auto& s = fixtures::spectrum(id);
    const auto view = fitting_view(s);
    if (view.size() < 3) {
      o.note(fmt("%s: %zu usable samples after removing below-floor rows, not a 3-frequency fixture", id.c_str(),
                 view.size()));
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    FitResult fit = fit_rational(view, ModelOrders(2, 3));
    std::vector<std::complex<double>> z;
    for (const auto& p : view) z.push_back(evaluate(fit.model, p.omega_rad_s));
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    slowest_ms = std::max(slowest_ms, ms);
    ++fitted;
    for (std::size_t k = 0; k < view.size(); ++k) {
      const double mag = std::hypot(view[k].resistance_ohm, view[k].reactance_ohm);
      const double er = component_rel(z[k].real(), view[k].resistance_ohm, mag);
      const double ex = component_rel(z[k].imag(), view[k].reactance_ohm, mag);
      worst = std::max({worst, er, ex});
      if (er > 1e-6 || ex > 1e-6) o.fail(fmt("%s at %g Hz: R rel %.3g, X rel %.3g", id.c_str(),
                                              view[k].omega_rad_s / (2 * kPi), er, ex));
    }
    if (ms >= 10.0) o.fail(fmt("%s: %.3f ms", id.c_str(), ms));
  }
  if (fitted == 0) o.fail("no fixture fitted");
  o.summary = fmt("%d fixtures, worst R/X relative error %.2e (limit 1e-6), slowest %.3f ms (limit 10 ms)", fitted,
                  worst, slowest_ms);
  return o;
}

// --- 2 -------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  int rows = 0;
  for (const char* state : kStates) {
    const std::string cid = std::string("table8.apple.longitudinal.") + state + ".scheme_a";
    const auto* fx = fixtures::find(cid);
    if (fx->suspect) {
      o.note(cid + ": suspect, excluded");
      continue;
    }
    const auto& cf = fixtures::circuit(cid);
    const auto& measured = fixtures::spectrum(cf.measured_id);
    const bool fresh = std::strcmp(state, "fresh") == 0;
    const double mod_tol = fresh ? 0.05 : 0.10, ph_tol = fresh ? 1.5 : 3.0;
    for (const auto& m : measured.samples()) {
      const auto z = impedance(to_source(cf.circuit), m.omega_rad_s());
      const auto p = cartesian_to_polar({z.real(), z.imag()});
      const double dm = p.modulus_ohm / m.modulus_ohm() - 1;
      const double dp = p.phase_deg - m.phase_deg();
      ++rows;
      const std::string line = fmt("%s %g Hz: model %.1f ohm / %.2f deg, measured %g / %g (%+.1f%%, %+.2f deg; limit %g%% / %g deg)",
                                   state, m.frequency_hz(), p.modulus_ohm, p.phase_deg, m.modulus_ohm(),
                                   m.phase_deg(), 100 * dm, dp, 100 * mod_tol, ph_tol);
      if (std::abs(dm) > mod_tol || std::abs(dp) > ph_tol) {
        o.fail(line);
      } else {
        o.note(line);
      }
    }
  }
  o.summary = fmt("%d rows of the 3-branch Foster fit against the measured longitudinal apple", rows);
  return o;
}

// --- 3 and 5 share the model pool ------------------------------------------

struct PoolModel {
  std::string label;
  RationalImpedance model;
};

// Every fitted (2,3) model: the measured 3-frequency fixtures, plus spectra
// generated from the tabulated Foster networks and from random physical
// networks, each interpolated at the measurement frequencies.
std::vector<PoolModel> fitted_pool(Outcome& o) {
  std::vector<PoolModel> pool;
  for (const auto& id : three_frequency_ids()) {
    const auto view = fitting_view(fixtures::spectrum(id));
    if (view.size() < 3) continue;
    pool.push_back({id, fit_rational(view, ModelOrders(2, 3)).model});
  }
  for (const auto& id : fixtures::ids()) {
    if (id.rfind("table8.", 0) != 0 || id.find("scheme_a") == std::string::npos) continue;
    if (fixtures::find(id)->suspect) continue;
    const auto& c = std::get<FosterCircuit>(fixtures::circuit(id).circuit);
    pool.push_back({id + " (sampled)", fit_rational(sample(c, fixtures::kTableFrequenciesHz), ModelOrders(2, 3)).model});
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto c = oracle::random_physical_foster(rng, 3);
    pool.push_back({fmt("random network %d", i), fit_rational(sample(c, fixtures::kTableFrequenciesHz), ModelOrders(2, 3)).model});
  }
  o.note(fmt("pool: %zu fitted (2,3) models", pool.size()));
  return pool;
}

Outcome criterion3() {
  Outcome o;
  const auto pool = fitted_pool(o);
  int compared = 0, rejected_measured = 0;
  double worst = 0;
  std::vector<double> grid;
  for (double f : oracle::log_grid(1e3, 1e7, 50)) grid.push_back(2 * kPi * f);
  for (const auto& [label, model] : pool) {
    FosterCircuit foster({{1, 1}, {1, 1}});
    try {
      foster = foster_synthesis(model);
    } catch (const PoleError& e) {
      if (label.rfind("table", 0) == 0 && label.find("sampled") == std::string::npos) {
        ++rejected_measured;
        o.note(label + ": Foster synthesis not possible, " + e.what());
      } else {
        o.fail(label + ": " + e.what());
      }
      continue;
    }
    const auto cauer = cauer_synthesis(model);
    ++compared;
    for (double w : grid) {
      const double e = oracle::rel_err(cauer_impedance(cauer, w), foster_impedance(foster, w));
      worst = std::max(worst, e);
      if (e > 1e-9) o.fail(fmt("%s at %g Hz: %.3g", label.c_str(), w / (2 * kPi), e));
    }
  }
  if (compared == 0) o.fail("no model had a Foster realization");
  o.summary = fmt("%d models compared on 50 points, worst relative |dZ| %.2e (limit 1e-9); %d fixture fits have no "
                  "Foster realization",
                  compared, worst, rejected_measured);
  return o;
}

// --- 4 -------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(4);
  double worst_f = 0, worst_c = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const auto source = three_decade_foster(rng, i % 4 == 3 ? 2 : 3);
    const auto model = circuit_to_rational(source);
    try {
      const double ef = coeff_rel(circuit_to_rational(foster_synthesis(model)), model);
      const double ec = coeff_rel(circuit_to_rational(cauer_synthesis(model)), model);
      worst_f = std::max(worst_f, ef);
      worst_c = std::max(worst_c, ec);
      if (ef > 1e-9 || ec > 1e-9) o.fail(fmt("model %d: foster %.3g, cauer %.3g", i, ef, ec));
    } catch (const Error& e) {
      o.fail(fmt("model %d: %s", i, e.what()));
    }
  }
  o.summary = fmt("%d random physical models, worst coefficient error foster %.2e, cauer %.2e (limit 1e-9)", n,
                  worst_f, worst_c);
  return o;
}

// --- 5 -------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  auto pool = fitted_pool(o);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    pool.push_back({fmt("network model %d", i), circuit_to_rational(three_decade_foster(rng, i % 2 ? 2 : 3))});
  }
  int synthesized = 0;
  double worst = 0;
  for (const auto& [label, model] : pool) {
    FosterCircuit foster({{1, 1}, {1, 1}});
    try {
      foster = foster_synthesis(model);
    } catch (const PoleError&) {
      continue;
    }
    ++synthesized;
    const double e = oracle::rel_err(foster.dc_resistance_ohm(), model.num_coeffs()[0]);
    worst = std::max(worst, e);
    if (e > 1e-9) o.fail(fmt("%s: sum R %.10g vs A0 %.10g", label.c_str(), foster.dc_resistance_ohm(),
                             model.num_coeffs()[0]));
  }
  if (synthesized == 0) o.fail("nothing synthesized");
  o.summary = fmt("%d Foster circuits, worst |sum R - A0| relative %.2e (limit 1e-9)", synthesized, worst);
  return o;
}

// --- 6 -------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  const auto apple = apple_profile();
  const auto t1 = assess(fixtures::series("table1"), apple);
  const auto t2 = assess(fixtures::series("table2"), apple);
  const auto t3 = assess(fixtures::series("table3"), apple);
  auto expect = [&](bool ok, const std::string& what) { ok ? o.note(what) : o.fail(what); };
  expect(t1.mode == Mode::Rot, "table1 mode " + std::string(to_string(t1.mode)) + " (want Rot)");
  for (const auto& [name, a] : {std::pair{"table2", &t2}, std::pair{"table3", &t3}}) {
    expect(a->mode == Mode::Dehydration, std::string(name) + " mode " + std::string(to_string(a->mode)) +
                                              " (want Dehydration)");
    expect(!a->interval_modes.empty() && a->interval_modes.back() == Mode::Dehydration,
           std::string(name) + " final interval " + std::string(to_string(a->interval_modes.back())) +
               " (want Dehydration)");
    expect(a->verdict == Verdict::Stale,
           std::string(name) + " verdict " + std::string(to_string(a->verdict)) + " (want Stale)");
  }
  // Arithmetic on the measured phases.
  const auto& s3 = fixtures::series("table3");
  const double want_start = std::abs(s3.front().find(20e3)->phase_deg() / s3.front().find(500e3)->phase_deg());
  const double want_end = std::abs(s3.back().find(20e3)->phase_deg() / s3.back().find(500e3)->phase_deg());
  expect(std::abs(t3.phase_ratio_start - want_start) <= 1e-12 && std::abs(t3.phase_ratio_start - 6.76) < 0.005,
         fmt("table3 start ratio %.4f (want 6.76)", t3.phase_ratio_start));
  expect(std::abs(t3.phase_ratio_end - want_end) <= 1e-12 && std::abs(t3.phase_ratio_end - 0.70) < 0.005,
         fmt("table3 end ratio %.4f (want 0.70)", t3.phase_ratio_end));
  o.summary = "rot and dehydration narratives on the apple series";
  return o;
}

// --- 7 -------------------------------------------------------------------

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> factor(0.01, 100), noise(-0.02, 0.02), lf(3.0, 7.0);
  const int cases = 1000;
  int failures = 0;
  double worst_scale = 0, worst_freq = 0, worst_conj = 0;
  const auto grid = log_grid(kDefaultSweepMinHz, kDefaultSweepMaxHz, kDefaultSweepPoints);
  auto record = [&](int i, const std::string& what) {
    if (++failures <= 20) o.fail(fmt("case %d: ", i) + what);
  };
  for (int i = 0; i < cases; ++i) {
    const auto circuit = oracle::random_physical_foster(rng, i % 2 ? 2 : 3);

    // Three log-spaced frequencies and a perturbed copy of the network's
    // response, so the fitted model is generic rather than realizable.
    std::vector<double> freqs{std::pow(10.0, lf(rng))};
    freqs.push_back(freqs[0] * 5);
    freqs.push_back(freqs[0] * 25);
    auto view = sample(circuit, freqs);
    for (auto& p : view) {
      p.resistance_ohm *= 1 + noise(rng);
      p.reactance_ohm *= 1 + noise(rng);
    }
    FitResult base{RationalImpedance({0.0}, {}), {}, {}, 0, {}};
    try {
      base = fit_rational(view, ModelOrders(2, 3));
    } catch (const Error& e) {
      record(i, e.what());
      continue;
    }

    // Scale equivariance.
    const double c = factor(rng);
    auto scaled = view;
    for (auto& p : scaled) {
      p.resistance_ohm *= c;
      p.reactance_ohm *= c;
    }
    const auto ms = fit_rational(scaled, ModelOrders(2, 3)).model;
    std::vector<double> num = base.model.num_coeffs();
    for (auto& a : num) a *= c;
    const double es = coeff_rel(ms, RationalImpedance(num, base.model.den_coeffs()));
    worst_scale = std::max(worst_scale, es);
    if (es > 1e-9) record(i, fmt("scale equivariance %.3g", es));

    // Frequency-scale covariance.
    const double s = factor(rng);
    auto stretched = view;
    for (auto& p : stretched) p.omega_rad_s *= s;
    const auto mf = fit_rational(stretched, ModelOrders(2, 3)).model;
    std::vector<double> fn = mf.num_coeffs(), fd = mf.den_coeffs();
    for (std::size_t n = 0; n < fn.size(); ++n) fn[n] *= std::pow(s, n);
    for (std::size_t m = 0; m < fd.size(); ++m) fd[m] *= std::pow(s, m + 1);
    const double ef = coeff_rel(RationalImpedance(fn, fd), base.model);
    worst_freq = std::max(worst_freq, ef);
    if (ef > 1e-9) record(i, fmt("frequency covariance %.3g", ef));

    // Conjugate symmetry.
    for (const auto& p : view) {
      const double e = oracle::rel_err(evaluate(base.model, -p.omega_rad_s), std::conj(evaluate(base.model, p.omega_rad_s)));
      worst_conj = std::max(worst_conj, e);
      if (e > 1e-12) record(i, fmt("conjugate symmetry %.3g", e));
    }

    // Passivity and monotone modulus of the physical network on the sweep grid.
    double prev = std::numeric_limits<double>::infinity();
    for (double f : grid) {
      const auto z = foster_impedance(circuit, 2 * kPi * f);
      if (!(z.real() > 0) || z.imag() > 0) {
        record(i, fmt("not passive at %g Hz", f));
        break;
      }
      const double mag = std::abs(z);
      if (mag > prev * (1 + 1e-12)) {
        record(i, fmt("|Z| rises at %g Hz", f));
        break;
      }
      prev = mag;
    }
  }
  o.summary = fmt("%d cases, %d failures; worst scale %.2e, frequency %.2e (limit 1e-9), conjugate %.2e (limit 1e-12)",
                  cases, failures, worst_scale, worst_freq, worst_conj);
  return o;
}

// --- 8 -------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  int fits = 0;
  double worst_mod = 0;
  for (const char* t : {"table5", "table7"}) {
    for (const char* st : kStates) {
      const std::string id = std::string(t) + "." + st;
      const auto& s = fixtures::spectrum(id);
      const auto view = fitting_view(s);
      const auto fit = fit_rational(view, ModelOrders(1, 2));
      ++fits;

      // Local optimality: no single +-1% coefficient nudge lowers the residual.
      const double r0 = equation_residual_norm2(fit.model, view);
      const auto& a = fit.model.num_coeffs();
      const auto& b = fit.model.den_coeffs();
      for (std::size_t k = 0; k < a.size() + b.size(); ++k) {
        for (double d : {0.99, 1.01}) {
          auto na = a;
          auto nb = b;
          if (k < a.size()) {
            na[k] *= d;
          } else {
            nb[k - a.size()] *= d;
          }
          const double r = equation_residual_norm2(RationalImpedance(na, nb, fit.model.omega_scale()), view);
          if (r < r0 * (1 - 1e-12)) o.fail(fmt("%s: coefficient %zu x%.2f lowers residual %.6g -> %.6g", id.c_str(), k, d, r0, r));
        }
      }

      // Modulus agreement at every measured frequency, including samples the
      // fit could not use.
      std::string line = id + ":";
      bool within = true;
      for (const auto& m : s.samples()) {
        const double got = std::abs(evaluate(fit.model, m.omega_rad_s()));
        const double rel = m.modulus_ohm() > 0 ? std::abs(got / m.modulus_ohm() - 1) : 0.0;
        if (m.below_floor()) {
          line += fmt(" %g Hz below floor;", m.frequency_hz());
          continue;
        }
        worst_mod = std::max(worst_mod, rel);
        line += fmt(" %g Hz %.2f%%;", m.frequency_hz(), 100 * rel);
        within = within && rel <= 0.15;
      }
      within ? o.note(line) : o.fail(line + " exceeds 15%");
    }
  }
  o.summary = fmt("%d (1,2) fits, worst modulus deviation %.2f%% (limit 15%%)", fits, 100 * worst_mod);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                        criterion5, criterion6, criterion7, criterion8};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
    return 2;
  }
  bool all_pass = true;
  for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
    if (only != 0 && n != only) continue;
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
      o.fail(std::string("unexpected exception: ") + e.what());
    }
    std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.summary.c_str());
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
