#include "bioimp/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>

#include "bioimp/errors.hpp"

namespace bioimp::fixtures {

namespace {

struct Row {
  const char* state;
  std::array<double, 3> modulus_ohm;
  std::array<double, 3> phase_deg;
};

struct Table {
  int number;
  const char* description;
  std::array<Row, 3> rows;
};

// Values as printed; decimal commas rewritten as points.
const Table kTables[] = {
    {1, "apple, transverse cut, area affected by rot",
     {{{"25pct", {716, 542, 375}, {-18.3, -16.6, -8.4}},
       {"45pct", {645, 306, 229}, {-24.9, -20.7, -6.9}},
       {"90pct", {287, 462, 411}, {-63.7, -75.5, -46.0}}}}},
    {2, "apple, longitudinal cut",
     {{{"fresh", {670, 344, 245}, {-43.3, -25.3, -10.8}},
       {"day3", {974, 659, 388}, {-43.1, -26.4, -16.5}},
       {"day6", {6950, 2240, 758}, {-31.6, -38.4, -55.2}}}}},
    {3, "apple, transverse cut",
     {{{"fresh", {739, 260, 112}, {-48, -31.1, -7.1}},
       {"day3", {974, 595, 334}, {-47.2, -30.8, -12.6}},
       {"day6", {5950, 1955, 731}, {-24.1, -20.5, -34.6}}}}},
    {4, "pear, longitudinal cut",
     {{{"fresh", {148, 0, 0}, {0, -20.4, -15.2}},
       {"day3", {403, 50, 0}, {-38.3, -30.4, -10.5}},
       {"day6", {346, 0, 0}, {-27.6, -25, -4.5}}}}},
    {5, "pear, transverse cut",
     {{{"fresh", {885, 323, 144}, {-47.5, -33.8, -10.8}},
       {"day3", {226, 69, 14}, {-43.6, -30.2, -5.3}},
       {"day6", {1312, 1072, 516}, {-11.0, -35.9, -41.0}}}}},
    {6, "lemon, longitudinal cut",
     {{{"fresh", {503, 3, 0}, {-45.1, -32.6, -7.4}},
       {"day3", {553, 68, 0}, {-47.9, -43.1, -6.9}},
       {"day6", {235, 99, 0}, {-9.0, -21.7, -19.8}}}}},
    {7, "lemon, transverse cut",
     {{{"fresh", {974, 263, 158}, {-37.4, -39.1, -24.5}},
       {"day3", {308, 97, 74}, {-35.5, -28.4, -7.4}},
       {"day6", {68, 63, 0}, {-22.9, -15.6, -55.0}}}}},
};

// Element values in nF and kOhm, ordered C1, R1, C2, R2 (, C3, R3).
struct CircuitRow {
  const char* fruit_cut;
  const char* state;
  char scheme;
  int measured_table;
  std::array<double, 6> values;
  int count;
  bool suspect;
};

const CircuitRow kCircuitRows[] = {
    {"apple.longitudinal", "fresh", 'a', 2, {0.00214, 0.237, 11.169, 0.102, 16.029, 1.464}, 6, false},
    {"apple.longitudinal", "fresh", 'c', 2, {0.00214, 0.237, 6.584, 0.283, 11.145, 1.282}, 6, false},
    {"apple.longitudinal", "day3", 'a', 2, {0.01495, 0.375, 3.306, 0.304, 12.638, 10.659}, 6, false},
    {"apple.longitudinal", "day3", 'c', 2, {0.01498, 0.379, 2.629, 0.479, 10.186, 10.479}, 6, false},
    {"apple.longitudinal", "day6", 'a', 2, {0.04076, 0.285, 0.526, 1.980, 3.436, 4.113}, 6, false},
    {"apple.longitudinal", "day6", 'c', 2, {0.03742, 0.338, 0.427, 2.557, 3.549, 3.484}, 6, false},
    {"apple.transverse", "fresh", 'a', 3, {0.00098, 0.210, 170.15, 0.010, 11.412, 1.317}, 6, false},
    {"apple.transverse", "fresh", 'c', 3, {0.00098, 0.210, 12.231, 2.644, 0.618, 1.338}, 6, false},
    {"apple.transverse", "day3", 'a', 3, {0.0101, 0.373, 6.707, 0.243, 8.999, 3.528}, 6, false},
    {"apple.transverse", "day3", 'c', 3, {0.0101, 0.375, 3.844, 0.711, 6.166, 3.057}, 6, false},
    {"apple.transverse", "day6", 'a', 3, {0.00065, 0.603, 0.403, 1.365, 5.231, 2.419}, 6, false},
    {"apple.transverse", "day6", 'c', 3, {0.00065, 0.605, 0.374, 1.576, 5.344, 2.206}, 6, false},
    {"apple.rot", "25pct", 'a', 1, {0.00234, 0.374, 6.634, 0.195, 29.751, 0.439}, 6, false},
    {"apple.rot", "25pct", 'c', 1, {0.00234, 0.375, 5.428, 0.286, 31.323, 0.348}, 6, false},
    {"apple.rot", "45pct", 'a', 1, {0.00974, 0.266, 25.373, 0.0156, 13.662, 0.531}, 6, false},
    {"apple.rot", "45pct", 'c', 1, {0.00973, 0.266, 8.916, 0.116, 6.456, 0.430}, 6, false},
    {"apple.rot", "90pct", 'a', 1, {1.591, 0.247, 2.150, 0.255, 23.991, 0.647}, 6, true},
    {"apple.rot", "90pct", 'c', 1, {4.880, 0.0558, 54.495, 0.0050, 76.729, 0.588}, 6, true},
    {"lemon.transverse", "fresh", 'b', 7, {0.5478, 0.1523, 11.339, 0.7676}, 4, false},
    {"lemon.transverse", "fresh", 'd', 7, {0.5226, 0.1676, 11.038, 0.7526}, 4, false},
    {"lemon.transverse", "day3", 'b', 7, {0.0279, 0.0780, 32.980, 0.2849}, 4, false},
    {"lemon.transverse", "day3", 'd', 7, {0.0279, 0.0782, 32.968, 0.2848}, 4, false},
    {"lemon.transverse", "day6", 'b', 7, {6.931, 0.0636, 341.02, 4.140}, 4, false},
    {"lemon.transverse", "day6", 'd', 7, {6.793, 0.0662, 334.44, 4.137}, 4, false},
    {"pear.transverse", "fresh", 'b', 5, {0.0655, 0.2395, 9.373, 1.5446}, 4, false},
    {"pear.transverse", "fresh", 'd', 5, {0.0651, 0.2429, 9.3283, 1.5413}, 4, false},
    {"pear.transverse", "day3", 'b', 5, {0.0536, 0.0477, 78.563, 0.2139}, 4, false},
    {"pear.transverse", "day3", 'd', 5, {0.0536, 0.0478, 78.533, 0.2138}, 4, false},
    {"pear.transverse", "day6", 'b', 5, {0.3166, 0.4253, 1.6725, 1.2351}, 4, false},
    {"pear.transverse", "day6", 'd', 5, {0.2662, 0.5943, 1.6492, 1.0662}, 4, false},
};

Spectrum make_spectrum(const Row& row, std::map<std::string, std::string> annotations) {
  std::vector<ImpedanceSample> samples;
  for (std::size_t i = 0; i < 3; ++i) {
    samples.emplace_back(kTableFrequenciesHz[i], row.modulus_ohm[i], row.phase_deg[i]);
  }
  return Spectrum(std::move(samples), row.state, MeasurementMeta{}, std::move(annotations));
}

AnyCircuit make_circuit(const CircuitRow& row) {
  // Rescaling in binary can land one ulp off the decimal value; go through
  // text so the SI value is the double nearest the printed number.
  auto rescale = [](double v, double factor) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v * factor);
    return std::strtod(buf, nullptr);
  };
  auto farads = [&](double nf) { return rescale(nf, 1e-9); };
  auto ohms = [&](double kohm) { return rescale(kohm, 1e3); };
  const bool foster = row.scheme == 'a' || row.scheme == 'b';
  if (foster) {
    std::vector<RcBranch> branches;
    for (int i = 0; i < row.count; i += 2) {
      branches.push_back({ohms(row.values[static_cast<std::size_t>(i + 1)]),
                          farads(row.values[static_cast<std::size_t>(i)])});
    }
    return FosterCircuit(std::move(branches));
  }
  std::vector<double> ladder;
  for (int i = 0; i < row.count; i += 2) {
    ladder.push_back(farads(row.values[static_cast<std::size_t>(i)]));
    ladder.push_back(ohms(row.values[static_cast<std::size_t>(i + 1)]));
  }
  return CauerCircuit(std::move(ladder));
}

std::vector<Fixture> build() {
  std::vector<Fixture> out;
  for (const auto& t : kTables) {
    const std::string table_id = "table" + std::to_string(t.number);
    std::vector<Spectrum> series;
    std::vector<Fixture> rows;
    for (const auto& r : t.rows) {
      std::map<std::string, std::string> annotations;
      bool suspect = false;
      if (t.number == 4 && std::string_view(r.state) == "fresh") {
        // Printed as "148 0 0 0 -20,4 -15,2": four modulus-like values for
        // three columns. Kept verbatim, not reinterpreted.
        annotations["suspect"] = "row appears column-misaligned in the source table; stored verbatim";
        suspect = true;
      }
      series.push_back(make_spectrum(r, annotations));
      rows.push_back({table_id + "." + r.state, std::string(t.description) + ", " + r.state, series.back(), suspect});
    }
    out.push_back({table_id, t.description, std::move(series), false});
    for (auto& f : rows) out.push_back(std::move(f));
  }
  for (const auto& c : kCircuitRows) {
    const std::string id = std::string("table8.") + c.fruit_cut + "." + c.state + ".scheme_" + c.scheme;
    const std::string measured = "table" + std::to_string(c.measured_table) + "." + c.state;
    out.push_back({id, std::string("fitted elements for ") + measured + (c.suspect ? " (suspect)" : ""),
                   CircuitFixture{make_circuit(c), measured}, c.suspect});
  }
  return out;
}

const Fixture& require(std::string_view id) {
  const auto* f = find(id);
  if (!f) throw InputError("unknown fixture '" + std::string(id) + "'");
  return *f;
}

}  // namespace

const std::vector<Fixture>& all() {
  static const std::vector<Fixture> fixtures = build();
  return fixtures;
}

const Fixture* find(std::string_view id) {
  const auto& a = all();
  auto it = std::find_if(a.begin(), a.end(), [&](const Fixture& f) { return f.id == id; });
  return it == a.end() ? nullptr : &*it;
}

std::vector<std::string> ids() {
  std::vector<std::string> out;
  for (const auto& f : all()) out.push_back(f.id);
  return out;
}

void dump(std::ostream& out, std::string_view id) {
  const auto& f = require(id);
  std::visit(
      [&](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, std::vector<Spectrum>>) {
          write_series(out, payload);
        } else if constexpr (std::is_same_v<T, Spectrum>) {
          write_spectrum(out, payload);
        } else {
          write_circuit(out, payload.circuit, payload.measured_id);
        }
      },
      f.payload);
}

const std::vector<Spectrum>& series(std::string_view id) {
  const auto* p = std::get_if<std::vector<Spectrum>>(&require(id).payload);
  if (!p) throw InputError("fixture '" + std::string(id) + "' is not a series");
  return *p;
}

const Spectrum& spectrum(std::string_view id) {
  const auto* p = std::get_if<Spectrum>(&require(id).payload);
  if (!p) throw InputError("fixture '" + std::string(id) + "' is not a spectrum");
  return *p;
}

const CircuitFixture& circuit(std::string_view id) {
  const auto* p = std::get_if<CircuitFixture>(&require(id).payload);
  if (!p) throw InputError("fixture '" + std::string(id) + "' is not a circuit");
  return *p;
}

}  // namespace bioimp::fixtures
