#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "bioimp/io.hpp"
#include "bioimp/spectra.hpp"

namespace bioimp::fixtures {

// Embedded measurement tables (20/100/500 kHz) and fitted element values.
//
// Ids:
//   tableK                      series of three states (K = 1..7)
//   tableK.<state>              one spectrum; states are 25pct/45pct/90pct for
//                               table1 and fresh/day3/day6 otherwise
//   table8.<fruit>.<cut>.<state>.scheme_<x>
//                               circuit parameters; scheme_a and scheme_b are
//                               the 3- and 2-branch Foster forms, scheme_c and
//                               scheme_d the 3- and 2-stage Cauer ladders

struct CircuitFixture {
  AnyCircuit circuit;
  /// Id of the spectrum this circuit was fitted to.
  std::string measured_id;
};

struct Fixture {
  std::string id;
  std::string provenance;
  std::variant<std::vector<Spectrum>, Spectrum, CircuitFixture> payload;
  /// Rows whose source values are known to be inconsistent.
  bool suspect = false;
};

const std::vector<Fixture>& all();
const Fixture* find(std::string_view id);
std::vector<std::string> ids();

/// Spectrum or series fixtures as CSV, circuit fixtures as circuit documents.
/// Throws InputError on an unknown id.
void dump(std::ostream& out, std::string_view id);

/// Accessors that throw InputError when the id is unknown or of another kind.
const std::vector<Spectrum>& series(std::string_view id);
const Spectrum& spectrum(std::string_view id);
const CircuitFixture& circuit(std::string_view id);

/// The measurement frequencies of tables 1 to 7, Hz.
inline constexpr double kTableFrequenciesHz[] = {20e3, 100e3, 500e3};

}  // namespace bioimp::fixtures
