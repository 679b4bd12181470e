#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bioimp/circuits.hpp"
#include "bioimp/ratfit.hpp"
#include "bioimp/response.hpp"

namespace bioimp {

// Model and circuit documents are JSON with a `format_version` field.
//
// Model:
//   {"format_version": 1, "kind": "rational_impedance",
//    "orders": {"N": 2, "M": 3}, "num_coeffs": [A0, ...], "den_coeffs": [B1, ...],
//    "omega_scale": w0, "fit_residuals": [...], "is_positive": false}
//
// Circuit:
//   {"format_version": 1, "kind": "circuit", "topology": "foster" | "cauer",
//    "elements": [{"name": "R1", "value": 237.0, "unit": "ohm"},
//                 {"name": "C1", "value": 2.14e-12, "unit": "F"}, ...],
//    "is_physical": true, "source_model": "m.json"}
//
// Foster elements are listed R1, C1, R2, C2, ...; Cauer elements in ladder
// order C1, R1, C2, R2, ....

constexpr int kFormatVersion = 1;

using AnyCircuit = std::variant<FosterCircuit, CauerCircuit>;

struct ModelDocument {
  RationalImpedance model;
  std::vector<double> fit_residuals;
};

struct CircuitDocument {
  AnyCircuit circuit;
  std::string source_model;
};

void write_model(std::ostream& out, const RationalImpedance& model, std::span<const double> fit_residuals = {});
ModelDocument read_model(std::istream& in);

void write_circuit(std::ostream& out, const AnyCircuit& circuit, const std::string& source_model = {});
CircuitDocument read_circuit(std::istream& in);

/// Reads either document kind. Throws InputError for anything else.
ImpedanceSource read_source(std::istream& in);
ImpedanceSource load_source(const std::filesystem::path& path);

ImpedanceSource to_source(const AnyCircuit& circuit);
RationalImpedance circuit_to_rational(const AnyCircuit& circuit);

}  // namespace bioimp
