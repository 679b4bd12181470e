#include "bioimp/io.hpp"

#include <fstream>

#include <json.hpp>

#include "bioimp/errors.hpp"

namespace bioimp {

using json = nlohmann::ordered_json;

namespace {

json parse_document(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
}

void check_header(const json& doc, const char* kind) {
  if (!doc.is_object()) throw InputError("document must be a JSON object");
  if (doc.value("format_version", 0) != kFormatVersion) {
    throw InputError("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
  }
  if (doc.value("kind", std::string{}) != kind) {
    throw InputError(std::string("expected a document of kind '") + kind + "'");
  }
}

template <typename T>
T field(const json& doc, const char* name) {
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

void write_model(std::ostream& out, const RationalImpedance& model, std::span<const double> fit_residuals) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "rational_impedance";
  doc["orders"] = {{"N", model.orders().numerator()}, {"M", model.orders().denominator()}};
  doc["num_coeffs"] = model.num_coeffs();
  doc["den_coeffs"] = model.den_coeffs();
  doc["omega_scale"] = model.omega_scale();
  doc["fit_residuals"] = std::vector<double>(fit_residuals.begin(), fit_residuals.end());
  doc["is_positive"] = model.is_positive();
  out << doc.dump(2) << '\n';
}

namespace {

ModelDocument model_from(const json& doc) {
  check_header(doc, "rational_impedance");
  const auto orders = field<json>(doc, "orders");
  const int n = field<int>(orders, "N");
  const int m = field<int>(orders, "M");
  auto num = field<std::vector<double>>(doc, "num_coeffs");
  auto den = field<std::vector<double>>(doc, "den_coeffs");
  if (static_cast<int>(num.size()) != n + 1 || static_cast<int>(den.size()) != m) {
    throw InputError("coefficient counts do not match orders");
  }
  RationalImpedance model(std::move(num), std::move(den), field<double>(doc, "omega_scale"));
  std::vector<double> residuals;
  if (doc.contains("fit_residuals")) residuals = field<std::vector<double>>(doc, "fit_residuals");
  return {std::move(model), std::move(residuals)};
}

CircuitDocument circuit_from(const json& doc) {
  check_header(doc, "circuit");
  const auto topology = field<std::string>(doc, "topology");
  const auto elements = field<json>(doc, "elements");
  if (!elements.is_array()) throw InputError("elements must be an array");
  std::vector<double> values;
  std::vector<std::string> names;
  for (const auto& e : elements) {
    names.push_back(field<std::string>(e, "name"));
    values.push_back(field<double>(e, "value"));
    const auto unit = field<std::string>(e, "unit");
    const char expect = names.back().empty() ? '?' : names.back().front();
    if ((expect == 'R' && unit != "ohm") || (expect == 'C' && unit != "F") || (expect != 'R' && expect != 'C')) {
      throw InputError("element '" + names.back() + "' has unexpected name or unit '" + unit + "'");
    }
  }
  std::string source = doc.contains("source_model") ? field<std::string>(doc, "source_model") : std::string{};
  // Names must follow the documented order for the topology.
  auto expect_names = [&](char first, char second) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string want = std::string(1, i % 2 == 0 ? first : second) + std::to_string(i / 2 + 1);
      if (names[i] != want) throw InputError("element " + std::to_string(i) + " should be " + want);
    }
  };
  if (topology == "foster") {
    if (values.size() % 2 != 0) throw InputError("Foster elements come in R/C pairs");
    expect_names('R', 'C');
    std::vector<RcBranch> branches;
    for (std::size_t i = 0; i < values.size(); i += 2) branches.push_back({values[i], values[i + 1]});
    return {FosterCircuit(std::move(branches)), std::move(source)};
  }
  if (topology == "cauer") {
    expect_names('C', 'R');
    return {CauerCircuit(std::move(values)), std::move(source)};
  }
  throw InputError("unknown topology '" + topology + "'");
}

}  // namespace

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
}

ModelDocument read_model(std::istream& in) {
  const auto doc = parse_document(in);
  return guarded([&] { return model_from(doc); });
}

void write_circuit(std::ostream& out, const AnyCircuit& circuit, const std::string& source_model) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "circuit";
  json elements = json::array();
  auto element = [](const std::string& name, double value, const char* unit) {
    return json{{"name", name}, {"value", value}, {"unit", unit}};
  };
  bool physical = false;
  if (const auto* f = std::get_if<FosterCircuit>(&circuit)) {
    doc["topology"] = "foster";
    std::size_t i = 1;
    for (const auto& b : f->branches()) {
      elements.push_back(element("R" + std::to_string(i), b.resistance_ohm, "ohm"));
      elements.push_back(element("C" + std::to_string(i), b.capacitance_f, "F"));
      ++i;
    }
    physical = f->is_physical();
  } else {
    const auto& c = std::get<CauerCircuit>(circuit);
    doc["topology"] = "cauer";
    for (std::size_t k = 0; k < c.stages(); ++k) {
      elements.push_back(element("C" + std::to_string(k + 1), c.capacitance_f(k), "F"));
      elements.push_back(element("R" + std::to_string(k + 1), c.resistance_ohm(k), "ohm"));
    }
    physical = c.is_physical();
  }
  doc["elements"] = std::move(elements);
  doc["is_physical"] = physical;
  doc["source_model"] = source_model;
  out << doc.dump(2) << '\n';
}

CircuitDocument read_circuit(std::istream& in) {
  const auto doc = parse_document(in);
  return guarded([&] { return circuit_from(doc); });
}

ImpedanceSource to_source(const AnyCircuit& circuit) {
  return std::visit([](const auto& c) -> ImpedanceSource { return c; }, circuit);
}

RationalImpedance circuit_to_rational(const AnyCircuit& circuit) {
  return std::visit([](const auto& c) { return circuit_to_rational(c); }, circuit);
}

ImpedanceSource read_source(std::istream& in) {
  const auto doc = parse_document(in);
  return guarded([&]() -> ImpedanceSource {
    const auto kind = doc.is_object() ? doc.value("kind", std::string{}) : std::string{};
    if (kind == "rational_impedance") return model_from(doc).model;
    if (kind == "circuit") return to_source(circuit_from(doc).circuit);
    throw InputError("document is neither a model nor a circuit");
  });
}

ImpedanceSource load_source(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_source(in);
}

}  // namespace bioimp
