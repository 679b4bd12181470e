#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bioimp {

// Base of everything the library throws. Two families below map onto the
// CLI exit codes: InputError (2) and NumericalError (3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class InsufficientData : public InputError {
 public:
  using InputError::InputError;
};

class MissingFrequency : public InputError {
 public:
  MissingFrequency(const std::string& what, double frequency_hz)
      : InputError(what), frequency_hz_(frequency_hz) {}
  double frequency_hz() const noexcept { return frequency_hz_; }

 private:
  double frequency_hz_;
};

class InconsistentSeries : public InputError {
 public:
  using InputError::InputError;
};

class SingularSystem : public NumericalError {
 public:
  SingularSystem(const std::string& what, double condition_estimate)
      : NumericalError(what), condition_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

class PoleAtFrequency : public NumericalError {
 public:
  PoleAtFrequency(const std::string& what, double omega_rad_s)
      : NumericalError(what), omega_(omega_rad_s) {}
  double omega_rad_s() const noexcept { return omega_; }

 private:
  double omega_;
};

class DegeneratePhase : public NumericalError {
 public:
  DegeneratePhase(const std::string& what, double phase_deg)
      : NumericalError(what), phase_deg_(phase_deg) {}
  double phase_deg() const noexcept { return phase_deg_; }

 private:
  double phase_deg_;
};

// Raised by Foster synthesis when the denominator roots cannot be realized as
// a sum of parallel RC branches. Carries the raw roots for reporting.
class PoleError : public NumericalError {
 public:
  PoleError(const std::string& what, std::vector<std::complex<double>> roots)
      : NumericalError(what), roots_(std::move(roots)) {}
  const std::vector<std::complex<double>>& roots() const noexcept { return roots_; }

 private:
  std::vector<std::complex<double>> roots_;
};

class ComplexPoles : public PoleError {
 public:
  using PoleError::PoleError;
};

class UnstablePoles : public PoleError {
 public:
  using PoleError::PoleError;
};

class NonDistinctPoles : public PoleError {
 public:
  using PoleError::PoleError;
};

class DegenerateExpansion : public NumericalError {
 public:
  DegenerateExpansion(const std::string& what, std::size_t elements_extracted)
      : NumericalError(what), extracted_(elements_extracted) {}
  std::size_t elements_extracted() const noexcept { return extracted_; }

 private:
  std::size_t extracted_;
};

}  // namespace bioimp
