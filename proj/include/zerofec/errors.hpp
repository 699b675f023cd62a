#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace zerofec {

// Root of every error this library throws on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A text-generation or entailment backend could not produce a usable
// response: transport failure, non-200 status, empty output, or a fixture
// miss. Carries the pipeline stage and, when known, the candidate
// provenance so batch error records can say where the chain broke.
class BackendError : public Error {
public:
  BackendError(std::string stage, const std::string& message,
               std::string provenance = {})
      : Error(stage + ": " + message),
        stage_(std::move(stage)),
        provenance_(std::move(provenance)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& provenance() const noexcept { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

private:
  std::string stage_;
  std::string provenance_;
};

// The wire contract was violated: unparseable body, missing field, or an
// entailment probability outside [0, 1].
class ProtocolError : public Error {
public:
  using Error::Error;
};

// A prompt template is missing a required placeholder.
class TemplateError : public Error {
public:
  using Error::Error;
};

// The configured annotator cannot run (unknown name, missing command).
class AnnotatorUnavailable : public Error {
public:
  using Error::Error;
};

// A boolean question does not match the declarativization grammar.
class UnparseableQuestion : public Error {
public:
  using Error::Error;
};

// select_correction was handed a trace without the input-claim sentinel.
class MissingInputClaim : public Error {
public:
  using Error::Error;
};

// A statistic is undefined for the given input (e.g. a constant ranking).
class DegenerateInput : public Error {
public:
  using Error::Error;
};

// Too few usable data points (e.g. fewer than 2 multiply-rated items).
class InsufficientData : public Error {
public:
  using Error::Error;
};

// Paired sequences of different lengths.
class LengthMismatch : public Error {
public:
  using Error::Error;
};

// Bad configuration: unknown scorer component, malformed URL, bad flag.
class ConfigError : public Error {
public:
  using Error::Error;
};

// A dataset line is not valid JSON or lacks the mapped fields.
class ParseError : public Error {
public:
  ParseError(std::size_t line, std::string reason)
      : Error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(std::move(reason)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

private:
  std::size_t line_;
  std::string reason_;
};

// A dataset record parses but breaks a documented invariant.
class InvariantViolation : public Error {
public:
  InvariantViolation(std::size_t line, std::string field,
                     const std::string& detail)
      : Error("line " + std::to_string(line) + ", field '" + field +
              "': " + detail),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

}  // namespace zerofec
