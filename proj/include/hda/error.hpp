#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hda {

enum class ErrorKind {
  // ipomset validation
  NotTotal,
  NotInterval,
  BadInterface,
  NotStrictOrder,
  NotComposable,
  NotLinear,
  EmptyIpomset,
  // morphisms
  Incompatible,
  InvalidMorphism,
  // text formats
  SyntaxError,
  BadFormat,
  // precubical sets
  MissingFace,
  SignatureMismatch,
  FunctorialityViolation,
  UnknownCellRef,
  NoInitial,
  BadSubset,
  InvalidMap,
  // paths
  BadStep,
  EndpointMismatch,
  InterfaceMismatch,
  NotNodeInitial,
  // equivalence checkers
  InitialMismatch,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotTotal: return "NotTotal";
    case ErrorKind::NotInterval: return "NotInterval";
    case ErrorKind::BadInterface: return "BadInterface";
    case ErrorKind::NotStrictOrder: return "NotStrictOrder";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::NotLinear: return "NotLinear";
    case ErrorKind::EmptyIpomset: return "EmptyIpomset";
    case ErrorKind::Incompatible: return "Incompatible";
    case ErrorKind::InvalidMorphism: return "InvalidMorphism";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::BadFormat: return "BadFormat";
    case ErrorKind::MissingFace: return "MissingFace";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::FunctorialityViolation: return "FunctorialityViolation";
    case ErrorKind::UnknownCellRef: return "UnknownCellRef";
    case ErrorKind::NoInitial: return "NoInitial";
    case ErrorKind::BadSubset: return "BadSubset";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::BadStep: return "BadStep";
    case ErrorKind::EndpointMismatch: return "EndpointMismatch";
    case ErrorKind::InterfaceMismatch: return "InterfaceMismatch";
    case ErrorKind::NotNodeInitial: return "NotNodeInitial";
    case ErrorKind::InitialMismatch: return "InitialMismatch";
  }
  return "Unknown";
}

// Single exception type; `detail` carries structured payloads such as the
// four events of a 2+2 witness or the offending cell ids.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::vector<std::string> detail = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(std::move(detail)) {}

  ErrorKind kind() const { return kind_; }
  const std::vector<std::string>& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::vector<std::string> detail_;
};

}  // namespace hda
