#pragma once

#include <stdexcept>
#include <string>

namespace mimonet {

enum class ErrorKind {
  domain,
  invalid_config,
  config_parse,
  insufficient_interferers,
  insufficient_dof,
  dimension_exhausted,
  invalid_l,
  hypothesis_violation,
  quadrature_nonconvergence,
  unsupported_law,
  nonpositive_value,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::config_parse: return "config-parse";
    case ErrorKind::insufficient_interferers: return "insufficient-interferers";
    case ErrorKind::insufficient_dof: return "insufficient-dof";
    case ErrorKind::dimension_exhausted: return "dimension-exhausted";
    case ErrorKind::invalid_l: return "invalid-L";
    case ErrorKind::hypothesis_violation: return "hypothesis-violation";
    case ErrorKind::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case ErrorKind::unsupported_law: return "unsupported-law";
    case ErrorKind::nonpositive_value: return "nonpositive-value";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace mimonet
