#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace opuc {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Failure categories. The CLI maps configuration to exit code 2 and
/// everything numerical to exit code 3.
enum class ErrorKind {
  configuration,
  contract,
  domain,
  pole,
  class_violation,
  index,
  ill_conditioned,
  extraction,
  numerical,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::contract: return "contract";
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::class_violation: return "class";
    case ErrorKind::index: return "index";
    case ErrorKind::ill_conditioned: return "ill-conditioning";
    case ErrorKind::extraction: return "extraction";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

}  // namespace opuc
