#pragma once

#include <stdexcept>
#include <string>

namespace logtrop {

/// Domain error carrying a machine-readable code (e.g. "UnstableSignature").
///
/// The code strings are part of the CLI contract: they are emitted verbatim in
/// `{"error": code, "detail": ...}` diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail),
        code_(std::move(code)),
        detail_(detail) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

}  // namespace logtrop
