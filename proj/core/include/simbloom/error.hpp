#pragma once

#include <stdexcept>
#include <string>

namespace simbloom {

enum class Errc {
  invalid_parameter,
  configuration,   // e.g. n-gram grade mismatch on a non-empty filter
  incompatible,    // filters cannot be compared (kappa, family or grade differ)
  format,          // bad magic or malformed structure
  truncated,
  unsupported,     // unknown version or digest id
  canonical_form,  // nonzero padding bits
  resource,        // enumeration would exceed the configured guard
  duplicate_label,
  missing_label,
  io,
};

[[nodiscard]] auto to_string(Errc code) noexcept -> const char*;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] auto code() const noexcept -> Errc { return code_; }

private:
  Errc code_;
};

}  // namespace simbloom
