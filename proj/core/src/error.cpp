#include "simbloom/error.hpp"

namespace simbloom {

auto to_string(Errc code) noexcept -> const char* {
  switch (code) {
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::configuration: return "configuration";
    case Errc::incompatible: return "incompatible";
    case Errc::format: return "format";
    case Errc::truncated: return "truncated";
    case Errc::unsupported: return "unsupported";
    case Errc::canonical_form: return "canonical-form";
    case Errc::resource: return "resource";
    case Errc::duplicate_label: return "duplicate-label";
    case Errc::missing_label: return "missing-label";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace simbloom
