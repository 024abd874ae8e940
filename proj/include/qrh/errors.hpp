#pragma once

#include <stdexcept>
#include <string>

namespace qrh {

enum class Errc {
  invalid_argument,
  domain,
  unsupported_regime,
  degenerate_ray,
  inconsistent_refinement,
  invalid_splitting,
  unsupported_structure,
  rank_mismatch,
  splitting_mismatch,
  not_decomposable,
  zero_division,
  parse,
};

const char* errc_name(Errc c) noexcept;

// Every library failure that is not a pole/zero signal is thrown as this.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qrh
