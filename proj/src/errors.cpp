#include "qrh/errors.hpp"
#include "qrh/value.hpp"

namespace qrh {

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::domain: return "domain-error";
    case Errc::unsupported_regime: return "unsupported-regime";
    case Errc::degenerate_ray: return "degenerate-ray";
    case Errc::inconsistent_refinement: return "inconsistent-refinement";
    case Errc::invalid_splitting: return "invalid-splitting";
    case Errc::unsupported_structure: return "unsupported-structure";
    case Errc::rank_mismatch: return "rank-mismatch";
    case Errc::splitting_mismatch: return "splitting-mismatch";
    case Errc::not_decomposable: return "not-decomposable";
    case Errc::zero_division: return "zero-division";
    case Errc::parse: return "parse-error";
  }
  return "error";
}

const char* signal_name(SignalKind k) noexcept { return k == SignalKind::pole ? "pole" : "zero"; }

cplx Value::value() const {
  if (!ok_)
    throw Error(Errc::domain, std::string(signal_name(sig_.kind)) + " of " + sig_.source);
  return v_;
}

}  // namespace qrh
