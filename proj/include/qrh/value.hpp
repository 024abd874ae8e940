#pragma once

#include <complex>
#include <string>
#include <utility>

namespace qrh {

using cplx = std::complex<double>;

enum class SignalKind { pole, zero };

// Where a meromorphic quantity failed to be finite and nonzero-regular.
struct Signal {
  SignalKind kind = SignalKind::pole;
  cplx location{};      // point in the signalling function's own argument
  std::string source;   // function that raised it
};

// Either a finite complex number or a pole/zero signal. Functions that
// return logarithms use the same type: a zero of f is a "zero" signal of log f.
class Value {
 public:
  Value() = default;
  Value(cplx v) : v_(v) {}  // NOLINT(implicit)
  static Value signal(SignalKind k, cplx where, std::string src) {
    Value r;
    r.ok_ = false;
    r.sig_ = Signal{k, where, std::move(src)};
    return r;
  }

  bool finite() const noexcept { return ok_; }
  explicit operator bool() const noexcept { return ok_; }
  cplx value() const;  // throws Error(domain) when a signal
  cplx operator*() const { return value(); }
  const Signal& sig() const noexcept { return sig_; }

  // Pole <-> zero swap, used when a signalled quantity is inverted.
  Value flipped() const {
    Value r = *this;
    if (!ok_) r.sig_.kind = sig_.kind == SignalKind::pole ? SignalKind::zero : SignalKind::pole;
    return r;
  }

 private:
  cplx v_{};
  bool ok_ = true;
  Signal sig_{};
};

const char* signal_name(SignalKind k) noexcept;

}  // namespace qrh
