#ifndef HGSIM_TYPES_HPP
#define HGSIM_TYPES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hgsim {

using Complex = std::complex<double>;

/// Error categories surfaced through the C API status codes.
enum class errc {
  invalid_argument,  // bad configuration or precondition violation
  numerical,         // solver/iteration failure
  io,                // file system failure
  memory_bound,      // requested problem exceeds the configured budget
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Harmonic order N and nonlinear coupling g (hbar = 1, g in inverse time).
/// Everything downstream reports against the dimensionless time gt.
struct ModelSpec {
  int order = 2;
  double coupling = 1.0;

  void validate() const {
    if (order < 1) fail(errc::invalid_argument, "model.order: must be >= 1");
    if (!(coupling > 0.0) || !std::isfinite(coupling))
      fail(errc::invalid_argument, "model.coupling: must be finite and > 0");
  }
};

/// Coherent inputs alpha_1 (fundamental) and alpha_N (harmonic).
struct CoherentInput {
  Complex alpha1{0.0, 0.0};
  Complex alphaN{0.0, 0.0};
  ModelSpec model{};

  double r1() const { return std::abs(alpha1); }
  double rN() const { return std::abs(alphaN); }
  double phi1() const { return std::arg(alpha1); }
  double phiN() const { return std::arg(alphaN); }
  /// Input phase mismatch theta = N*phi1 - phiN (meaningful while r1, rN > 0).
  double theta() const { return model.order * phi1() - phiN(); }

  void validate() const {
    model.validate();
    if (!is_finite(alpha1)) fail(errc::invalid_argument, "input.alpha1: must be finite");
    if (!is_finite(alphaN)) fail(errc::invalid_argument, "input.alphaN: must be finite");
  }
};

}  // namespace hgsim

#endif
