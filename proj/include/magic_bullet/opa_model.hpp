#pragma once

#include <vector>

namespace magic_bullet::opa {

/// Highest normalized pump power accepted; spectra diverge as G^2 -> 1.
inline constexpr double kMaxPump = 0.99;

/// Doubly-resonant OPA below threshold. All detunings are normalized, x = omega / Gamma.
class OpaParams {
 public:
  /// Throws AboveThresholdError for g2 >= 1 and ValidationError for
  /// g2 in (0.99, 1), g2 < 0, or gamma <= 0.
  explicit OpaParams(double g2, double gamma = 1.0);

  double g2() const noexcept { return g2_; }
  double gain() const noexcept { return gain_; }
  double gamma() const noexcept { return gamma_; }

 private:
  double g2_;
  double gain_;
  double gamma_;
};

/// Two-mode squeezed vacuum of one signal/idler frequency pair.
struct TwoModeSqueezedState {
  double nbar = 0.0;  // mean photons per mode

  static TwoModeSqueezedState with_nbar(double nbar);
};

/// |1 - G^2 - x^2 - 2ix|^2, the common denominator of both spectra.
double spectral_denominator(const OpaParams& p, double x);

/// Normally-ordered (fluorescence) spectrum S_n(x) = |2G / (1 - G^2 - x^2 - 2ix)|^2.
double fluorescence_spectrum(const OpaParams& p, double x);

/// Phase-sensitive spectrum S_p(x) = 2G (1 + G^2 + x^2) / |1 - G^2 - x^2 - 2ix|^2.
double phase_sensitive_spectrum(const OpaParams& p, double x);

/// Full width at half maximum of S_n, in normalized detuning.
double fluorescence_fwhm(const OpaParams& p);

/// State of the signal mode at +dx paired with the idler mode at -dx.
TwoModeSqueezedState mode_pair_state(const OpaParams& p, double dx);

/// sqrt(N^n / (N+1)^(n+1)) for n = 0..n_max.
std::vector<double> schmidt_coefficients(const TwoModeSqueezedState& s, int n_max);

/// Bose-Einstein mass above n_max: (N / (N+1))^(n_max+1).
double truncation_tail(double nbar, int n_max);

/// Smallest n_max whose tail mass is below eps.
int truncation_for_tail(double nbar, double eps = 1e-12);

}  // namespace magic_bullet::opa
