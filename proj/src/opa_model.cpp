#include "magic_bullet/opa_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magic_bullet/errors.hpp"

namespace magic_bullet::opa {

OpaParams::OpaParams(double g2, double gamma) : g2_(g2), gain_(0.0), gamma_(gamma) {
  if (!std::isfinite(g2) || g2 < 0.0) {
    throw ValidationError("g2 must be a finite value >= 0, got " + std::to_string(g2));
  }
  if (g2 >= 1.0) {
    throw AboveThresholdError("g2 = " + std::to_string(g2) +
                              " is at or above the oscillation threshold (g2 < 1)");
  }
  if (g2 > kMaxPump) {
    throw ValidationError("g2 = " + std::to_string(g2) + " exceeds the near-threshold guard " +
                          std::to_string(kMaxPump));
  }
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw ValidationError("gamma must be > 0, got " + std::to_string(gamma));
  }
  gain_ = std::sqrt(g2);
}

TwoModeSqueezedState TwoModeSqueezedState::with_nbar(double nbar) {
  if (!std::isfinite(nbar) || nbar < 0.0) {
    throw ValidationError("nbar must be a finite value >= 0, got " + std::to_string(nbar));
  }
  return TwoModeSqueezedState{nbar};
}

double spectral_denominator(const OpaParams& p, double x) {
  const double re = 1.0 - p.g2() - x * x;
  const double im = 2.0 * x;
  return re * re + im * im;
}

double fluorescence_spectrum(const OpaParams& p, double x) {
  return 4.0 * p.g2() / spectral_denominator(p, x);
}

double phase_sensitive_spectrum(const OpaParams& p, double x) {
  return 2.0 * p.gain() * (1.0 + p.g2() + x * x) / spectral_denominator(p, x);
}

double fluorescence_fwhm(const OpaParams& p) {
  // Half maximum where D(x) = 2 D(0); with y = x^2 this is
  // y^2 + 2(1 + G^2) y - (1 - G^2)^2 = 0.
  const double a = 1.0 + p.g2();
  const double b = 1.0 - p.g2();
  const double y = -a + std::sqrt(a * a + b * b);
  return 2.0 * std::sqrt(y);
}

TwoModeSqueezedState mode_pair_state(const OpaParams& p, double dx) {
  return TwoModeSqueezedState{fluorescence_spectrum(p, dx)};
}

std::vector<double> schmidt_coefficients(const TwoModeSqueezedState& s, int n_max) {
  if (n_max < 0) throw ValidationError("n_max must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double n = s.nbar;
  // c_0 = 1/sqrt(N+1), c_{k+1} = c_k sqrt(N/(N+1))
  const double ratio = std::sqrt(n / (n + 1.0));
  double c = 1.0 / std::sqrt(n + 1.0);
  for (auto& v : out) {
    v = c;
    c *= ratio;
  }
  return out;
}

double truncation_tail(double nbar, int n_max) {
  if (nbar <= 0.0) return 0.0;
  const double log_ratio = std::log(nbar) - std::log1p(nbar);
  return std::exp((n_max + 1.0) * log_ratio);
}

int truncation_for_tail(double nbar, double eps) {
  if (nbar <= 0.0) return 0;
  const double log_ratio = std::log(nbar) - std::log1p(nbar);
  int n = std::max(0, static_cast<int>(std::ceil(std::log(eps) / log_ratio)) - 1);
  while (truncation_tail(nbar, n) >= eps) ++n;
  while (n > 0 && truncation_tail(nbar, n - 1) < eps) --n;
  return n;
}

}  // namespace magic_bullet::opa
