#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <variant>

namespace magic_bullet {

/// Single-ended measurement cavities at +dx (signal) and -dx (idler), loaded to steady state.
struct CavityConfig {
  double gc_over_g = 1.0;        // cavity linewidth over OPA linewidth
  double dx = 0.0;               // normalized detuning of the cavity resonance
  bool steady_state = true;      // caller asserts Gamma_c T_c >> 1
  std::optional<double> gc_tc = std::nullopt; // Gamma_c T_c, if known, for the transient diagnostic
};

/// Matched Kth-order Butterworth filters at +dx (signal) and -dx (idler).
struct FilterConfig {
  int k_order = 1;
  double wc_over_g = 1.0;        // filter bandwidth over OPA linewidth
  double dx = 0.0;
  bool long_count = true;        // caller asserts omega_c T >> 1
};

using MeasurementConfig = std::variant<CavityConfig, FilterConfig>;

/// Cavity power kernel (2a / (a^2 + u^2)) / 2pi with a = Gamma_c / Gamma; unit area.
/// Because the idler cavity response is the conjugate of the signal response at
/// the paired frequency, the same kernel weights the phase-sensitive cross moment.
inline double cavity_kernel(double gc_over_g, double u) {
  const double a = gc_over_g;
  return (2.0 * a / (a * a + u * u)) / (2.0 * std::numbers::pi);
}

/// Butterworth intensity transmission 1 / (1 + (u / wc)^(2K)).
inline double butterworth_transmission(int k_order, double wc_over_g, double u) {
  const double r = std::abs(u) / wc_over_g;
  // Beyond r ~ 1e20/K the power overflows; transmission is zero there anyway.
  const double p = std::pow(r, 2.0 * k_order);
  return std::isfinite(p) ? 1.0 / (1.0 + p) : 0.0;
}

}  // namespace magic_bullet
