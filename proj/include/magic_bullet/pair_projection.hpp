#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "magic_bullet/opa_model.hpp"

namespace magic_bullet::pairs {

using Amplitudes = std::vector<std::complex<double>>;

/// Single photon pair spread over M Fourier modes n = -(M-1)/2 .. (M-1)/2 of a
/// [0, T] counting window; mode n sits at normalized detuning 2 pi n / (Gamma T).
struct PairState {
  Amplitudes psi;
  std::vector<double> mode_freqs;

  int n_modes() const { return static_cast<int>(psi.size()); }
};

/// Single-photon wavepacket over the same mode grid.
class WavepacketState {
 public:
  /// Normalizes `phi`; throws ValidationError for an empty or all-zero vector.
  static WavepacketState normalized(Amplitudes phi);

  int n_modes() const { return static_cast<int>(phi_.size()); }
  const Amplitudes& phi() const noexcept { return phi_; }

 private:
  explicit WavepacketState(Amplitudes phi) : phi_(std::move(phi)) {}
  Amplitudes phi_;
};

struct Projection {
  double prob = 0.0;
  WavepacketState idler;
};

/// Shortest counting window accepted, in units of 1/Gamma.
inline constexpr double kMinWindow = 50.0;

/// Mode index of slot i on the symmetric grid.
int mode_index(int slot, int n_modes);

/// psi_n proportional to sqrt(S_n(2 pi n / (Gamma T))), real positive unless a
/// phase profile (radians, one per mode) is supplied. At g2 = 0 the shape is the
/// vanishing-pump limit 1 / |1 - x^2 - 2ix|, i.e. a Lorentzian-squared |psi_n|^2.
PairState build_pair_state(const opa::OpaParams& p, double gamma_t, int n_modes,
                           const std::optional<std::vector<double>>& phases = std::nullopt);

/// Projects the signal photon onto phi; the idler is left in psi_n phi_n^* / sqrt(prob).
Projection project_signal(const PairState& pair, const WavepacketState& phi);

/// |sum_n idler_n phi_n|^2, overlap of the idler with phi^* up to global phase.
double conjugate_fidelity(const WavepacketState& idler, const WavepacketState& phi);

/// Gaussian wavepacket with given centre and rms width (normalized detuning) on the pair's grid.
WavepacketState gaussian_wavepacket(const PairState& pair, double centre, double rms_width);

/// Flat wavepacket over modes with |detuning - centre| <= half_width.
WavepacketState flat_wavepacket(const PairState& pair, double centre, double half_width);

}  // namespace magic_bullet::pairs
