#include "magic_bullet/pair_projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "magic_bullet/errors.hpp"

namespace magic_bullet::pairs {
namespace {

// Conditioning on less than this is a caller error, not physics.
constexpr double kMinProjectionProbability = 1e-30;

void require_same_modes(int a, int b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": mode count mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

WavepacketState WavepacketState::normalized(Amplitudes phi) {
  double norm2 = 0.0;
  for (const auto& v : phi) norm2 += std::norm(v);
  if (phi.empty() || !(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw ValidationError("wavepacket must have non-zero finite norm");
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& v : phi) v *= scale;
  return WavepacketState(std::move(phi));
}

int mode_index(int slot, int n_modes) { return slot - (n_modes - 1) / 2; }

PairState build_pair_state(const opa::OpaParams& p, double gamma_t, int n_modes,
                           const std::optional<std::vector<double>>& phases) {
  if (!(gamma_t >= kMinWindow)) {
    throw ValidationError("counting window too short: Gamma*T = " + std::to_string(gamma_t) +
                          " < " + std::to_string(kMinWindow));
  }
  if (n_modes < 1 || n_modes % 2 == 0) {
    throw ValidationError("n_modes must be a positive odd integer, got " +
                          std::to_string(n_modes));
  }
  if (phases && static_cast<int>(phases->size()) != n_modes) {
    throw ValidationError("phase profile length does not match n_modes");
  }

  PairState out;
  out.psi.resize(static_cast<std::size_t>(n_modes));
  out.mode_freqs.resize(static_cast<std::size_t>(n_modes));
  double norm2 = 0.0;
  for (int i = 0; i < n_modes; ++i) {
    const double x = 2.0 * std::numbers::pi * mode_index(i, n_modes) / gamma_t;
    // sqrt(S_n) up to the constant 2G, which normalization removes.
    const double magnitude = 1.0 / std::sqrt(opa::spectral_denominator(p, x));
    const double phase = phases ? (*phases)[static_cast<std::size_t>(i)] : 0.0;
    out.mode_freqs[static_cast<std::size_t>(i)] = x;
    out.psi[static_cast<std::size_t>(i)] = std::polar(magnitude, phase);
    norm2 += magnitude * magnitude;
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& v : out.psi) v *= scale;
  return out;
}

Projection project_signal(const PairState& pair, const WavepacketState& phi) {
  require_same_modes(pair.n_modes(), phi.n_modes(), "project_signal");
  double prob = 0.0;
  Amplitudes idler(pair.psi.size());
  for (std::size_t n = 0; n < idler.size(); ++n) {
    idler[n] = pair.psi[n] * std::conj(phi.phi()[n]);
    prob += std::norm(idler[n]);
  }
  if (prob < kMinProjectionProbability) {
    throw OrthogonalProjectionError("projection onto phi has probability " +
                                    std::to_string(prob) + "; cannot condition on it");
  }
  return Projection{prob, WavepacketState::normalized(std::move(idler))};
}

double conjugate_fidelity(const WavepacketState& idler, const WavepacketState& phi) {
  require_same_modes(idler.n_modes(), phi.n_modes(), "conjugate_fidelity");
  std::complex<double> overlap = 0.0;
  for (std::size_t n = 0; n < idler.phi().size(); ++n) overlap += idler.phi()[n] * phi.phi()[n];
  return std::min(1.0, std::norm(overlap));
}

WavepacketState gaussian_wavepacket(const PairState& pair, double centre, double rms_width) {
  if (!(rms_width > 0.0)) throw ValidationError("wavepacket width must be > 0");
  Amplitudes phi(pair.mode_freqs.size());
  for (std::size_t n = 0; n < phi.size(); ++n) {
    const double z = (pair.mode_freqs[n] - centre) / rms_width;
    // |phi|^2 is Gaussian with the requested rms width.
    phi[n] = std::exp(-0.25 * z * z);
  }
  return WavepacketState::normalized(std::move(phi));
}

WavepacketState flat_wavepacket(const PairState& pair, double centre, double half_width) {
  Amplitudes phi(pair.mode_freqs.size());
  for (std::size_t n = 0; n < phi.size(); ++n) {
    phi[n] = std::abs(pair.mode_freqs[n] - centre) <= half_width ? 1.0 : 0.0;
  }
  return WavepacketState::normalized(std::move(phi));
}

}  // namespace magic_bullet::pairs
