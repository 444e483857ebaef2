#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magic_bullet/kernels.hpp"
#include "magic_bullet/opa_model.hpp"

// Brute-force photon-number validator for the closed forms in quadrature and
// counting. Nothing here uses Gaussian moment factoring within a mode.
namespace magic_bullet::fock {

inline constexpr double kDefaultTail = 1e-12;
inline constexpr int kMaxDenseTruncation = 2048;

/// Amplitudes c_{n_S, n_I} of a two-mode state truncated at n_max photons per mode.
struct TruncatedTwoModeState {
  int n_max = 0;
  Eigen::MatrixXcd amps;

  double norm_squared() const { return amps.squaredNorm(); }
};

/// Two-mode squeezed vacuum with Bose-Einstein Schmidt coefficients on the diagonal.
/// Throws TruncationError if the tail mass above n_max is >= kDefaultTail or n_max
/// exceeds kMaxDenseTruncation.
TruncatedTwoModeState make_tmss(double nbar, int n_max);

/// make_tmss with the smallest adequate truncation.
TruncatedTwoModeState make_tmss(double nbar);

/// Photon-number moments after independent loss on each mode.
struct NumberMoments {
  double mean_s = 0.0;
  double mean_i = 0.0;
  double second_s = 0.0;   // <n_S^2>
  double second_i = 0.0;   // <n_I^2>
  double cross = 0.0;      // <n_S n_I>
  std::complex<double> pair_amplitude;  // <a_S a_I>
};

/// Loss modelled as coupling to vacuum: photon numbers are Bernoulli-thinned
/// (binomial given n) independently per mode, <a_S a_I> scales by sqrt(eta_s eta_i).
NumberMoments attenuate(const TruncatedTwoModeState& state, double eta_s, double eta_i);

struct HomodyneMoments {
  double var_s = 0.0;
  double var_i = 0.0;
  double cross_cov = 0.0;

  double mean_coeff() const { return cross_cov / var_s; }
  double cond_var() const { return var_i - cross_cov * cross_cov / var_s; }
};

/// Second moments of a_1 = (a + a^dagger)/2 on each mode from Fock matrix elements.
/// Throws TruncationError if the state norm is outside [1 - 1e-10, 1 + 1e-12].
HomodyneMoments homodyne_moments(const TruncatedTwoModeState& state);

struct Bin {
  double centre = 0.0;        // offset u from the kernel centre
  double weight = 0.0;        // S_n(u + dx)
  double cross_weight = 0.0;  // S_p(u + dx)
  double transmission = 0.0;  // cavity: l(u) du, filter: |H(u)|^2
};

struct BinDecomposition {
  std::vector<Bin> bins;
  double bin_width = 0.0;
};

/// n_bins equal bins across [-span/2, span/2] around the kernel centre.
/// Requires odd n_bins >= 101 and span > 0 (ValidationError).
BinDecomposition decompose(const opa::OpaParams& p, const MeasurementConfig& kernel,
                           int n_bins, double span);

struct BinResult {
  double sigma2 = 1.0;
  double mean_s = 0.0;       // cavity: photons; filter: rate per unit Gamma*T
  double mean_i = 0.0;
  double cross = 0.0;        // cavity: <a_S a_I>; filter: unused (0)
  double captured = 1.0;     // kernel-weighted mass fraction inside the span
};

/// Independent-bin evaluation of sigma2. Throws CoverageError if the span misses
/// more than 1e-4 of the kernel-weighted spectrum, or if the bin width exceeds half
/// of min(feature width, 1) where the feature width is Gamma_c/Gamma for the cavity
/// and omega_c/(K Gamma) for the filter.
BinResult bin_statistics(const opa::OpaParams& p, const MeasurementConfig& kernel, int n_bins,
                         double span);

/// A (n_bins, span) pair that passes the coverage and resolution checks with a
/// 2x resolution margin: span max(20, 200 w) for Lorentzian tails (cavity, K = 1),
/// else max(2, 200 w); at least 2001 bins.
std::pair<int, double> default_discretization(const MeasurementConfig& kernel);

double bin_sigma2(const opa::OpaParams& p, const MeasurementConfig& kernel, int n_bins,
                  double span);

}  // namespace magic_bullet::fock
