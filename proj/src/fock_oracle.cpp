#include "magic_bullet/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "magic_bullet/errors.hpp"

namespace magic_bullet::fock {
namespace {

constexpr double kMinCapturedMass = 0.9999;
// Extended grid used to estimate the mass outside the span; odd so bins align.
constexpr int kCoverageFactor = 9;

// Scale of the kernel's finest feature: the cavity linewidth, or the width of a
// Butterworth skirt (~ omega_c / K).
double kernel_width(const MeasurementConfig& k) {
  return std::visit(
      [](const auto& c) {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, CavityConfig>) {
          return c.gc_over_g;
        } else {
          return c.wc_over_g / c.k_order;
        }
      },
      k);
}

double kernel_dx(const MeasurementConfig& k) {
  return std::visit([](const auto& c) { return c.dx; }, k);
}

// Kernel density against which the spectrum is weighted (cavity l(u), filter |H(u)|^2).
double kernel_density(const MeasurementConfig& k, double u) {
  return std::visit(
      [u](const auto& c) {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, CavityConfig>) {
          return cavity_kernel(c.gc_over_g, u);
        } else {
          return butterworth_transmission(c.k_order, c.wc_over_g, u);
        }
      },
      k);
}

void validate_kernel(const MeasurementConfig& k) {
  std::visit(
      [](const auto& c) {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, CavityConfig>) {
          if (!(c.gc_over_g > 0.0)) throw ValidationError("gc_over_g must be > 0");
        } else {
          if (c.k_order < 1) throw ValidationError("k_order must be >= 1");
          if (!(c.wc_over_g > 0.0)) throw ValidationError("wc_over_g must be > 0");
        }
      },
      k);
}

double captured_fraction(const opa::OpaParams& p, const MeasurementConfig& k, int n_bins,
                         double span) {
  const double width = span / n_bins;
  const double dx = kernel_dx(k);
  const int total_bins = kCoverageFactor * n_bins;
  const int first_inside = (kCoverageFactor / 2) * n_bins;
  const double lo = -0.5 * kCoverageFactor * span;
  double inside = 0.0;
  double all = 0.0;
  for (int i = 0; i < total_bins; ++i) {
    const double u = lo + (i + 0.5) * width;
    const double m = kernel_density(k, u) * opa::fluorescence_spectrum(p, u + dx);
    all += m;
    if (i >= first_inside && i < first_inside + n_bins) inside += m;
  }
  return all > 0.0 ? inside / all : 1.0;
}

}  // namespace

TruncatedTwoModeState make_tmss(double nbar, int n_max) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw ValidationError("nbar must be a finite value >= 0");
  }
  if (n_max < 0 || n_max > kMaxDenseTruncation) {
    throw TruncationError("n_max = " + std::to_string(n_max) + " outside [0, " +
                          std::to_string(kMaxDenseTruncation) + "]");
  }
  const double tail = opa::truncation_tail(nbar, n_max);
  if (tail >= kDefaultTail) {
    throw TruncationError("n_max = " + std::to_string(n_max) + " leaves tail mass " +
                          std::to_string(tail) + " for nbar = " + std::to_string(nbar));
  }
  const auto coeffs = opa::schmidt_coefficients(opa::TwoModeSqueezedState{nbar}, n_max);
  TruncatedTwoModeState out;
  out.n_max = n_max;
  out.amps = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) out.amps(n, n) = coeffs[static_cast<std::size_t>(n)];
  return out;
}

TruncatedTwoModeState make_tmss(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw ValidationError("nbar must be a finite value >= 0");
  }
  return make_tmss(nbar, opa::truncation_for_tail(nbar, kDefaultTail));
}

NumberMoments attenuate(const TruncatedTwoModeState& state, double eta_s, double eta_i) {
  if (!(eta_s >= 0.0 && eta_s <= 1.0) || !(eta_i >= 0.0 && eta_i <= 1.0)) {
    throw ValidationError("transmissions must lie in [0, 1]");
  }
  NumberMoments m;
  const auto& c = state.amps;
  const int dim = static_cast<int>(c.rows());
  std::complex<double> pair = 0.0;
  for (int ni = 0; ni < dim; ++ni) {
    for (int ns = 0; ns < dim; ++ns) {
      const double prob = std::norm(c(ns, ni));
      if (prob != 0.0) {
        // Binomial(n, eta): mean eta n, second moment eta n (1 - eta) + eta^2 n^2.
        m.mean_s += prob * eta_s * ns;
        m.mean_i += prob * eta_i * ni;
        m.second_s += prob * (eta_s * ns * (1.0 - eta_s) + eta_s * eta_s * ns * ns);
        m.second_i += prob * (eta_i * ni * (1.0 - eta_i) + eta_i * eta_i * ni * ni);
        m.cross += prob * eta_s * eta_i * ns * ni;
      }
      if (ns > 0 && ni > 0) {
        pair += std::conj(c(ns - 1, ni - 1)) * c(ns, ni) * std::sqrt(double(ns) * ni);
      }
    }
  }
  m.pair_amplitude = pair * std::sqrt(eta_s * eta_i);
  return m;
}

HomodyneMoments homodyne_moments(const TruncatedTwoModeState& state) {
  const double norm = state.norm_squared();
  if (norm < 1.0 - 1e-10 || norm > 1.0 + 1e-12) {
    throw TruncationError("state norm " + std::to_string(norm) +
                          " indicates inadequate truncation");
  }
  // Pad by one photon so a^dagger acting on the top level is represented exactly.
  const int n = static_cast<int>(state.amps.rows());
  const int dim = n + 1;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dim, dim);
  c.topLeftCorner(n, n) = state.amps;

  // a_1 = (a + a^dagger)/2 has <k-1|a_1|k> = sqrt(k)/2.
  Eigen::MatrixXcd xs = Eigen::MatrixXcd::Zero(dim, dim);  // X_S |psi>
  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(dim, dim);  // X_I |psi>
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      std::complex<double> s = 0.0;
      if (i > 0) s += std::sqrt(double(i)) * c(i - 1, j);
      if (i + 1 < dim) s += std::sqrt(double(i + 1)) * c(i + 1, j);
      xs(i, j) = 0.5 * s;
      std::complex<double> t = 0.0;
      if (j > 0) t += std::sqrt(double(j)) * c(i, j - 1);
      if (j + 1 < dim) t += std::sqrt(double(j + 1)) * c(i, j + 1);
      xi(i, j) = 0.5 * t;
    }
  }
  const double mean_s = (c.array().conjugate() * xs.array()).sum().real();
  const double mean_i = (c.array().conjugate() * xi.array()).sum().real();
  HomodyneMoments out;
  out.var_s = xs.squaredNorm() - mean_s * mean_s;
  out.var_i = xi.squaredNorm() - mean_i * mean_i;
  out.cross_cov = (xs.array().conjugate() * xi.array()).sum().real() - mean_s * mean_i;
  return out;
}

BinDecomposition decompose(const opa::OpaParams& p, const MeasurementConfig& kernel,
                           int n_bins, double span) {
  validate_kernel(kernel);
  if (n_bins < 101 || n_bins % 2 == 0) {
    throw ValidationError("n_bins must be odd and >= 101, got " + std::to_string(n_bins));
  }
  if (!(span > 0.0) || !std::isfinite(span)) throw ValidationError("span must be > 0");

  BinDecomposition out;
  out.bin_width = span / n_bins;
  out.bins.resize(static_cast<std::size_t>(n_bins));
  const double dx = kernel_dx(kernel);
  const bool cavity = std::holds_alternative<CavityConfig>(kernel);
  for (int i = 0; i < n_bins; ++i) {
    Bin& b = out.bins[static_cast<std::size_t>(i)];
    b.centre = -0.5 * span + (i + 0.5) * out.bin_width;
    b.weight = opa::fluorescence_spectrum(p, b.centre + dx);
    b.cross_weight = opa::phase_sensitive_spectrum(p, b.centre + dx);
    const double density = kernel_density(kernel, b.centre);
    b.transmission = cavity ? std::min(1.0, density * out.bin_width) : density;
  }
  return out;
}

BinResult bin_statistics(const opa::OpaParams& p, const MeasurementConfig& kernel, int n_bins,
                         double span) {
  const BinDecomposition dec = decompose(p, kernel, n_bins, span);

  BinResult out;
  out.captured = captured_fraction(p, kernel, n_bins, span);
  if (out.captured < kMinCapturedMass) {
    throw CoverageError("span " + std::to_string(span) + " misses kernel-weighted spectrum",
                        out.captured);
  }
  const double resolution = 0.5 * std::min(kernel_width(kernel), 1.0);
  if (dec.bin_width > resolution * (1.0 + 1e-9)) {
    throw CoverageError("bin width " + std::to_string(dec.bin_width) +
                            " under-resolves kernel (need <= " + std::to_string(resolution) +
                            ")",
                        out.captured);
  }
  // Fail before any dense work if the brightest bin exceeds the truncation cap.
  double peak = 0.0;
  for (const Bin& b : dec.bins) peak = std::max(peak, b.weight);
  if (const int need = opa::truncation_for_tail(peak, kDefaultTail); need > kMaxDenseTruncation) {
    throw TruncationError("brightest bin (nbar = " + scientific(peak) + ") needs n_max = " +
                          std::to_string(need) + " > " + std::to_string(kMaxDenseTruncation));
  }

  if (std::holds_alternative<CavityConfig>(kernel)) {
    // The cavity mode is a unit-norm superposition of the bin modes with weights
    // c_b^2 = transmission. Thin each bin by c_b^2, then combine independent bins:
    //   <n^2>     = 2[(sum N')^2 - sum N'^2] + sum <n'^2>_b
    //   <n_S n_I> = N_S N_I - sum N'_S N'_I + |sum q'|^2 - sum |q'|^2 + sum <n'_S n'_I>_b
    double ns = 0, ni = 0, ns_sq = 0, ni_sq = 0, nsni = 0, v_s = 0, v_i = 0, m_cross = 0;
    double q_abs_sq = 0;
    std::complex<double> q = 0.0;
    for (const Bin& b : dec.bins) {
      const NumberMoments m = attenuate(make_tmss(b.weight), b.transmission, b.transmission);
      ns += m.mean_s;
      ni += m.mean_i;
      ns_sq += m.mean_s * m.mean_s;
      ni_sq += m.mean_i * m.mean_i;
      nsni += m.mean_s * m.mean_i;
      v_s += m.second_s;
      v_i += m.second_i;
      m_cross += m.cross;
      q += m.pair_amplitude;
      q_abs_sq += std::norm(m.pair_amplitude);
    }
    const double second_s = 2.0 * (ns * ns - ns_sq) + v_s;
    const double second_i = 2.0 * (ni * ni - ni_sq) + v_i;
    const double cross = ns * ni - nsni + std::norm(q) - q_abs_sq + m_cross;
    out.mean_s = ns;
    out.mean_i = ni;
    out.cross = std::abs(q);
    const double flux = ns + ni;
    out.sigma2 = flux > 0.0 ? std::max(0.0, (second_s + second_i - 2.0 * cross) / flux) : 1.0;
    return out;
  }

  // Filter: many independent modes per bin; the multiplicity (bin width times
  // Gamma T / 2 pi) is common to numerator and denominator.
  double diff_var = 0.0;
  double flux = 0.0;
  for (const Bin& b : dec.bins) {
    const NumberMoments m = attenuate(make_tmss(b.weight), b.transmission, b.transmission);
    const double mean_diff = m.mean_s - m.mean_i;
    diff_var += dec.bin_width *
                (m.second_s + m.second_i - 2.0 * m.cross - mean_diff * mean_diff);
    flux += dec.bin_width * (m.mean_s + m.mean_i);
    out.mean_s += dec.bin_width * m.mean_s / (2.0 * std::numbers::pi);
    out.mean_i += dec.bin_width * m.mean_i / (2.0 * std::numbers::pi);
  }
  out.sigma2 = flux > 0.0 ? std::max(0.0, diff_var / flux) : 1.0;
  return out;
}

std::pair<int, double> default_discretization(const MeasurementConfig& kernel) {
  validate_kernel(kernel);
  const bool lorentzian_tails =
      std::holds_alternative<CavityConfig>(kernel) || std::get<FilterConfig>(kernel).k_order == 1;
  const double outer = std::visit(
      [](const auto& c) {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, CavityConfig>) {
          return c.gc_over_g;
        } else {
          return c.wc_over_g;
        }
      },
      kernel);
  const double span = std::max(lorentzian_tails ? 20.0 : 2.0, 200.0 * outer);
  const double max_bin = 0.25 * std::min(kernel_width(kernel), 1.0);
  int n = std::max(2001, static_cast<int>(std::ceil(span / max_bin)));
  if (n % 2 == 0) ++n;
  return {n, span};
}

double bin_sigma2(const opa::OpaParams& p, const MeasurementConfig& kernel, int n_bins,
                  double span) {
  return bin_statistics(p, kernel, n_bins, span).sigma2;
}

}  // namespace magic_bullet::fock
