#include "magic_bullet/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "magic_bullet/errors.hpp"
#include "magic_bullet/integrate.hpp"
#include "parallel.hpp"

namespace magic_bullet::counting {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Breakpoints at the kernel centre (u = 0) scaled by its width, and at the
// spectrum centre (u = -dx) scaled by the OPA linewidth.
std::vector<double> breakpoints(double width, double dx) {
  std::vector<double> b{0.0, -dx, -dx - 1.0, -dx + 1.0, -dx - 3.0, -dx + 3.0};
  for (double m : {0.5, 1.0, 1.5, 2.0, 4.0, 10.0, 50.0}) {
    b.push_back(-m * width);
    b.push_back(m * width);
  }
  return b;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be > 0, got " + std::to_string(v));
  }
}

}  // namespace

double shot_noise_reference() { return 1.0; }

double integration_half_width(double bandwidth_ratio) {
  return std::max(50.0, 100.0 * bandwidth_ratio);
}

double factored_sigma2(double n_s, double n_i, double q2) {
  const double flux = n_s + n_i;
  if (flux <= 0.0) return shot_noise_reference();
  // <n^2> = 2N^2 + N per mode, <n_S n_I> = N_S N_I + |q|^2.
  const double diff2 =
      2.0 * n_s * n_s + n_s + 2.0 * n_i * n_i + n_i - 2.0 * n_s * n_i - 2.0 * q2;
  return std::max(0.0, diff2 / flux);
}

CountStatistics cavity_moments(const opa::OpaParams& p, const CavityConfig& c) {
  require_positive(c.gc_over_g, "gc_over_g");
  if (!c.steady_state) {
    throw ValidationError("cavity_moments requires the steady-state regime (Gamma_c T_c >> 1)");
  }
  if (c.gc_tc && !(*c.gc_tc > 0.0)) throw ValidationError("gc_tc must be > 0");

  const double a = c.gc_over_g;
  // Kernel and spectra are even, so only |dx| matters; using it makes the
  // dx -> -dx symmetry exact in floating point.
  const double dx = std::abs(c.dx);
  const double half = integration_half_width(a);
  const auto points = breakpoints(a, dx);
  const QuadratureTolerance tol;

  const double n = adaptive_integral(
      [&](double u) { return cavity_kernel(a, u) * opa::fluorescence_spectrum(p, u + dx); },
      -half, half, points, tol, "cavity mean photon number").value;
  const double q = adaptive_integral(
      [&](double u) { return cavity_kernel(a, u) * opa::phase_sensitive_spectrum(p, u + dx); },
      -half, half, points, tol, "cavity cross moment").value;

  CountStatistics out;
  out.n_s = n;
  out.n_i = n;
  out.q2 = q * q;
  out.sigma2 = factored_sigma2(n, n, out.q2);
  if (c.gc_tc) out.transient_bound = std::exp(-*c.gc_tc);
  return out;
}

CountStatistics filter_moments(const opa::OpaParams& p, const FilterConfig& f) {
  if (f.k_order < 1) {
    throw ValidationError("k_order must be >= 1, got " + std::to_string(f.k_order));
  }
  require_positive(f.wc_over_g, "wc_over_g");
  if (!f.long_count) {
    throw ValidationError("filter_moments requires the long-count regime (omega_c T >> 1)");
  }

  const double dx = std::abs(f.dx);  // see cavity_moments
  const double half = integration_half_width(f.wc_over_g);
  const auto points = breakpoints(f.wc_over_g, dx);
  const QuadratureTolerance tol;
  auto h = [&](double u) { return butterworth_transmission(f.k_order, f.wc_over_g, u); };

  const double r = adaptive_integral(
      [&](double u) { return h(u) * opa::fluorescence_spectrum(p, u + dx); },
      -half, half, points, tol, "filter mean rate").value / kTwoPi;
  const double e = adaptive_integral(
      [&](double u) {
        const double s = opa::fluorescence_spectrum(p, u + dx);
        const double t = h(u);
        return t * t * s * s;
      },
      -half, half, points, tol, "filter excess rate").value / kTwoPi;
  const double c = adaptive_integral(
      [&](double u) {
        const double s = opa::phase_sensitive_spectrum(p, u + dx);
        const double t = h(u);
        return t * t * s * s;
      },
      -half, half, points, tol, "filter cross rate").value / kTwoPi;

  CountStatistics out;
  out.n_s = r;
  out.n_i = r;
  out.q2 = c;
  out.sigma2 = r > 0.0 ? std::max(0.0, 1.0 + (e - c) / r) : shot_noise_reference();
  return out;
}

std::vector<Fig3Row> fig3_sweep(const opa::OpaParams& p, const std::vector<double>& dx_list,
                                const std::vector<double>& gc_grid) {
  std::vector<Fig3Row> rows;
  rows.reserve(dx_list.size() * gc_grid.size());
  for (double dx : dx_list) {
    for (double gc : gc_grid) rows.push_back({dx, gc, 0.0});
  }
  detail::parallel_for(rows.size(), [&](std::size_t i) {
    rows[i].sigma2 = cavity_moments(p, CavityConfig{.gc_over_g = rows[i].gc_over_g, .dx = rows[i].dx}).sigma2;
  });
  return rows;
}

std::vector<FilterRow> filter_sweep(const opa::OpaParams& p, const std::vector<int>& k_list,
                                    const std::vector<double>& wc_list, double dx) {
  std::vector<FilterRow> rows;
  rows.reserve(k_list.size() * wc_list.size());
  for (int k : k_list) {
    for (double wc : wc_list) rows.push_back({k, wc, 0.0, 1.0 / (2.0 * k)});
  }
  detail::parallel_for(rows.size(), [&](std::size_t i) {
    rows[i].sigma2 =
        filter_moments(p, FilterConfig{rows[i].k_order, rows[i].wc_over_g, dx}).sigma2;
  });
  return rows;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 0) throw ValidationError("grid size must be >= 0");
  require_positive(lo, "grid lower bound");
  require_positive(hi, "grid upper bound");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace magic_bullet::counting
