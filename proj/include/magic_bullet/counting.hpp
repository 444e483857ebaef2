#pragma once

#include <optional>
#include <vector>

#include "magic_bullet/kernels.hpp"
#include "magic_bullet/opa_model.hpp"

namespace magic_bullet::counting {

/// Photocount moments and the normalized difference variance
///   sigma2 = <(n_S - n_I)^2> / (<n_S> + <n_I>).
///
/// Cavity scenario: n_s, n_i are mean intracavity photon numbers and q2 = |<a_S a_I>|^2.
/// Filter scenario: all fields are rates per unit Gamma*T (divide by 2 pi already
/// applied): n_s = n_i = int h S_n du / 2pi, and q2 = int h^2 S_p^2 du / 2pi is the
/// mode-summed squared cross moment after filtering.
struct CountStatistics {
  double n_s = 0.0;
  double n_i = 0.0;
  double q2 = 0.0;
  double sigma2 = 1.0;
  /// Cavity only: e^{-Gamma_c T_c}, bound on the dropped vacuum-transient terms.
  std::optional<double> transient_bound;
};

/// sigma2 for independent coherent-state beams.
double shot_noise_reference();

/// Half-width of the integration domain: max(50, 100 * bandwidth ratio).
double integration_half_width(double bandwidth_ratio);

/// Zero-mean Gaussian moment factoring of <(n_S - n_I)^2> / (<n_S> + <n_I>) for one
/// mode pair with mean numbers n_s, n_i and squared cross moment q2. Zero flux maps to 1.
double factored_sigma2(double n_s, double n_i, double q2);

/// Steady-state cavity loading. Throws ValidationError unless c.steady_state,
/// IntegrationError if the adaptive quadrature does not converge.
CountStatistics cavity_moments(const opa::OpaParams& p, const CavityConfig& c);

/// Long-count Butterworth filter penetration; sigma2 = 1 + (e - c)/r.
CountStatistics filter_moments(const opa::OpaParams& p, const FilterConfig& f);

struct Fig3Row {
  double dx = 0.0;
  double gc_over_g = 0.0;
  double sigma2 = 0.0;
};

/// cavity_moments over dx_list x gc_grid, rows ordered by dx then grid order.
/// Grid points are evaluated concurrently; assembly is index-ordered.
std::vector<Fig3Row> fig3_sweep(const opa::OpaParams& p, const std::vector<double>& dx_list,
                                const std::vector<double>& gc_grid);

struct FilterRow {
  int k_order = 1;
  double wc_over_g = 0.0;
  double sigma2 = 0.0;
  double law_1_over_2k = 0.0;
};

std::vector<FilterRow> filter_sweep(const opa::OpaParams& p, const std::vector<int>& k_list,
                                    const std::vector<double>& wc_list, double dx = 0.0);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace magic_bullet::counting
