#pragma once

#include <cstdint>
#include <vector>

#include "magic_bullet/opa_model.hpp"

namespace magic_bullet::quadrature {

using opa::TwoModeSqueezedState;

/// One joint homodyne outcome of the real-part quadratures a_S1, a_I1.
struct QuadratureSample {
  double a_s1 = 0.0;
  double a_i1 = 0.0;
};

/// Homodyne statistics of the two-mode squeezed state; vacuum variance is 1/4.
struct ConditionalStats {
  double mean_coeff = 0.0;  // E[a_I1 | a_S1] = mean_coeff * a_S1
  double cond_var = 0.25;   // Var[a_I1 | a_S1]
  double marg_var = 0.25;   // Var[a_S1] = Var[a_I1]

  /// Cov[a_S1, a_I1].
  double cross_cov() const { return mean_coeff * marg_var; }
};

/// Shot-noise (coherent-state) quadrature variance.
inline constexpr double kVacuumVariance = 0.25;

/// Joint quadrature wavefunction
///   exp[-(1+2N)(a^2 + b^2) + 4 sqrt(N(N+1)) a b] / sqrt(pi/2).
double wavefunction(const TwoModeSqueezedState& s, double a_s1, double a_i1);

ConditionalStats conditional_stats(const TwoModeSqueezedState& s);

/// Bivariate Gaussian samples with the state's exact covariance (2x2 Cholesky).
/// Trial t draws from its own substream of `seed`. Precision of the conditional
/// part degrades once N exceeds ~1e8.
std::vector<QuadratureSample> sample_homodyne(const TwoModeSqueezedState& s, std::size_t trials,
                                              std::uint64_t seed);

/// Conditional standard deviation sqrt(1/(4(1+2N))); tends to 0 as N grows.
double epr_limit_deviation(const TwoModeSqueezedState& s);

/// Double integral of psi^2 over [-L, L]^2, L = 8 sqrt(marg_var), by nested
/// adaptive Gauss-Kronrod at relative tolerance rel_tol.
double normalization_integral(const TwoModeSqueezedState& s, double rel_tol = 1e-12);

}  // namespace magic_bullet::quadrature
