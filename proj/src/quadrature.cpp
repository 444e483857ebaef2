#include "magic_bullet/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "magic_bullet/integrate.hpp"
#include "magic_bullet/rng.hpp"

namespace magic_bullet::quadrature {

double wavefunction(const TwoModeSqueezedState& s, double a_s1, double a_i1) {
  // -(1+2N)(a^2+b^2) + 4 sqrt(N(N+1)) ab in the rotated frame u = (a+b)/sqrt2,
  // v = (a-b)/sqrt2, using 1+2N - 2sqrt(N(N+1)) = 1/(1+2N + 2sqrt(N(N+1))) so no
  // large terms cancel at high N.
  const double n = s.nbar;
  const double wide = 1.0 + 2.0 * n + 2.0 * std::sqrt(n * (n + 1.0));
  const double u = (a_s1 + a_i1) / std::numbers::sqrt2;
  const double v = (a_s1 - a_i1) / std::numbers::sqrt2;
  const double exponent = -u * u / wide - wide * v * v;
  return std::exp(exponent) / std::sqrt(std::numbers::pi / 2.0);
}

ConditionalStats conditional_stats(const TwoModeSqueezedState& s) {
  const double n = s.nbar;
  const double diag = 1.0 + 2.0 * n;
  ConditionalStats out;
  out.mean_coeff = std::sqrt(4.0 * n * (n + 1.0)) / diag;
  out.cond_var = 1.0 / (4.0 * diag);
  out.marg_var = diag / 4.0;
  return out;
}

std::vector<QuadratureSample> sample_homodyne(const TwoModeSqueezedState& s, std::size_t trials,
                                              std::uint64_t seed) {
  const ConditionalStats st = conditional_stats(s);
  // Cholesky of [[m, c], [c, m]]: L = [[sqrt(m), 0], [c/sqrt(m), sqrt(m - c^2/m)]],
  // where m - c^2/m is the conditional variance in closed form.
  const double l11 = std::sqrt(st.marg_var);
  const double l21 = st.cross_cov() / l11;
  const double l22 = std::sqrt(st.cond_var);

  std::vector<QuadratureSample> out(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = substream(seed, t);
    std::normal_distribution<double> normal;
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    out[t] = {l11 * z1, l21 * z1 + l22 * z2};
  }
  return out;
}

double epr_limit_deviation(const TwoModeSqueezedState& s) {
  return std::sqrt(conditional_stats(s).cond_var);
}

double normalization_integral(const TwoModeSqueezedState& s, double rel_tol) {
  const ConditionalStats st = conditional_stats(s);
  const double half_width = 8.0 * std::sqrt(st.marg_var);
  QuadratureTolerance tol;
  tol.relative = rel_tol;
  tol.absolute_floor = 1e-300;

  auto inner = [&](double a) {
    const double centre = st.mean_coeff * a;
    const double spread = std::sqrt(st.cond_var);
    auto f = [&](double b) {
      const double psi = wavefunction(s, a, b);
      return psi * psi;
    };
    return adaptive_integral(f, -half_width, half_width,
                             {centre - 4 * spread, centre, centre + 4 * spread}, tol,
                             "normalization (inner)")
        .value;
  };
  return adaptive_integral(inner, -half_width, half_width, {0.0}, tol, "normalization (outer)")
      .value;
}

}  // namespace magic_bullet::quadrature
