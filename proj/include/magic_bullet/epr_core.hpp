#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace magic_bullet::epr {

using Matrix = Eigen::MatrixXcd;

/// Pure bipartite state sum_jk c_jk |j>_1 |k>_2 on C^d x C^d.
class EntangledPair {
 public:
  /// Throws ValidationError unless amps is square, non-empty and unit-norm within 1e-12.
  explicit EntangledPair(Matrix amps);

  int dim() const noexcept { return static_cast<int>(amps_.rows()); }
  const Matrix& amps() const noexcept { return amps_; }
  double norm_squared() const { return amps_.squaredNorm(); }

 private:
  Matrix amps_;
};

/// Unitary d x d scattering matrix (u^dagger u = 1 within 1e-10).
class ScatteringMatrix {
 public:
  explicit ScatteringMatrix(Matrix u);
  int dim() const noexcept { return static_cast<int>(u_.rows()); }
  const Matrix& u() const noexcept { return u_; }

 private:
  Matrix u_;
};

/// Rank-1 projective measurement; column z of `basis` is |phi_z>. Outcome index = column index.
class ProjectiveMeasurement {
 public:
  explicit ProjectiveMeasurement(Matrix basis);

  /// Computational basis of C^d.
  static ProjectiveMeasurement computational(int d);

  /// Eigenbasis of a Hermitian operator. `labels()` holds the eigenvalue of each
  /// basis vector so degenerate outcomes can be grouped after sampling.
  static ProjectiveMeasurement from_hermitian(const Matrix& h);

  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const noexcept { return basis_; }
  const std::vector<double>& labels() const noexcept { return labels_; }

 private:
  Matrix basis_;
  std::vector<double> labels_;
};

using OutcomePair = std::pair<int, int>;

/// Haar-distributed unitary from QR of a seeded complex Gaussian matrix.
Matrix haar_unitary(int d, std::uint64_t seed);

EntangledPair make_maximally_entangled(int d);

/// sqrt(d) <phi_z|_1 <phi_w^*|_2 |psi>. Identity for a maximally entangled pair.
Matrix conjugate_pair_basis(const EntangledPair& pair, const Matrix& basis);

/// (s (x) s^*) |psi>, i.e. amps -> s amps s^dagger.
EntangledPair apply_bilateral_scattering(const EntangledPair& pair, const ScatteringMatrix& s);

/// Joint probabilities |<phi_z|<phi_w^*|psi>|^2, particle 2 measured in the conjugate basis.
Eigen::MatrixXd joint_outcome_probabilities(const EntangledPair& pair,
                                            const ProjectiveMeasurement& m);

/// Samples `trials` joint outcomes (particle 1 in m, particle 2 in m^*) by inverse CDF.
std::vector<OutcomePair> measure_correlated(const EntangledPair& pair,
                                            const ProjectiveMeasurement& m, std::size_t trials,
                                            std::uint64_t seed);

/// Complex conjugation of the chosen particle in the (real) computational basis.
/// Either side yields amps -> amps^*; side must be 1 or 2.
EntangledPair phase_conjugate(const EntangledPair& pair, int side);

/// Maps outcome indices to the measurement's eigenvalue labels.
std::vector<std::pair<double, double>> group_outcomes(const std::vector<OutcomePair>& outcomes,
                                                      const ProjectiveMeasurement& m);

/// Fraction of outcome pairs with outcome_1 == outcome_2 (1.0 for an empty sample).
double match_fraction(const std::vector<OutcomePair>& outcomes);

}  // namespace magic_bullet::epr
