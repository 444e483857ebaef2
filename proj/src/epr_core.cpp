#include "magic_bullet/epr_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "magic_bullet/errors.hpp"
#include "magic_bullet/rng.hpp"

namespace magic_bullet::epr {
namespace {

constexpr double kNormTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
// Joint probabilities below this are treated as exactly zero when sampling.
constexpr double kProbabilityFloor = 1e-15;

bool is_orthonormal(const Matrix& basis, double tol) {
  if (basis.rows() != basis.cols() || basis.rows() == 0) return false;
  const Matrix gram = basis.adjoint() * basis;
  return (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff() <= tol;
}

void require_dim(int expected, int actual, const char* what) {
  if (expected != actual) {
    throw ValidationError(std::string(what) + ": dimension mismatch (" +
                          std::to_string(expected) + " vs " + std::to_string(actual) + ")");
  }
}

}  // namespace

EntangledPair::EntangledPair(Matrix amps) : amps_(std::move(amps)) {
  if (amps_.rows() == 0 || amps_.rows() != amps_.cols()) {
    throw ValidationError("EntangledPair amplitudes must be a non-empty square matrix");
  }
  if (std::abs(amps_.squaredNorm() - 1.0) > kNormTol) {
    throw ValidationError("EntangledPair amplitudes are not normalized (|c|^2 = " +
                          std::to_string(amps_.squaredNorm()) + ")");
  }
}

ScatteringMatrix::ScatteringMatrix(Matrix u) : u_(std::move(u)) {
  if (!is_orthonormal(u_, kUnitaryTol)) {
    throw ValidationError("ScatteringMatrix is not unitary");
  }
}

ProjectiveMeasurement::ProjectiveMeasurement(Matrix basis) : basis_(std::move(basis)) {
  if (!is_orthonormal(basis_, kUnitaryTol)) {
    throw ValidationError("measurement basis is not orthonormal");
  }
  labels_.resize(static_cast<std::size_t>(basis_.cols()));
  for (std::size_t i = 0; i < labels_.size(); ++i) labels_[i] = static_cast<double>(i);
}

ProjectiveMeasurement ProjectiveMeasurement::computational(int d) {
  if (d < 1) throw ValidationError("invalid dimension " + std::to_string(d));
  return ProjectiveMeasurement(Matrix::Identity(d, d));
}

ProjectiveMeasurement ProjectiveMeasurement::from_hermitian(const Matrix& h) {
  if (h.rows() == 0 || h.rows() != h.cols() ||
      (h - h.adjoint()).cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw ValidationError("observable must be a non-empty Hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  ProjectiveMeasurement m(solver.eigenvectors());
  const auto& ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) m.labels_[static_cast<std::size_t>(i)] = ev(i);
  return m;
}

Matrix haar_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw ValidationError("invalid dimension " + std::to_string(d));
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix z(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) z(i, j) = {normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  // Fix the column phases so Q is Haar rather than QR-convention biased.
  for (int j = 0; j < d; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

EntangledPair make_maximally_entangled(int d) {
  if (d < 1) throw ValidationError("invalid dimension " + std::to_string(d));
  return EntangledPair(Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
}

Matrix conjugate_pair_basis(const EntangledPair& pair, const Matrix& basis) {
  require_dim(pair.dim(), static_cast<int>(basis.rows()), "conjugate_pair_basis");
  if (!is_orthonormal(basis, kUnitaryTol)) {
    throw ValidationError("conjugate_pair_basis: basis is not orthonormal");
  }
  // <phi_z|_1 <phi_w^*|_2 |psi> = sum_jk conj(phi_z[j]) c_jk phi_w[k]
  return std::sqrt(static_cast<double>(pair.dim())) * (basis.adjoint() * pair.amps() * basis);
}

EntangledPair apply_bilateral_scattering(const EntangledPair& pair, const ScatteringMatrix& s) {
  require_dim(pair.dim(), s.dim(), "apply_bilateral_scattering");
  // (s (x) t) maps c -> s c t^T; with t = s^* that is s c s^dagger.
  Matrix out = s.u() * pair.amps() * s.u().adjoint();
  // Rounding drift must not trip the constructor's 1e-12 norm check.
  out /= out.norm();
  return EntangledPair(std::move(out));
}

Eigen::MatrixXd joint_outcome_probabilities(const EntangledPair& pair,
                                            const ProjectiveMeasurement& m) {
  require_dim(pair.dim(), m.dim(), "joint_outcome_probabilities");
  const Matrix amp = m.basis().adjoint() * pair.amps() * m.basis();
  return amp.cwiseAbs2();
}

std::vector<OutcomePair> measure_correlated(const EntangledPair& pair,
                                            const ProjectiveMeasurement& m, std::size_t trials,
                                            std::uint64_t seed) {
  const Eigen::MatrixXd probs = joint_outcome_probabilities(pair, m);
  const int d = pair.dim();

  // Row-major cumulative table over (z, w).
  std::vector<double> cumulative(static_cast<std::size_t>(d) * d);
  double total = 0.0;
  for (int z = 0; z < d; ++z) {
    for (int w = 0; w < d; ++w) {
      const double p = probs(z, w);
      if (p >= kProbabilityFloor) total += p;
      cumulative[static_cast<std::size_t>(z) * d + w] = total;
    }
  }

  std::vector<OutcomePair> out;
  out.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = substream(seed, t);
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    // First cell with u < cumulative; zero-probability cells are never selected.
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
      it = std::lower_bound(cumulative.begin(), cumulative.end(), total);
    }
    const auto idx = static_cast<int>(it - cumulative.begin());
    out.emplace_back(idx / d, idx % d);
  }
  return out;
}

EntangledPair phase_conjugate(const EntangledPair& pair, int side) {
  if (side != 1 && side != 2) {
    throw ValidationError("phase_conjugate: side must be 1 or 2, got " + std::to_string(side));
  }
  // The partner's expansion basis is the real computational basis, so conjugating
  // either factor conjugates every amplitude.
  return EntangledPair(pair.amps().conjugate());
}

std::vector<std::pair<double, double>> group_outcomes(const std::vector<OutcomePair>& outcomes,
                                                      const ProjectiveMeasurement& m) {
  std::vector<std::pair<double, double>> out;
  out.reserve(outcomes.size());
  const auto& labels = m.labels();
  for (const auto& [a, b] : outcomes) {
    out.emplace_back(labels.at(static_cast<std::size_t>(a)), labels.at(static_cast<std::size_t>(b)));
  }
  return out;
}

double match_fraction(const std::vector<OutcomePair>& outcomes) {
  if (outcomes.empty()) return 1.0;
  const auto hits = std::count_if(outcomes.begin(), outcomes.end(),
                                  [](const OutcomePair& o) { return o.first == o.second; });
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

}  // namespace magic_bullet::epr
