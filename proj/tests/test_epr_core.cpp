#include <cmath>
#include <algorithm>
#include <complex>

#include <gtest/gtest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "magic_bullet/epr_core.hpp"
#include "magic_bullet/errors.hpp"
#include "support.hpp"

using namespace magic_bullet;
using namespace magic_bullet::epr;
using cd = std::complex<double>;

namespace {

// sqrt(d) sum_jk conj(phi_z[j]) c_jk conj(phi_w^*[k]), one element at a time.
Matrix contract_brute_force(const EntangledPair& pair, const Matrix& basis) {
  const int d = pair.dim();
  Matrix out(d, d);
  for (int z = 0; z < d; ++z) {
    for (int w = 0; w < d; ++w) {
      cd acc = 0.0;
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          const cd partner = std::conj(basis(k, w));  // |phi_w^*>
          acc += std::conj(basis(j, z)) * pair.amps()(j, k) * std::conj(partner);
        }
      }
      out(z, w) = std::sqrt(double(d)) * acc;
    }
  }
  return out;
}

// (U (x) U^*) applied to vec(c) as an explicit d^2 x d^2 operator, row index j*d + k.
Matrix kron_apply(const Matrix& u, const Matrix& c) {
  const int d = static_cast<int>(u.rows());
  const Matrix big = Eigen::kroneckerProduct(u, u.conjugate());
  Eigen::VectorXcd v(d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) v(j * d + k) = c(j, k);
  const Eigen::VectorXcd r = big * v;
  Matrix out(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) out(j, k) = r(j * d + k);
  return out;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(MaximallyEntangled, SmallDimensions) {
  EXPECT_EQ(make_maximally_entangled(1).amps()(0, 0), cd(1.0));
  const auto p2 = make_maximally_entangled(2);
  EXPECT_NEAR(std::abs(p2.amps()(0, 0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-16);
  EXPECT_EQ(p2.amps()(0, 1), cd(0.0));
  const auto p4 = make_maximally_entangled(4);
  EXPECT_NEAR(p4.norm_squared(), 1.0, 1e-15);
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      if (j != k) {
        EXPECT_EQ(p4.amps()(j, k), cd(0.0));
      }
    }
  }
  EXPECT_THROW(make_maximally_entangled(0), ValidationError);
}

TEST(Validation, RejectsMalformedInputs) {
  EXPECT_THROW(EntangledPair(Matrix::Identity(2, 2)), ValidationError);  // norm 2
  EXPECT_THROW(EntangledPair(Matrix::Zero(2, 3)), ValidationError);
  Matrix s = Matrix::Identity(2, 2);
  s(0, 1) = 0.5;
  EXPECT_THROW(ScatteringMatrix{s}, ValidationError);
  EXPECT_THROW(ProjectiveMeasurement{s}, ValidationError);
  EXPECT_THROW(apply_bilateral_scattering(make_maximally_entangled(2),
                                          ScatteringMatrix(Matrix::Identity(3, 3))),
               ValidationError);
  EXPECT_THROW(phase_conjugate(make_maximally_entangled(2), 3), ValidationError);
}

TEST(ConjugatePairBasis, ComputationalIsIdentity) {
  for (int d : {1, 2, 5}) {
    const auto pair = make_maximally_entangled(d);
    EXPECT_LE(max_abs(conjugate_pair_basis(pair, Matrix::Identity(d, d)) - Matrix::Identity(d, d)),
              1e-15);
  }
}

TEST(ConjugatePairBasis, CircularBasisMatchesBruteForce) {
  Matrix b(2, 2);
  b << cd(1, 0), cd(1, 0), cd(0, 1), cd(0, -1);
  b /= std::sqrt(2.0);
  const auto pair = make_maximally_entangled(2);
  const Matrix got = conjugate_pair_basis(pair, b);
  EXPECT_LE(max_abs(got - contract_brute_force(pair, b)), 1e-14);
  EXPECT_LE(max_abs(got - Matrix::Identity(2, 2)), 1e-12);
}

TEST(ConjugatePairBasis, HaarBasisD8) {
  const auto pair = make_maximally_entangled(8);
  const Matrix b = haar_unitary(8, 42);
  const Matrix got = conjugate_pair_basis(pair, b);
  EXPECT_LE(max_abs(got - contract_brute_force(pair, b)), 1e-13);
  EXPECT_LE(max_abs(got - Matrix::Identity(8, 8)), 1e-10);
}

TEST(HaarUnitary, UnitaryAndSeedDeterministic) {
  const Matrix u = haar_unitary(6, 3);
  EXPECT_LE(max_abs(u.adjoint() * u - Matrix::Identity(6, 6)), 1e-12);
  EXPECT_EQ(u, haar_unitary(6, 3));
  EXPECT_NE(u, haar_unitary(6, 4));
}

TEST(BilateralScattering, IdentityAndPhaseExamples) {
  const auto pair = make_maximally_entangled(3);
  EXPECT_LE(max_abs(apply_bilateral_scattering(pair, ScatteringMatrix(Matrix::Identity(3, 3))).amps() -
                    pair.amps()),
            1e-16);
  const double theta = 0.7;
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = std::polar(1.0, theta);
  const auto out = apply_bilateral_scattering(make_maximally_entangled(2), ScatteringMatrix(s));
  EXPECT_LE(max_abs(out.amps() - Matrix::Identity(2, 2) / std::sqrt(2.0)), 1e-15);
}

TEST(BilateralScattering, RidgeIdentityMatchesKroneckerProduct) {
  for (int i = 0; i < 60; ++i) {
    testing_support::Draw d(21, i);
    const int dim = d.integer(1, 16);
    const Matrix u = haar_unitary(dim, d.seed());
    const auto pair = make_maximally_entangled(dim);
    const Matrix direct = kron_apply(u, pair.amps());
    EXPECT_LE(max_abs(direct - pair.amps()), 1e-10) << "case " << i;
    const auto out = apply_bilateral_scattering(pair, ScatteringMatrix(u));
    EXPECT_LE(max_abs(out.amps() - pair.amps()), 1e-10) << "case " << i;
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
  }
}

TEST(BilateralScattering, GeneralPairMatchesKroneckerProduct) {
  testing_support::Draw d(22, 0);
  Matrix c(4, 4);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) c(j, k) = cd(d.uniform(-1, 1), d.uniform(-1, 1));
  c /= c.norm();
  const Matrix u = haar_unitary(4, 9);
  const auto out = apply_bilateral_scattering(EntangledPair(c), ScatteringMatrix(u));
  EXPECT_LE(max_abs(out.amps() - kron_apply(u, c)), 1e-13);
}

TEST(MeasureCorrelated, IdentityComputationalD2) {
  const auto pair = make_maximally_entangled(2);
  const auto m = ProjectiveMeasurement::computational(2);
  const auto outcomes = measure_correlated(pair, m, 10000, 5);
  EXPECT_EQ(match_fraction(outcomes), 1.0);
  double zeros = 0;
  for (const auto& o : outcomes) zeros += o.first == 0;
  const double sigma = std::sqrt(0.25 / 10000);
  EXPECT_NEAR(zeros / 10000, 0.5, 4 * sigma);
}

TEST(MeasureCorrelated, HaarScatteringAndBasisD4) {
  const auto pair =
      apply_bilateral_scattering(make_maximally_entangled(4), ScatteringMatrix(haar_unitary(4, 1)));
  const ProjectiveMeasurement m(haar_unitary(4, 2));
  const Eigen::MatrixXd probs = joint_outcome_probabilities(pair, m);
  double off = 0.0;
  for (int z = 0; z < 4; ++z)
    for (int w = 0; w < 4; ++w)
      if (z != w) off += probs(z, w);
  EXPECT_LT(off, 1e-20);
  EXPECT_EQ(match_fraction(measure_correlated(pair, m, 10000, 3)), 1.0);
}

TEST(MeasureCorrelated, NonMaximalPairStillMatchedWithSkewedMarginal) {
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = std::sqrt(0.9);
  c(1, 1) = std::sqrt(0.1);
  const auto outcomes =
      measure_correlated(EntangledPair(c), ProjectiveMeasurement::computational(2), 10000, 8);
  EXPECT_EQ(match_fraction(outcomes), 1.0);
  double zeros = 0;
  for (const auto& o : outcomes) zeros += o.first == 0;
  EXPECT_NEAR(zeros / 10000, 0.9, 4 * std::sqrt(0.09 / 10000));
}

TEST(MeasureCorrelated, SeedReproducible) {
  const auto pair = make_maximally_entangled(5);
  const ProjectiveMeasurement m(haar_unitary(5, 11));
  EXPECT_EQ(measure_correlated(pair, m, 500, 17), measure_correlated(pair, m, 500, 17));
  EXPECT_TRUE(measure_correlated(pair, m, 0, 1).empty());
}

TEST(PhaseConjugate, Examples) {
  const auto real = make_maximally_entangled(3);
  EXPECT_EQ(phase_conjugate(real, 1).amps(), real.amps());
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 1.0 / std::sqrt(2.0);
  c(1, 1) = cd(0.0, 1.0 / std::sqrt(2.0));
  const auto out = phase_conjugate(EntangledPair(c), 2);
  EXPECT_EQ(out.amps()(1, 1), cd(0.0, -1.0 / std::sqrt(2.0)));
  EXPECT_EQ(out.amps()(0, 0), c(0, 0));
}

TEST(PhaseConjugate, InvolutionOnRandomPairs) {
  for (int i = 0; i < 50; ++i) {
    testing_support::Draw d(23, i);
    const int dim = d.integer(1, 8);
    Matrix c(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) c(j, k) = cd(d.uniform(-1, 1), d.uniform(-1, 1));
    c /= c.norm();
    const EntangledPair pair(c);
    const int side = d.integer(1, 2);
    const auto twice = phase_conjugate(phase_conjugate(pair, side), side);
    EXPECT_LE(max_abs(twice.amps() - pair.amps()), 1e-15);
    EXPECT_NEAR(phase_conjugate(pair, side).norm_squared(), 1.0, 1e-12);
  }
}

// The magic-bullet property over random scatterers, bases and dimensions.
TEST(MagicBulletProperty, PerfectCorrelationOverRandomConfigurations) {
  for (int i = 0; i < 60; ++i) {
    testing_support::Draw d(99, i);
    const int dim = d.integer(1, 8);
    const ScatteringMatrix s(haar_unitary(dim, d.seed()));
    const ProjectiveMeasurement m(haar_unitary(dim, d.seed()));
    const auto pair = apply_bilateral_scattering(make_maximally_entangled(dim), s);
    const auto outcomes = measure_correlated(pair, m, 1000, d.seed());
    ASSERT_EQ(outcomes.size(), 1000u);
    EXPECT_EQ(match_fraction(outcomes), 1.0) << "case " << i << " d=" << dim;
  }
}

TEST(MagicBulletProperty, DegenerateObservableGroupsIdentically) {
  // Hermitian observable with a doubly degenerate eigenvalue.
  const Matrix u = haar_unitary(4, 77);
  Eigen::VectorXd ev(4);
  ev << -1.0, 0.5, 0.5, 2.0;
  const Matrix h = u * ev.cast<cd>().asDiagonal() * u.adjoint();
  const auto m = ProjectiveMeasurement::from_hermitian(h);
  const auto pair = make_maximally_entangled(4);
  const auto grouped = group_outcomes(measure_correlated(pair, m, 2000, 4), m);
  for (const auto& [a, b] : grouped) EXPECT_EQ(a, b);
  std::vector<double> labels = m.labels();
  std::sort(labels.begin(), labels.end());
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(labels[i], ev(i), 1e-12);
}
