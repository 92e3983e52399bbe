#include <cmath>

#include <gtest/gtest.h>

#include "diffsub/subspace.hpp"
#include "diffsub/synthetic.hpp"
#include "support/oracles.hpp"

using namespace dsub;

namespace {

Subspace span_of(std::initializer_list<std::initializer_list<double>> cols) {
  const Index n = static_cast<Index>(cols.begin()->size());
  Matrix m(n, static_cast<Index>(cols.size()));
  Index j = 0;
  for (const auto& c : cols) {
    Index i = 0;
    for (double x : c) m(i++, j) = x;
    ++j;
  }
  return orthonormalize(m);
}

double max_orthonormality_error(const Matrix& b) {
  return (b.transpose() * b - Matrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(SubspaceTest, FromBasisRejectsNonOrthonormalColumns) {
  Matrix b(3, 2);
  b << 1, 1, 0, 1, 0, 0;
  EXPECT_THROW(Subspace::from_basis(b), InvalidArgument);
  EXPECT_NO_THROW(Subspace::from_basis(Matrix::Identity(3, 2)));
}

TEST(SubspaceTest, TrivialHasNoColumns) {
  const Subspace s = Subspace::trivial(5);
  EXPECT_TRUE(s.is_trivial());
  EXPECT_EQ(s.dim(), 0);
  EXPECT_EQ(s.ambient_dim(), 5);
}

TEST(OrthonormalizeTest, AlreadyOrthonormalColumnsAreKept) {
  const Subspace s = orthonormalize(Matrix::Identity(4, 2));
  ASSERT_EQ(s.dim(), 2);
  EXPECT_LE(oracle::span_distance(s.basis(), Matrix::Identity(4, 2)), 1e-14);
}

TEST(OrthonormalizeTest, DuplicatedDirectionDropsToRankOne) {
  Matrix m = Matrix::Zero(3, 2);
  m(0, 0) = 1;
  m(0, 1) = 2;
  const Subspace s = orthonormalize(m);
  ASSERT_EQ(s.dim(), 1);
  EXPECT_NEAR(std::abs(s.basis()(0, 0)), 1.0, 1e-15);
}

TEST(OrthonormalizeTest, AllZeroInputGivesTrivialSubspace) {
  EXPECT_TRUE(orthonormalize(Matrix::Zero(4, 3)).is_trivial());
}

TEST(OrthonormalizeTest, RandomFullRankMatchesProjectorResidual) {
  synth::Rng rng(11);
  std::normal_distribution<double> normal;
  Matrix m(10, 4);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  const Subspace s = orthonormalize(m);
  ASSERT_EQ(s.dim(), 4);
  EXPECT_LE(max_orthonormality_error(s.basis()), 1e-10);
  // Every input column lies in the span and vice versa.
  EXPECT_LE(oracle::max_residual(m, s.basis()) / m.colwise().norm().maxCoeff(), 1e-12);
  EXPECT_LE(oracle::max_residual(s.basis(), oracle::orth(m)), 1e-12);
}

TEST(OrthonormalizeTest, IllConditionedColumnsStayOrthonormal) {
  // Nearly dependent Hankel columns from a smooth signal.
  Matrix m(60, 12);
  for (Index i = 0; i < 60; ++i) {
    for (Index j = 0; j < 12; ++j) m(i, j) = std::sin(0.05 * static_cast<double>(i + j)) + 1e-7 * std::cos(1.3 * (i + j));
  }
  const Subspace s = orthonormalize(m, 1e-10);
  EXPECT_LE(max_orthonormality_error(s.basis()), 1e-10);
  EXPECT_LE(oracle::max_residual(m, s.basis()) / m.colwise().norm().maxCoeff(), 1e-9);
}

TEST(ProjectorTest, CoordinateLine) {
  const Matrix p = projector(span_of({{1, 0, 0}}));
  EXPECT_LE((p - Eigen::Vector3d(1, 0, 0).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ProjectorTest, TrivialIsZero) {
  EXPECT_EQ(projector(Subspace::trivial(4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ProjectorTest, RandomProjectorSpectrum) {
  synth::Rng rng(3);
  const Subspace s = synth::random_subspace(8, 3, rng);
  const Matrix p = projector(s);
  EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(p.trace(), 3.0, 1e-8);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p);
  for (Index i = 0; i < 8; ++i) EXPECT_NEAR(eig.eigenvalues()[i], i < 5 ? 0.0 : 1.0, 1e-8);
}

TEST(CanonicalStructureTest, FortyFiveDegreeLines) {
  const double r = std::sqrt(0.5);
  const CanonicalStructure cs = canonical_structure(span_of({{1, 0}}), span_of({{r, r}}));
  ASSERT_EQ(cs.size(), 1);
  EXPECT_NEAR(cs.angles[0], M_PI / 4, 1e-15);
  EXPECT_NEAR(cs.cosines[0], r, 1e-15);
  EXPECT_EQ(cs.intersection_rank, 0);
}

TEST(CanonicalStructureTest, IdenticalSubspacesHaveFullIntersection) {
  synth::Rng rng(5);
  const Subspace s = synth::random_subspace(9, 3, rng);
  const CanonicalStructure cs = canonical_structure(s, s);
  EXPECT_LE(cs.angles.cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_EQ(cs.intersection_rank, 3);
}

TEST(CanonicalStructureTest, CosinesSquaredMatchProjectorProduct) {
  synth::Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Subspace a = synth::random_subspace(20, 5, rng);
    const Subspace b = synth::random_subspace(20, 5, rng);
    const CanonicalStructure cs = canonical_structure(a, b);
    const Vector c2 = oracle::cos2_from_projectors(a.basis(), b.basis());
    EXPECT_LE((cs.cosines.array().square().matrix() - c2).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(CanonicalStructureTest, StructuralInvariants) {
  synth::Rng rng(23);
  const Subspace a = synth::random_subspace(15, 4, rng);
  const Subspace b = synth::random_subspace(15, 6, rng);
  const CanonicalStructure cs = canonical_structure(a, b);
  ASSERT_EQ(cs.size(), 4);
  for (Index i = 0; i < cs.size(); ++i) {
    EXPECT_NEAR(std::cos(cs.angles[i]), cs.cosines[i], 1e-12);
    EXPECT_GE(cs.cosines[i], 0.0);
    if (i > 0) EXPECT_LE(cs.angles[i - 1], cs.angles[i]);
    EXPECT_NEAR(cs.difference_vectors().col(i).squaredNorm(), 2 * (1 - cs.cosines[i]), 1e-12);
    EXPECT_NEAR(cs.mean_vectors().col(i).squaredNorm(), 2 * (1 + cs.cosines[i]), 1e-12);
    EXPECT_NEAR(cs.gaps[i], 1 - cs.cosines[i], 1e-12);
  }
  const Matrix cross = cs.left_vectors.transpose() * cs.right_vectors;
  EXPECT_LE((cross - Matrix(cs.cosines.asDiagonal())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CanonicalStructureTest, TinyAnglesKeepRelativePrecision) {
  const double theta = 1e-9;
  const Subspace a = span_of({{1, 0, 0}});
  const Subspace b = span_of({{std::cos(theta), std::sin(theta), 0}});
  const CanonicalStructure cs = canonical_structure(a, b, 0.0);
  EXPECT_NEAR(cs.angles[0] / theta, 1.0, 1e-6);
  EXPECT_NEAR(cs.gaps[0] / (0.5 * theta * theta), 1.0, 1e-6);
}

TEST(CanonicalStructureTest, RejectsMismatchedAndTrivialInputs) {
  EXPECT_THROW(canonical_structure(span_of({{1, 0}}), span_of({{1, 0, 0}})), DimensionMismatch);
  EXPECT_THROW(canonical_structure(Subspace::trivial(2), span_of({{1, 0}})), TrivialSubspace);
}

TEST(CanonicalStructureTest, SymmetricAndRotationInvariant) {
  synth::Rng rng(29);
  const Subspace a = synth::random_subspace(12, 3, rng);
  const Subspace b = synth::random_subspace(12, 3, rng);
  const Vector ab = canonical_structure(a, b).angles;
  const Vector ba = canonical_structure(b, a).angles;
  EXPECT_LE((ab - ba).cwiseAbs().maxCoeff(), 1e-10);

  const Matrix q = synth::random_orthogonal(12, rng);
  const Vector rotated =
      canonical_structure(Subspace::from_basis(q * a.basis()), Subspace::from_basis(q * b.basis())).angles;
  EXPECT_LE((ab - rotated).cwiseAbs().maxCoeff(), 1e-10);

  const Matrix r = synth::random_orthogonal(3, rng);
  const Vector rebased = canonical_structure(Subspace::from_basis(a.basis() * r), b).angles;
  EXPECT_LE((ab - rebased).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GeodesicDistanceTest, ClosedForms) {
  const Subspace e1 = span_of({{1, 0}});
  EXPECT_NEAR(geodesic_distance(e1, e1), 0.0, 1e-15);
  EXPECT_NEAR(geodesic_distance(e1, span_of({{0, 1}})), M_PI / 2, 1e-15);
  EXPECT_NEAR(geodesic_distance(e1, span_of({{1, 1}})), M_PI / 4, 1e-15);
}

TEST(GeodesicDistanceTest, UnequalDimensionsRejected) {
  EXPECT_THROW(geodesic_distance(span_of({{1, 0, 0}}), orthonormalize(Matrix::Identity(3, 2))),
               DimensionMismatch);
}

TEST(LargestPrincipalAngleTest, ContainmentGivesZero) {
  const Subspace line = span_of({{1, 1, 0}});
  const Subspace plane = orthonormalize(Matrix::Identity(3, 2));
  EXPECT_LE(largest_principal_angle(line, plane), 1e-15);
  EXPECT_NEAR(largest_principal_angle(span_of({{0, 0, 1}}), plane), M_PI / 2, 1e-15);
  EXPECT_LE(containment_residual(line, plane), 1e-15);
}
