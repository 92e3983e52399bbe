#include <cmath>

#include <gtest/gtest.h>

#include "diffsub/synthetic.hpp"
#include "support/oracles.hpp"

using namespace dsub;

TEST(RandomOrthogonalTest, IsOrthogonal) {
  synth::Rng rng(1);
  const Matrix q = synth::random_orthogonal(7, rng);
  EXPECT_LE((q.transpose() * q - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RandomSubspaceTest, DimensionsAndSeedDeterminism) {
  synth::Rng a(42), b(42);
  const Subspace s = synth::random_subspace(10, 3, a);
  const Subspace t = synth::random_subspace(10, 3, b);
  EXPECT_EQ(s.dim(), 3);
  EXPECT_EQ(s.ambient_dim(), 10);
  EXPECT_EQ(s.basis(), t.basis());
}

TEST(SpeedProfileTest, Factors) {
  synth::SpeedProfile p;
  EXPECT_EQ(p.factor(17), 1.0);
  p.kind = synth::SpeedProfile::Kind::Sinusoidal;
  p.amplitude = 0.5;
  p.period = 4;
  EXPECT_NEAR(p.factor(1), 1.5, 1e-15);
  p = {};
  p.kind = synth::SpeedProfile::Kind::Piecewise;
  p.pieces = {{10, 2.0}, {20, 0.5}};
  EXPECT_EQ(p.factor(5), 1.0);
  EXPECT_EQ(p.factor(10), 2.0);
  EXPECT_EQ(p.factor(25), 0.5);
}

TEST(GeodesicTrajectoryTest, PositionsFollowSpeedAndStayOnGeodesic) {
  synth::TrajectorySpec spec;
  spec.ambient_dim = 12;
  spec.subspace_dim = 2;
  spec.num_steps = 30;
  spec.step_length = 0.02;
  spec.speed.kind = synth::SpeedProfile::Kind::Sinusoidal;
  spec.speed.amplitude = 0.3;
  spec.speed.period = 10;
  spec.seed = 5;
  const auto traj = synth::gen_geodesic_trajectory(spec);
  ASSERT_EQ(traj.subspaces.size(), 30u);
  for (std::size_t k = 0; k < traj.subspaces.size(); ++k) {
    const Subspace expected = geodesic(traj.start, traj.end, traj.positions[k]);
    EXPECT_LE(oracle::span_distance(expected.basis(), traj.subspaces[k].basis()), 1e-10) << k;
  }
  for (std::size_t k = 1; k < traj.positions.size(); ++k) EXPECT_GT(traj.positions[k], traj.positions[k - 1]);
}

TEST(GeodesicTrajectoryTest, OffGeodesicLeavesSumSubspace) {
  synth::TrajectorySpec spec;
  spec.ambient_dim = 12;
  spec.subspace_dim = 2;
  spec.num_steps = 10;
  spec.off_geodesic_amplitude = 0.05;
  spec.seed = 6;
  const auto traj = synth::gen_geodesic_trajectory(spec);
  const Subspace w = sum_subspace(traj.start, traj.end);
  double worst = 0.0;
  for (const Subspace& s : traj.subspaces) worst = std::max(worst, oracle::max_residual(s.basis(), w.basis()));
  EXPECT_GT(worst, 1e-3);
}

TEST(PointCloudMotionTest, ShapeAndFrameIndices) {
  synth::MotionSpec spec;
  spec.num_points = 10;
  spec.num_frames = 5;
  const auto frames = synth::gen_point_cloud_motion(spec);
  ASSERT_EQ(frames.size(), 5u);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    EXPECT_EQ(frames[i].points.rows(), 10);
    EXPECT_EQ(frames[i].points.cols(), 3);
    EXPECT_EQ(frames[i].frame_index, static_cast<long>(i));
  }
}

TEST(GenSignalTest, SegmentsBoundariesAndBursts) {
  synth::SignalSegment a;
  a.kind = synth::SignalSegment::Kind::Constant;
  a.length = 5;
  a.amplitude = 2.0;
  synth::SignalSegment b = a;
  b.length = 3;
  b.amplitude = -1.0;
  synth::ChirpBurst burst;
  burst.start = 2;
  burst.length = 2;
  burst.f0 = 0.25;
  burst.f1 = 0.25;
  const auto g = synth::gen_signal({a, b}, {burst}, 0.0, 0);
  ASSERT_EQ(g.series.size(), 8);
  EXPECT_EQ(g.boundaries, std::vector<Index>{6});
  EXPECT_EQ(g.series.at(1), 2.0);
  EXPECT_NEAR(g.series.at(2), 2.0, 1e-15);
  EXPECT_NEAR(g.series.at(3), 3.0, 1e-15);
  EXPECT_EQ(g.series.at(6), -1.0);
  ASSERT_EQ(g.bursts.size(), 1u);
  EXPECT_EQ(g.bursts[0], std::make_pair(Index{2}, Index{4}));
  EXPECT_THROW(synth::gen_signal({a}, {synth::ChirpBurst{4, 5}}, 0.0, 0), InvalidArgument);
}

TEST(GenSignalTest, NoiseIsSeeded) {
  synth::SignalSegment a;
  a.length = 50;
  const auto x = synth::gen_signal({a}, {}, 0.1, 9);
  const auto y = synth::gen_signal({a}, {}, 0.1, 9);
  const auto z = synth::gen_signal({a}, {}, 0.1, 10);
  EXPECT_EQ(x.series.samples, y.series.samples);
  EXPECT_NE(x.series.samples, z.series.samples);
}

TEST(PlantedPairTest, RecoversPlantedStructure) {
  const auto p = synth::planted_intersection_pair(20, 5, 7, 2, 0.2, 1.2, 3);
  EXPECT_EQ(p.s1.dim(), 5);
  EXPECT_EQ(p.s2.dim(), 7);
  const Vector c2 = oracle::cos2_from_projectors(p.s1.basis(), p.s2.basis());
  EXPECT_NEAR(c2[0], 1.0, 1e-10);
  EXPECT_NEAR(c2[1], 1.0, 1e-10);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(c2[2 + i], std::pow(std::cos(p.angles[i]), 2), 1e-10);
  EXPECT_LE(oracle::max_residual(p.intersection, p.s1.basis()), 1e-12);
  EXPECT_LE(oracle::max_residual(p.z, p.s2.basis()), 1e-12);
  EXPECT_LE((p.z.transpose() * p.s1.basis()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProjectionOracleTest, UpperBoundsTrueProjection) {
  synth::Rng rng(12);
  const Subspace w = synth::random_subspace(10, 4, rng);
  const Subspace s = synth::random_subspace(10, 2, rng);
  const double sampled = synth::projection_argmin_oracle(s, w, 2000, 1);
  const double exact = geodesic_distance(s, subspace_project(s, w).subspace);
  EXPECT_GE(sampled, exact - 1e-12);
  EXPECT_LE(sampled, exact + 0.5);
}
