#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "diffsub/shape.hpp"
#include "diffsub/ssa.hpp"
#include "diffsub/subspace.hpp"

namespace dsub::synth {

using Rng = std::mt19937_64;

/// Haar-distributed d x d orthogonal matrix.
Matrix random_orthogonal(Index d, Rng& rng);

/// Uniformly distributed d-dimensional subspace of R^n.
Subspace random_subspace(Index n, Index d, Rng& rng);

/// Per-step multiplier applied to the base geodesic step length.
struct SpeedProfile {
  enum class Kind { Constant, Sinusoidal, Piecewise };
  Kind kind = Kind::Constant;
  double amplitude = 0.0;  // sinusoidal: factor 1 + amplitude * sin(2 pi k / period)
  double period = 1.0;
  /// piecewise: (first step, factor) pairs with ascending first steps; steps
  /// before the first breakpoint use factor 1.
  std::vector<std::pair<Index, double>> pieces;

  double factor(Index step) const;
};

struct TrajectorySpec {
  Index ambient_dim = 20;
  Index subspace_dim = 3;
  Index num_steps = 100;
  /// Geodesic parameter advance per step at unit speed (the endpoints of the
  /// underlying geodesic sit at parameter 0 and 1).
  double step_length = 0.01;
  SpeedProfile speed;
  /// Per-step rotation angle (radians, scaled by a standard normal draw) of
  /// each basis vector toward a fixed direction orthogonal to the sum
  /// subspace of the geodesic endpoints.
  double off_geodesic_amplitude = 0.0;
  std::uint64_t seed = 0;
};

struct GeodesicTrajectory {
  std::vector<Subspace> subspaces;
  std::vector<double> positions;  // geodesic parameter of each step
  Subspace start;
  Subspace end;
};

GeodesicTrajectory gen_geodesic_trajectory(const TrajectorySpec& spec);

/// Two rigid point segments joined at a hinge, with a time-varying hinge angle
/// and an optional global rotation about a fixed axis.
struct MotionSpec {
  Index num_points = 20;  // split evenly between the two segments
  Index num_frames = 200;
  double joint_base = 0.6;       // radians
  double joint_amplitude = 0.0;  // radians
  double joint_period = 40.0;    // frames
  double global_rotation_rate = 0.0;  // radians per frame
  std::uint64_t seed = 0;
};

std::vector<PointCloudFrame> gen_point_cloud_motion(const MotionSpec& spec);

struct SignalSegment {
  enum class Kind { Sinusoid, Harmonic, Constant };
  Kind kind = Kind::Sinusoid;
  Index length = 0;
  double amplitude = 1.0;
  double frequency = 0.05;  // cycles per sample (sinusoid)
  double phase = 0.0;
  double period = 50.0;      // samples (harmonic)
  Index harmonics = 20;      // harmonic: sum_k amplitude * sin(2 pi k t / period) / k^decay
  double decay = 2.0;
};

/// Linear chirp added on top of the segments over [start, start + length).
struct ChirpBurst {
  Index start = 1;  // 1-based sample index
  Index length = 0;
  double amplitude = 1.0;
  double f0 = 0.05;
  double f1 = 0.2;
};

struct GeneratedSignal {
  SignalSeries series;
  std::vector<Index> boundaries;   // first sample of every segment after the first
  std::vector<std::pair<Index, Index>> bursts;  // (onset, offset) with offset the first sample after
};

GeneratedSignal gen_signal(const std::vector<SignalSegment>& segments,
                           const std::vector<ChirpBurst>& bursts, double noise_sd,
                           std::uint64_t seed);

/// Minimum geodesic distance from s to num_samples random dim(s)-dimensional
/// subspaces of w. An upper bound for the distance to the true projection.
double projection_argmin_oracle(const Subspace& s, const Subspace& w, Index num_samples,
                                std::uint64_t seed);

struct PlantedPair {
  Subspace s1;
  Subspace s2;
  Matrix intersection;  // n x r orthonormal
  Vector angles;        // d1 - r nonzero canonical angles, ascending
  Matrix u;             // canonical vectors in s1 for the nonzero angles
  Matrix v;             // their partners in s2
  Matrix z;             // n x (d2 - d1) part of s2 orthogonal to everything else
};

/// Subspaces of dimensions d1 <= d2 sharing an r-dimensional intersection,
/// with d1 - r canonical angles drawn uniformly from [angle_min, angle_max] and
/// a (d2 - d1)-dimensional block orthogonal to all canonical directions.
/// Bases are returned in randomly rotated form.
PlantedPair planted_intersection_pair(Index n, Index d1, Index d2, Index r, double angle_min,
                                      double angle_max, std::uint64_t seed);

}  // namespace dsub::synth
