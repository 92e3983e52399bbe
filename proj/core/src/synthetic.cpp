#include "diffsub/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diffsub/grassmann.hpp"

namespace dsub::synth {

namespace {

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

// Thin Q of a Gaussian matrix with the sign of R's diagonal fixed positive,
// which makes the distribution Haar.
Matrix haar_columns(Index rows, Index cols, Rng& rng) {
  const Matrix g = gaussian(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Eigen::Matrix3d rotation_z(double angle) {
  Eigen::Matrix3d r;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

}  // namespace

Matrix random_orthogonal(Index d, Rng& rng) {
  if (d < 1) throw InvalidArgument("random_orthogonal: dimension must be positive");
  return haar_columns(d, d, rng);
}

Subspace random_subspace(Index n, Index d, Rng& rng) {
  if (n < 1 || d < 0 || d > n) throw InvalidArgument("random_subspace: need 0 <= d <= n");
  if (d == 0) return Subspace::trivial(n);
  return Subspace::from_basis(haar_columns(n, d, rng));
}

double SpeedProfile::factor(Index step) const {
  switch (kind) {
    case Kind::Constant:
      return 1.0;
    case Kind::Sinusoidal:
      return 1.0 + amplitude * std::sin(2.0 * M_PI * static_cast<double>(step) / period);
    case Kind::Piecewise: {
      double f = 1.0;
      for (const auto& [first, value] : pieces) {
        if (step >= first) f = value;
      }
      return f;
    }
  }
  return 1.0;
}

GeodesicTrajectory gen_geodesic_trajectory(const TrajectorySpec& spec) {
  const Index n = spec.ambient_dim;
  const Index d = spec.subspace_dim;
  if (d < 1) throw InvalidArgument("trajectory: subspace dimension must be positive");
  if (n < 2 * d) throw InvalidArgument("trajectory: ambient dimension must be at least 2 * d");
  if (spec.num_steps < 1) throw InvalidArgument("trajectory: need at least one step");
  if (spec.speed.kind == SpeedProfile::Kind::Sinusoidal && !(spec.speed.period > 0.0)) {
    throw InvalidArgument("trajectory: sinusoidal period must be positive");
  }
  if (!(spec.off_geodesic_amplitude >= 0.0)) {
    throw InvalidArgument("trajectory: off-geodesic amplitude must be non-negative");
  }
  const bool perturb = spec.off_geodesic_amplitude > 0.0;
  if (perturb && n < 3 * d) {
    throw InvalidArgument("trajectory: off-geodesic perturbation needs n >= 3 * d");
  }

  Rng rng(spec.seed);
  // One Haar draw gives both endpoints and, if needed, the escape directions,
  // all mutually orthogonal before the endpoint is mixed in.
  const Matrix q = haar_columns(n, perturb ? 3 * d : 2 * d, rng);
  const Matrix a = q.leftCols(d);
  const Matrix rot = random_orthogonal(d, rng);
  std::uniform_real_distribution<double> angle_dist(0.3, 1.3);
  Matrix b(n, d);
  for (Index i = 0; i < d; ++i) {
    const double theta = angle_dist(rng);
    b.col(i) = std::cos(theta) * a.col(i) + std::sin(theta) * q.col(d + i);
  }
  b = b * rot;

  GeodesicTrajectory out{{}, {}, Subspace::from_basis(a), Subspace::from_basis(b)};
  std::normal_distribution<double> normal(0.0, 1.0);
  double position = 0.0;
  for (Index k = 0; k < spec.num_steps; ++k) {
    if (k > 0) position += spec.step_length * spec.speed.factor(k);
    Subspace s = geodesic(out.start, out.end, position);
    if (perturb) {
      const double eps = spec.off_geodesic_amplitude * normal(rng);
      const Matrix moved = std::cos(eps) * s.basis() + std::sin(eps) * q.rightCols(d);
      s = Subspace::from_basis(detail::polish_basis(moved));
    }
    out.subspaces.push_back(std::move(s));
    out.positions.push_back(position);
  }
  return out;
}

std::vector<PointCloudFrame> gen_point_cloud_motion(const MotionSpec& spec) {
  if (spec.num_points < 8) throw InvalidArgument("motion: need at least 8 points");
  if (spec.num_frames < 1) throw InvalidArgument("motion: need at least one frame");
  if (!(spec.joint_period > 0.0)) throw InvalidArgument("motion: joint period must be positive");

  Rng rng(spec.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Index p = spec.num_points;
  const Index first = p / 2;
  // Segment A around the origin, segment B hanging off a hinge at (1, 0, 0)
  // and extending along +x in its local frame.
  Matrix local(p, 3);
  for (Index i = 0; i < p; ++i) {
    const double along = i < first ? unit(rng) : 1.0 + std::abs(unit(rng)) * 1.5;
    local(i, 0) = along;
    local(i, 1) = 0.4 * unit(rng);
    local(i, 2) = 0.4 * unit(rng);
  }
  const Eigen::Vector3d hinge(1.0, 0.0, 0.0);
  Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
  axis.normalize();

  std::vector<PointCloudFrame> frames;
  frames.reserve(static_cast<std::size_t>(spec.num_frames));
  for (Index f = 0; f < spec.num_frames; ++f) {
    const double phase = 2.0 * M_PI * static_cast<double>(f) / spec.joint_period;
    const double joint = spec.joint_base + spec.joint_amplitude * std::sin(phase);
    const Eigen::Matrix3d bend = rotation_z(joint);
    const Eigen::Matrix3d global =
        Eigen::AngleAxisd(spec.global_rotation_rate * static_cast<double>(f), axis).toRotationMatrix();
    Matrix pts(p, 3);
    for (Index i = 0; i < p; ++i) {
      Eigen::Vector3d x = local.row(i).transpose();
      if (i >= first) x = hinge + bend * (x - hinge);
      pts.row(i) = (global * x).transpose();
    }
    frames.push_back({std::move(pts), static_cast<long>(f)});
  }
  return frames;
}

GeneratedSignal gen_signal(const std::vector<SignalSegment>& segments,
                           const std::vector<ChirpBurst>& bursts, double noise_sd,
                           std::uint64_t seed) {
  if (segments.empty()) throw InvalidArgument("signal: need at least one segment");
  if (!(noise_sd >= 0.0)) throw InvalidArgument("signal: noise_sd must be non-negative");
  GeneratedSignal out;
  Index t = 1;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const SignalSegment& seg = segments[k];
    if (seg.length < 1) throw InvalidArgument("signal: segment length must be positive");
    if (seg.kind == SignalSegment::Kind::Harmonic && (!(seg.period > 0.0) || seg.harmonics < 1)) {
      throw InvalidArgument("signal: harmonic segment needs a positive period and harmonic count");
    }
    if (k > 0) out.boundaries.push_back(t);
    for (Index i = 0; i < seg.length; ++i, ++t) {
      const double x = static_cast<double>(t);
      double v = 0.0;
      switch (seg.kind) {
        case SignalSegment::Kind::Sinusoid:
          v = seg.amplitude * std::sin(2.0 * M_PI * seg.frequency * x + seg.phase);
          break;
        case SignalSegment::Kind::Harmonic:
          for (Index h = 1; h <= seg.harmonics; ++h) {
            const double hd = static_cast<double>(h);
            v += seg.amplitude * std::sin(2.0 * M_PI * hd * x / seg.period + seg.phase) /
                 std::pow(hd, seg.decay);
          }
          break;
        case SignalSegment::Kind::Constant:
          v = seg.amplitude;
          break;
      }
      out.series.samples.push_back(v);
    }
  }
  const Index total = t - 1;
  for (const ChirpBurst& b : bursts) {
    if (b.length < 1 || b.start < 1 || b.start + b.length - 1 > total) {
      throw InvalidArgument("signal: chirp burst outside the series");
    }
    for (Index i = 0; i < b.length; ++i) {
      const double tt = static_cast<double>(i);
      const double span = static_cast<double>(b.length);
      // Instantaneous frequency sweeps linearly from f0 to f1.
      const double phase = 2.0 * M_PI * (b.f0 * tt + 0.5 * (b.f1 - b.f0) * tt * tt / span);
      out.series.samples[static_cast<std::size_t>(b.start - 1 + i)] += b.amplitude * std::sin(phase);
    }
    out.bursts.emplace_back(b.start, b.start + b.length);
  }
  if (noise_sd > 0.0) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, noise_sd);
    for (double& v : out.series.samples) v += normal(rng);
  }
  return out;
}

double projection_argmin_oracle(const Subspace& s, const Subspace& w, Index num_samples,
                                std::uint64_t seed) {
  if (s.dim() > w.dim()) throw DimensionMismatch("oracle: dim(S) exceeds dim(W)");
  if (num_samples < 1) throw InvalidArgument("oracle: need at least one sample");
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < num_samples; ++k) {
    const Matrix coeffs = haar_columns(w.dim(), s.dim(), rng);
    const Subspace candidate = Subspace::from_basis(detail::polish_basis(w.basis() * coeffs));
    best = std::min(best, geodesic_distance(s, candidate));
  }
  return best;
}

PlantedPair planted_intersection_pair(Index n, Index d1, Index d2, Index r, double angle_min,
                                      double angle_max, std::uint64_t seed) {
  if (!(0 <= r && r <= d1 && d1 <= d2)) throw InvalidArgument("planted pair: need r <= d1 <= d2");
  if (d1 < 1) throw InvalidArgument("planted pair: d1 must be positive");
  const Index pairs = d1 - r;
  const Index extra = d2 - d1;
  const Index total = r + 2 * pairs + extra;
  if (total > n) throw InvalidArgument("planted pair: d1 + d2 - r exceeds n");
  if (!(0.0 < angle_min && angle_min <= angle_max && angle_max <= M_PI_2)) {
    throw InvalidArgument("planted pair: need 0 < angle_min <= angle_max <= pi/2");
  }

  Rng rng(seed);
  const Matrix q = haar_columns(n, total, rng);
  std::uniform_real_distribution<double> angle_dist(angle_min, angle_max);
  std::vector<double> angles(static_cast<std::size_t>(pairs));
  for (double& a : angles) a = angle_dist(rng);
  std::sort(angles.begin(), angles.end());

  PlantedPair out{
      Subspace::trivial(n), Subspace::trivial(n),
      q.leftCols(r), Vector(pairs), q.middleCols(r, pairs), Matrix(n, pairs),
      q.rightCols(extra),
  };
  for (Index i = 0; i < pairs; ++i) {
    const double th = angles[static_cast<std::size_t>(i)];
    out.angles[i] = th;
    out.v.col(i) = std::cos(th) * q.col(r + i) + std::sin(th) * q.col(r + pairs + i);
  }
  Matrix phi(n, d1);
  phi << out.intersection, out.u;
  Matrix psi(n, d2);
  psi << out.intersection, out.v, out.z;
  out.s1 = Subspace::from_basis(detail::polish_basis(phi * random_orthogonal(d1, rng)));
  out.s2 = Subspace::from_basis(detail::polish_basis(psi * random_orthogonal(d2, rng)));
  return out;
}

}  // namespace dsub::synth
