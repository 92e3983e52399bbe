#include "diffsub/shape.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "diffsub/parallel.hpp"

namespace dsub {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Subspace shape_subspace(const PointCloudFrame& frame) {
  const Matrix& pts = frame.points;
  if (pts.cols() != 3) throw InvalidArgument("point cloud frame must have three columns");
  if (pts.rows() < 4) throw InvalidArgument("point cloud frame needs at least four points");
  if (!pts.allFinite()) throw InvalidArgument("point cloud frame has non-finite coordinates");

  const Eigen::RowVector3d centroid = pts.colwise().mean();
  const Matrix centered = pts.rowwise() - centroid;
  const double scale = pts.cwiseAbs().maxCoeff();
  // Coincident points leave only rounding noise after centering.
  if (scale == 0.0 || centered.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    throw DegenerateFrame("degenerate frame " + std::to_string(frame.frame_index) +
                          ": all points coincide");
  }
  return orthonormalize(centered);
}

std::string_view to_string(StepStatus status) {
  switch (status) {
    case StepStatus::Ok: return "ok";
    case StepStatus::DegenerateFrame: return "degenerate_frame";
    case StepStatus::UnequalDimension: return "unequal_dim";
    case StepStatus::ProjectionIllDefined: return "projection_ill_defined";
  }
  return "unknown";
}

ShapeSeriesResult analyze_subspace_series(const std::vector<std::optional<Subspace>>& subspaces,
                                          const std::vector<long>& frame_indices, Index tau,
                                          double delta, unsigned threads) {
  if (tau < 1) throw InvalidArgument("tau must be at least 1");
  if (frame_indices.size() != subspaces.size()) {
    throw InvalidArgument("frame index list does not match the subspace sequence");
  }
  const Index count = static_cast<Index>(subspaces.size());
  ShapeSeriesResult result;
  if (count < 2 * tau + 1) {
    throw InvalidArgument("need at least 2 * tau + 1 subspaces, got " + std::to_string(count));
  }

  const Index num_steps = count - 2 * tau;
  result.steps.resize(static_cast<std::size_t>(num_steps));
  detail::parallel_for(num_steps, threads, [&](Index k) {
    const Index t = k + tau;
    SeriesStep& step = result.steps[static_cast<std::size_t>(k)];
    step.t = t;
    step.frame = frame_indices[static_cast<std::size_t>(t)];
    const auto& prev = subspaces[static_cast<std::size_t>(t - tau)];
    const auto& center = subspaces[static_cast<std::size_t>(t)];
    const auto& next = subspaces[static_cast<std::size_t>(t + tau)];
    if (!prev || !center || !next) {
      step.status = StepStatus::DegenerateFrame;
      step.mag1 = step.mag2 = step.mag2_orth = step.mag2_along = kNaN;
      return;
    }
    step.mag1 = magnitude(*prev, *next, delta);
    if (prev->dim() != center->dim() || center->dim() != next->dim()) {
      step.status = StepStatus::UnequalDimension;
      step.mag2 = second_order_magnitude(*prev, *center, *next, delta);
      step.mag2_orth = step.mag2_along = kNaN;
      return;
    }
    try {
      const MagnitudeReport rep = magnitude_decomposition(*prev, *center, *next, delta);
      step.mag2 = rep.total;
      step.mag2_orth = rep.orthogonal_component;
      step.mag2_along = rep.along_component;
    } catch (const ProjectionIllDefined&) {
      step.status = StepStatus::ProjectionIllDefined;
      step.mag2 = second_order_magnitude(*prev, *center, *next, delta);
      step.mag2_orth = step.mag2_along = kNaN;
    }
  });

  for (const SeriesStep& s : result.steps) {
    if (s.status != StepStatus::Ok) {
      result.warnings.push_back("step " + std::to_string(s.t) + " (frame " +
                                std::to_string(s.frame) + "): " + std::string(to_string(s.status)));
    }
  }
  return result;
}

ShapeSeriesResult analyze_shape_series(const std::vector<PointCloudFrame>& frames,
                                       const ShapeConfig& config) {
  if (config.stride < 1) throw InvalidArgument("stride must be at least 1");
  if (config.tau < 1) throw InvalidArgument("tau must be at least 1");
  if (!(config.delta > 0.0 && config.delta < 0.5)) {
    throw InvalidArgument("delta must lie in (0, 0.5)");
  }
  const Index strided = (static_cast<Index>(frames.size()) + config.stride - 1) / config.stride;
  if (strided < 2 * config.tau + 1) {
    throw InvalidArgument("need at least " + std::to_string(2 * config.tau + 1) +
                          " strided frames, got " + std::to_string(strided));
  }
  const Index points = frames.front().points.rows();
  for (const PointCloudFrame& f : frames) {
    if (f.points.rows() != points) {
      throw InvalidArgument("frame " + std::to_string(f.frame_index) +
                            " has a different number of points");
    }
  }

  std::vector<std::optional<Subspace>> subspaces(static_cast<std::size_t>(strided));
  std::vector<long> indices(static_cast<std::size_t>(strided));
  std::vector<std::string> reasons(static_cast<std::size_t>(strided));
  detail::parallel_for(strided, config.threads, [&](Index k) {
    const PointCloudFrame& f = frames[static_cast<std::size_t>(k * config.stride)];
    indices[static_cast<std::size_t>(k)] = f.frame_index;
    try {
      Subspace s = shape_subspace(f);
      if (s.dim() < 3) {
        reasons[static_cast<std::size_t>(k)] = "frame " + std::to_string(f.frame_index) +
                                               ": reduced shape rank " + std::to_string(s.dim());
      }
      subspaces[static_cast<std::size_t>(k)] = std::move(s);
    } catch (const DegenerateFrame& e) {
      reasons[static_cast<std::size_t>(k)] = e.what();
    }
  });

  ShapeSeriesResult result =
      analyze_subspace_series(subspaces, indices, config.tau, config.delta, config.threads);
  std::vector<std::string> warnings;
  for (std::string& r : reasons) {
    if (!r.empty()) warnings.push_back(std::move(r));
  }
  warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
  result.warnings = std::move(warnings);
  return result;
}

double normalized_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("normalized_correlation: length mismatch");
  if (a.size() < 2) throw InvalidArgument("normalized_correlation: need at least two samples");
  const Eigen::Map<const Vector> va(a.data(), static_cast<Index>(a.size()));
  const Eigen::Map<const Vector> vb(b.data(), static_cast<Index>(b.size()));
  const Vector ca = va.array() - va.mean();
  const Vector cb = vb.array() - vb.mean();
  const double na = ca.norm();
  const double nb = cb.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw InvalidArgument("zero variance");
  return ca.dot(cb) / (na * nb);
}

std::vector<double> abs_central_difference(std::span<const double> x) {
  if (x.size() < 3) throw InvalidArgument("central difference needs at least three samples");
  std::vector<double> out(x.size() - 2);
  for (std::size_t i = 1; i + 1 < x.size(); ++i) out[i - 1] = 0.5 * std::abs(x[i + 1] - x[i - 1]);
  return out;
}

double correlation_with_derivative(const ShapeSeriesResult& result) {
  const auto& steps = result.steps;
  std::vector<double> derivative;
  std::vector<double> accel;
  for (std::size_t i = 1; i + 1 < steps.size(); ++i) {
    const SeriesStep& a = steps[i - 1];
    const SeriesStep& b = steps[i];
    const SeriesStep& c = steps[i + 1];
    if (a.status != StepStatus::Ok || b.status != StepStatus::Ok || c.status != StepStatus::Ok) {
      continue;
    }
    if (a.t + 1 != b.t || b.t + 1 != c.t) continue;
    derivative.push_back(0.5 * std::abs(c.mag1 - a.mag1));
    accel.push_back(b.mag2);
  }
  if (accel.size() < 3) throw InvalidArgument("correlation_with_derivative: fewer than three usable steps");
  return normalized_correlation(accel, derivative);
}

}  // namespace dsub
