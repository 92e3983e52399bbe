#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffsub/grassmann.hpp"

namespace dsub {

/// One motion-capture frame: p x 3 point coordinates.
struct PointCloudFrame {
  Matrix points;
  long frame_index = 0;
};

/// Column space of the centered p x 3 coordinate matrix, a subspace of R^p of
/// dimension <= 3. Invertible affine maps of the points leave it unchanged.
/// Coplanar or collinear frames give dimension 2 or 1. Throws DegenerateFrame
/// when every point coincides, InvalidArgument for p < 4 or non-finite input.
Subspace shape_subspace(const PointCloudFrame& frame);

enum class StepStatus {
  Ok,
  DegenerateFrame,        // a participating frame has no shape subspace
  UnequalDimension,       // decomposition skipped: subspace dimensions differ
  ProjectionIllDefined,   // decomposition skipped: center orthogonal to W
};

std::string_view to_string(StepStatus status);

struct SeriesStep {
  Index t = 0;      // position in the (strided) subspace sequence
  long frame = 0;   // frame index of the center subspace
  double mag1 = 0.0;
  double mag2 = 0.0;
  double mag2_orth = 0.0;
  double mag2_along = 0.0;
  StepStatus status = StepStatus::Ok;
};

struct ShapeSeriesResult {
  std::vector<SeriesStep> steps;
  std::vector<std::string> warnings;
};

struct ShapeConfig {
  Index stride = 4;
  Index tau = 1;
  double delta = kDefaultDelta;
  unsigned threads = 1;
};

/// First/second-order magnitudes over a sequence of subspaces: for each t with
/// t - tau and t + tau in range, mag1 = Mag(D(S[t-tau], S[t+tau])),
/// mag2 = Mag(D(S[t], M(S[t-tau], S[t+tau]))) and its decomposition.
/// Missing entries (std::nullopt) yield DegenerateFrame steps with NaN values.
ShapeSeriesResult analyze_subspace_series(const std::vector<std::optional<Subspace>>& subspaces,
                                          const std::vector<long>& frame_indices, Index tau,
                                          double delta, unsigned threads = 1);

/// Shape subspaces of every stride-th frame followed by analyze_subspace_series.
ShapeSeriesResult analyze_shape_series(const std::vector<PointCloudFrame>& frames,
                                       const ShapeConfig& config = {});

/// Pearson correlation: both series centered and scaled to unit norm, then
/// their dot product. Throws InvalidArgument on zero variance.
double normalized_correlation(std::span<const double> a, std::span<const double> b);

/// |x[i+1] - x[i-1]| / 2 for interior i; the result has size x.size() - 2.
std::vector<double> abs_central_difference(std::span<const double> x);

/// Correlation between mag2 and |central difference of mag1| over interior
/// steps t whose neighbours t - 1, t, t + 1 are all Ok.
double correlation_with_derivative(const ShapeSeriesResult& result);

}  // namespace dsub
