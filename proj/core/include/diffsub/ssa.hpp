#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffsub/grassmann.hpp"

namespace dsub {

/// Samples h(1), ..., h(T); h(t) is samples[t - 1].
struct SignalSeries {
  std::vector<double> samples;

  Index size() const noexcept { return static_cast<Index>(samples.size()); }
  double at(Index t) const { return samples[static_cast<std::size_t>(t - 1)]; }
};

enum class ScoreKind { First, Second };

std::string_view to_string(ScoreKind kind);

/// Either a fixed cutoff or a multiple of the median of the selected score.
struct ThresholdRule {
  enum class Kind { Fixed, MedianMultiple };
  Kind kind = Kind::Fixed;
  double value = 0.0;
};

struct SsaConfig {
  Index window_width = 100;  // w
  Index num_windows = 220;   // M
  Index subspace_dim = 40;   // d_s
  Index lag = 16;            // tau
  double delta = 1e-4;
  Index step = 1;
  std::optional<ThresholdRule> threshold;
  ScoreKind score = ScoreKind::First;
  unsigned threads = 1;
};

/// Throws InvalidArgument when the configuration is malformed.
void validate(const SsaConfig& config);

/// Samples needed for a single analysis step: w + M - 1 + 2 tau.
Index min_series_length(const SsaConfig& config);

/// w x M Hankel matrix with entry (i, j) = h(t - w - M + i + j), 1-based i, j.
Matrix trajectory_matrix(const SignalSeries& h, Index t, Index window_width, Index num_windows);

struct SignalSubspace {
  Subspace subspace;
  Vector eigenvalues;  // of H H^T, descending
  /// Fewer than subspace_dim eigenvalues exceed 1e-12 times the largest.
  bool reduced_rank = false;
  /// Relative eigenvalue gap at the cutoff is below 1e-6.
  bool ill_conditioned_cutoff = false;
};

/// Span of the top subspace_dim eigenvectors of H_t H_t^T.
SignalSubspace signal_subspace(const SignalSeries& h, Index t, const SsaConfig& config);

struct AnomalyStep {
  Index t = 0;
  double score1 = 0.0;
  double score2 = 0.0;
  double score2_orth = 0.0;
  double score2_along = 0.0;
  Index intersection_dim = 0;
};

struct Interval {
  Index start = 0;
  Index end = 0;  // inclusive
  Index peak_t = 0;
  double peak = 0.0;
};

struct AnomalyReport {
  std::vector<AnomalyStep> steps;
  std::vector<Interval> intervals;
  std::optional<double> threshold;  // resolved cutoff, if any was requested
  ScoreKind score = ScoreKind::First;
  std::vector<std::string> warnings;
};

/// For every t from w + M - 1 + tau to T - tau (stepped by config.step):
/// score1 = Mag(D(S[t-tau], S[t+tau])), score2 = Mag(D(S[t], M(S[t-tau], S[t+tau])))
/// with its along/orthogonal split, and intersection_dim = number of
/// canonical pairs of (S[t-tau], S[t+tau]) with 1 - cos below delta.
/// Intervals are filled when config.threshold is set.
AnomalyReport sliding_analysis(const SignalSeries& h, const SsaConfig& config);

/// Maximal runs of consecutive entries with score > threshold. `t` holds the
/// time stamp of each score.
std::vector<Interval> detect_intervals(std::span<const Index> t, std::span<const double> scores,
                                       double threshold);

/// Median of the finite entries; 0 when there are none.
double median(std::span<const double> values);

}  // namespace dsub
