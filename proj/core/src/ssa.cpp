#include "diffsub/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diffsub/parallel.hpp"

namespace dsub {

namespace {

constexpr double kRelativeEigenFloor = 1e-12;
constexpr double kCutoffGapWarn = 1e-6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string_view to_string(ScoreKind kind) {
  return kind == ScoreKind::First ? "first" : "second";
}

void validate(const SsaConfig& c) {
  if (c.window_width < 1) throw InvalidArgument("window width must be at least 1");
  if (c.num_windows < 1) throw InvalidArgument("number of windows must be at least 1");
  if (c.subspace_dim < 1 || c.subspace_dim > c.window_width) {
    throw InvalidArgument("subspace dimension must lie in [1, window width]");
  }
  if (c.lag < 1) throw InvalidArgument("lag must be at least 1");
  if (c.step < 1) throw InvalidArgument("step must be at least 1");
  if (!(c.delta > 0.0 && c.delta < 0.5)) throw InvalidArgument("delta must lie in (0, 0.5)");
  if (c.threshold) {
    if (!(c.threshold->value >= 0.0) || !std::isfinite(c.threshold->value)) {
      throw InvalidArgument("threshold must be a finite non-negative number");
    }
  }
}

Index min_series_length(const SsaConfig& c) {
  return c.window_width + c.num_windows - 1 + 2 * c.lag;
}

Matrix trajectory_matrix(const SignalSeries& h, Index t, Index w, Index m) {
  if (w < 1 || m < 1) throw InvalidArgument("trajectory_matrix: w and M must be positive");
  const Index first = t - w - m + 2;
  if (first < 1 || t > h.size()) {
    throw InvalidArgument("trajectory_matrix: t = " + std::to_string(t) +
                          " needs samples " + std::to_string(first) + ".." + std::to_string(t) +
                          " of a series of length " + std::to_string(h.size()));
  }
  Matrix out(w, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < w; ++i) out(i, j) = h.at(first + i + j);
  }
  return out;
}

SignalSubspace signal_subspace(const SignalSeries& h, Index t, const SsaConfig& c) {
  validate(c);
  const Matrix traj = trajectory_matrix(h, t, c.window_width, c.num_windows);
  Matrix gram(c.window_width, c.window_width);
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(traj);
  // The solver reads only the lower triangle.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("signal_subspace: eigensolver failed");

  const Index w = c.window_width;
  Vector values = eig.eigenvalues().reverse();
  const Matrix vectors = eig.eigenvectors().rowwise().reverse();
  const double top = std::max(values[0], 0.0);

  Index keep = 0;
  while (keep < c.subspace_dim && values[keep] > kRelativeEigenFloor * top) ++keep;

  SignalSubspace out{
      keep == 0 ? Subspace::trivial(w) : Subspace::from_basis(vectors.leftCols(keep)),
      values.cwiseMax(0.0),
      keep < c.subspace_dim,
      false,
  };
  if (keep == c.subspace_dim && keep < w) {
    const double at = values[keep - 1];
    const double below = std::max(values[keep], 0.0);
    out.ill_conditioned_cutoff = at <= 0.0 || (at - below) / at < kCutoffGapWarn;
  }
  return out;
}

AnomalyReport sliding_analysis(const SignalSeries& h, const SsaConfig& c) {
  validate(c);
  for (double x : h.samples) {
    if (!std::isfinite(x)) throw InvalidArgument("signal contains non-finite samples");
  }
  const Index needed = min_series_length(c);
  if (h.size() < needed) {
    throw InvalidArgument("series too short: need at least " + std::to_string(needed) +
                          " samples, got " + std::to_string(h.size()));
  }

  const Index tau = c.lag;
  const Index first_t = c.window_width + c.num_windows - 1 + tau;
  const Index last_t = h.size() - tau;
  std::vector<Index> ts;
  for (Index t = first_t; t <= last_t; t += c.step) ts.push_back(t);

  // Signal subspaces are needed at t - tau, t and t + tau; compute each once.
  const Index base = first_t - tau;
  std::vector<char> wanted(static_cast<std::size_t>(last_t + tau - base + 1), 0);
  for (Index t : ts) {
    wanted[static_cast<std::size_t>(t - tau - base)] = 1;
    wanted[static_cast<std::size_t>(t - base)] = 1;
    wanted[static_cast<std::size_t>(t + tau - base)] = 1;
  }
  std::vector<Index> positions;
  for (std::size_t i = 0; i < wanted.size(); ++i) {
    if (wanted[i]) positions.push_back(base + static_cast<Index>(i));
  }
  std::vector<std::optional<SignalSubspace>> cache(wanted.size());
  detail::parallel_for(static_cast<Index>(positions.size()), c.threads, [&](Index k) {
    const Index s = positions[static_cast<std::size_t>(k)];
    cache[static_cast<std::size_t>(s - base)] = signal_subspace(h, s, c);
  });

  AnomalyReport report;
  report.score = c.score;
  report.steps.resize(ts.size());
  std::vector<char> step_unequal(ts.size(), 0);
  detail::parallel_for(static_cast<Index>(ts.size()), c.threads, [&](Index k) {
    const Index t = ts[static_cast<std::size_t>(k)];
    const Subspace& prev = cache[static_cast<std::size_t>(t - tau - base)]->subspace;
    const Subspace& center = cache[static_cast<std::size_t>(t - base)]->subspace;
    const Subspace& next = cache[static_cast<std::size_t>(t + tau - base)]->subspace;
    AnomalyStep& step = report.steps[static_cast<std::size_t>(k)];
    step.t = t;
    if (prev.is_trivial() || center.is_trivial() || next.is_trivial()) {
      step.score1 = step.score2 = step.score2_orth = step.score2_along = kNaN;
      return;
    }
    const CanonicalStructure outer = canonical_structure(prev, next, c.delta);
    step.score1 = magnitude(outer, c.delta);
    step.intersection_dim = outer.intersection_rank;
    if (prev.dim() != center.dim() || center.dim() != next.dim()) {
      step_unequal[static_cast<std::size_t>(k)] = 1;
      step.score2 = second_order_magnitude(prev, center, next, c.delta);
      step.score2_orth = step.score2_along = kNaN;
      return;
    }
    try {
      const MagnitudeReport rep = magnitude_decomposition(prev, center, next, c.delta);
      step.score2 = rep.total;
      step.score2_orth = rep.orthogonal_component;
      step.score2_along = rep.along_component;
    } catch (const ProjectionIllDefined&) {
      step.score2 = second_order_magnitude(prev, center, next, c.delta);
      step.score2_orth = step.score2_along = kNaN;
    }
  });

  Index reduced = 0;
  Index ill = 0;
  for (const Index s : positions) {
    const SignalSubspace& ss = *cache[static_cast<std::size_t>(s - base)];
    reduced += ss.reduced_rank ? 1 : 0;
    ill += ss.ill_conditioned_cutoff ? 1 : 0;
  }
  if (reduced > 0) {
    report.warnings.push_back(std::to_string(reduced) +
                              " signal subspaces have rank below the requested dimension");
  }
  if (ill > 0) {
    report.warnings.push_back(std::to_string(ill) +
                              " signal subspaces have a relative eigenvalue gap below 1e-6 at the cutoff");
  }
  const auto unequal = std::count(step_unequal.begin(), step_unequal.end(), 1);
  if (unequal > 0) {
    report.warnings.push_back(std::to_string(unequal) +
                              " steps skipped the magnitude decomposition (unequal dimensions)");
  }

  if (c.threshold) {
    std::vector<double> scores(report.steps.size());
    std::vector<Index> times(report.steps.size());
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
      scores[i] = c.score == ScoreKind::First ? report.steps[i].score1 : report.steps[i].score2;
      times[i] = report.steps[i].t;
    }
    const double cutoff = c.threshold->kind == ThresholdRule::Kind::Fixed
                              ? c.threshold->value
                              : c.threshold->value * median(scores);
    report.threshold = cutoff;
    report.intervals = detect_intervals(times, scores, cutoff);
  }
  return report;
}

std::vector<Interval> detect_intervals(std::span<const Index> t, std::span<const double> scores,
                                       double threshold) {
  if (t.size() != scores.size()) throw InvalidArgument("detect_intervals: length mismatch");
  std::vector<Interval> out;
  std::optional<Interval> open;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    // NaN compares false and therefore closes any open run.
    if (s > threshold) {
      if (!open) {
        open = Interval{t[i], t[i], t[i], s};
      } else {
        open->end = t[i];
        if (s > open->peak) {
          open->peak = s;
          open->peak_t = t[i];
        }
      }
    } else if (open) {
      out.push_back(*open);
      open.reset();
    }
  }
  if (open) out.push_back(*open);
  return out;
}

double median(std::span<const double> values) {
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) return 0.0;
  const std::size_t mid = finite.size() / 2;
  std::nth_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(mid), finite.end());
  const double upper = finite[mid];
  if (finite.size() % 2 == 1) return upper;
  const double lower = *std::max_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace dsub
