#pragma once

#include <string>

#include "diffsub/subspace.hpp"

namespace dsub {

/// Default eigenvalue band half-width / gap threshold.
inline constexpr double kDefaultDelta = 1e-4;

/// Orthogonal decomposition of the sum subspace obtained from the spectrum of
/// P1 + P2. With d1 <= d2 (arguments are swapped internally otherwise):
///
///   lambda >= 2 - delta            intersection I
///   1 + delta < lambda < 2 - delta principal M (reported together with I)
///   delta < lambda < 1 - delta     difference D
///   |lambda - 1| <= delta          residual Z
///   lambda <= delta                outside the sum subspace
struct DecompositionResult {
  Subspace difference;
  Subspace principal;
  Subspace intersection;
  Subspace residual_z;
  Vector eigenvalues;  // all n eigenvalues of P1 + P2, descending, clamped to [0, 2]
  double delta = kDefaultDelta;
};

/// The eigen-band decomposition disagrees in dimension with the canonical
/// angle route. Typical causes: a pair at (nearly) 90 degrees, which the
/// eigen route files under Z, or a delta that splits a cluster.
class InconsistencyError : public Error {
 public:
  InconsistencyError(const std::string& what, DecompositionResult analytic,
                     Subspace geometric_difference, Subspace geometric_principal)
      : Error(what),
        analytic_(std::move(analytic)),
        geometric_difference_(std::move(geometric_difference)),
        geometric_principal_(std::move(geometric_principal)) {}

  const DecompositionResult& analytic() const noexcept { return analytic_; }
  const Subspace& geometric_difference() const noexcept { return geometric_difference_; }
  const Subspace& geometric_principal() const noexcept { return geometric_principal_; }

 private:
  DecompositionResult analytic_;
  Subspace geometric_difference_;
  Subspace geometric_principal_;
};

/// Second-order magnitude split into the part leaving the sum subspace
/// W(S1, S3) and the part along the geodesic. The split is only approximately
/// additive, so the remainder is reported rather than dropped.
struct MagnitudeReport {
  double total = 0.0;                 // Mag(D(S2, M(S1, S3)))
  double orthogonal_component = 0.0;  // Mag(D(S2, W(S1, S3)))
  double along_component = 0.0;       // Mag(D(omega(S2), M(S1, S3)))
  double residual = 0.0;              // total - orthogonal - along
};

struct Projection {
  Subspace subspace;
  Vector singular_values;  // of W^T S, descending
  /// The argmin is a set: W^T S is rank deficient so some of the returned
  /// directions are arbitrary.
  bool non_unique = false;
};

/// Span of (u_i - v_i) / |u_i - v_i| over canonical pairs with
/// 1 - cos(theta_i) >= delta.
Subspace difference_subspace(const Subspace& s1, const Subspace& s2,
                             double delta = kDefaultDelta);

/// Span of the normalized canonical means (u_i + v_i) / |u_i + v_i|, with the
/// shared vector itself for zero angles. Dimension min(d1, d2).
Subspace principal_component_subspace(const Subspace& s1, const Subspace& s2,
                                      double angle_tol = kDefaultAngleTol);

/// S1 + S2. Directions of S2 whose distance from S1 is below the zero-angle
/// threshold are not added, so dim = d1 + d2 - r with r the intersection rank
/// reported by canonical_structure at the same angle_tol.
Subspace sum_subspace(const Subspace& s1, const Subspace& s2,
                      double angle_tol = kDefaultAngleTol);

/// Eigen-band decomposition of P1 + P2, cross-checked against the canonical
/// angle route. Throws InconsistencyError when band dimensions disagree.
DecompositionResult analytic_decompose(const Subspace& s1, const Subspace& s2,
                                       double delta = kDefaultDelta);

/// Sum of 2 (1 - cos theta_i) over pairs retained by difference_subspace.
double magnitude(const Subspace& s1, const Subspace& s2, double delta = kDefaultDelta);

/// Same sum from an already computed canonical structure.
double magnitude(const CanonicalStructure& cs, double delta = kDefaultDelta);

Subspace second_order_difference_subspace(const Subspace& s1, const Subspace& s2,
                                          const Subspace& s3,
                                          double delta = kDefaultDelta);

double second_order_magnitude(const Subspace& s1, const Subspace& s2, const Subspace& s3,
                              double delta = kDefaultDelta);

/// Point at parameter t on the geodesic from s1 (t = 0) to s2 (t = 1).
/// Each canonical angle is scaled by t; t outside [0, 1] extrapolates.
Subspace geodesic(const Subspace& s1, const Subspace& s2, double t);

/// Closest dim(s)-dimensional subspace of w in geodesic distance: span(W U1)
/// from the SVD W^T S = U Sigma V^T.
Projection subspace_project(const Subspace& s, const Subspace& w);

MagnitudeReport magnitude_decomposition(const Subspace& s1, const Subspace& s2,
                                        const Subspace& s3, double delta = kDefaultDelta);

}  // namespace dsub
