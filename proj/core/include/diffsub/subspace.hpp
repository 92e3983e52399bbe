#pragma once

#include <Eigen/Dense>

#include "diffsub/errors.hpp"

namespace dsub {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kOrthonormalityTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-10;
/// Canonical pairs with 1 - cos(theta) at or below this are treated as shared
/// directions.
inline constexpr double kDefaultAngleTol = 1e-10;

/// A linear subspace of R^n held through a column-orthonormal basis.
///
/// `dim() == 0` is the trivial subspace {0}; it is a legal value (returned by
/// e.g. the difference subspace of two equal subspaces) but most operations
/// reject it as an input.
class Subspace {
 public:
  /// Wraps an already orthonormal basis. Throws InvalidArgument when
  /// |B^T B - I|_max exceeds `tol` or the matrix has no rows.
  static Subspace from_basis(Matrix basis, double tol = kOrthonormalityTol);

  static Subspace trivial(Index ambient_dim);

  Index ambient_dim() const noexcept { return ambient_dim_; }
  Index dim() const noexcept { return basis_.cols(); }
  bool is_trivial() const noexcept { return basis_.cols() == 0; }
  const Matrix& basis() const noexcept { return basis_; }

 private:
  Subspace(Matrix basis, Index ambient_dim)
      : basis_(std::move(basis)), ambient_dim_(ambient_dim) {}

  Matrix basis_;
  Index ambient_dim_;
};

/// Canonical angles and paired canonical vectors of two subspaces.
///
/// Pairs are sorted by ascending angle. `gaps[i]` is 1 - cos(angles[i])
/// evaluated as |u_i - v_i|^2 / 2, which keeps full relative precision for
/// tiny angles where 1 - cosines[i] would cancel.
struct CanonicalStructure {
  Vector angles;
  Vector cosines;
  Vector gaps;
  Matrix left_vectors;   // columns u_i in S1
  Matrix right_vectors;  // columns v_i in S2
  Index intersection_rank = 0;

  Index size() const noexcept { return angles.size(); }
  /// Unnormalized difference vectors u_i - v_i.
  Matrix difference_vectors() const { return left_vectors - right_vectors; }
  /// Unnormalized mean vectors u_i + v_i.
  Matrix mean_vectors() const { return left_vectors + right_vectors; }
};

/// Orthonormal basis of the column space of `columns`.
///
/// Column-pivoted modified Gram-Schmidt with a second orthogonalization pass.
/// Columns whose residual drops below rank_tol * (largest input column norm)
/// are discarded, so the result dimension is the numerical rank. An all-zero
/// input yields the trivial subspace.
Subspace orthonormalize(const Matrix& columns, double rank_tol = kDefaultRankTol);

/// Orthogonal projector B B^T onto the subspace.
Matrix projector(const Subspace& s);

/// SVD of Phi^T Psi. Returns min(d1, d2) canonical pairs.
CanonicalStructure canonical_structure(const Subspace& s1, const Subspace& s2,
                                       double angle_tol = kDefaultAngleTol);

/// sqrt(sum theta_i^2); requires dim(s1) == dim(s2).
double geodesic_distance(const Subspace& s1, const Subspace& s2);

/// Largest principal angle between `inner` and its closest counterpart in
/// `outer`, computed from sines so that it stays accurate near zero.
///
/// For equal dimensions this is the usual span distance; for
/// dim(inner) < dim(outer) it measures how far `inner` is from being
/// contained in `outer`. Requires dim(inner) <= dim(outer).
double largest_principal_angle(const Subspace& inner, const Subspace& outer);

/// Largest residual norm of inner's basis columns after projection onto outer.
double containment_residual(const Subspace& inner, const Subspace& outer);

namespace detail {

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op);
void require_nontrivial(const Subspace& s, const char* op);

/// Re-orthonormalizes nearly orthonormal, full-rank columns in place order.
/// Used on bases assembled from canonical vectors; keeps column order.
Matrix polish_basis(Matrix columns);

}  // namespace detail

}  // namespace dsub
