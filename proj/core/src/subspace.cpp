#include "diffsub/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace dsub {

namespace {

// Singular values of Phi^T Psi may exceed one by rounding; anything beyond
// this is a bug upstream rather than floating-point noise.
constexpr double kCosineOvershootTol = 1e-8;

double max_gram_deviation(const Matrix& b) {
  if (b.cols() == 0) return 0.0;
  const Matrix gram = b.transpose() * b;
  return (gram - Matrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

Subspace Subspace::from_basis(Matrix basis, double tol) {
  if (basis.rows() < 1) throw InvalidArgument("subspace basis needs at least one row");
  if (basis.cols() > basis.rows()) {
    throw InvalidArgument("subspace basis has more columns than rows");
  }
  if (!basis.allFinite()) throw InvalidArgument("subspace basis has non-finite entries");
  const double dev = max_gram_deviation(basis);
  if (dev > tol) {
    throw InvalidArgument("basis is not column-orthonormal (|B^T B - I|_max = " +
                          std::to_string(dev) + ")");
  }
  const Index n = basis.rows();
  return Subspace(std::move(basis), n);
}

Subspace Subspace::trivial(Index ambient_dim) {
  if (ambient_dim < 1) throw InvalidArgument("ambient dimension must be positive");
  return Subspace(Matrix(ambient_dim, 0), ambient_dim);
}

Subspace orthonormalize(const Matrix& columns, double rank_tol) {
  const Index n = columns.rows();
  const Index k = columns.cols();
  if (n < 1 || k < 1) throw InvalidArgument("orthonormalize needs a non-empty matrix");
  if (!(rank_tol > 0.0)) throw InvalidArgument("rank_tol must be positive");
  if (!columns.allFinite()) throw InvalidArgument("orthonormalize: non-finite input");

  Matrix residual = columns;
  const double largest = residual.colwise().norm().maxCoeff();
  if (largest == 0.0) return Subspace::trivial(n);
  const double threshold = rank_tol * largest;

  const Index max_rank = std::min(n, k);
  Matrix q(n, max_rank);
  Index rank = 0;
  std::vector<bool> taken(static_cast<std::size_t>(k), false);

  while (rank < max_rank) {
    Index pivot = -1;
    double pivot_norm = -1.0;
    for (Index j = 0; j < k; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      const double nj = residual.col(j).norm();
      if (nj > pivot_norm) {
        pivot_norm = nj;
        pivot = j;
      }
    }
    if (pivot < 0 || pivot_norm < threshold) break;
    taken[static_cast<std::size_t>(pivot)] = true;

    Vector v = residual.col(pivot);
    if (rank > 0) {
      const auto accepted = q.leftCols(rank);
      v -= accepted * (accepted.transpose() * v);
    }
    const double vn = v.norm();
    if (vn < threshold) continue;
    v /= vn;
    q.col(rank) = v;
    ++rank;

    for (Index j = 0; j < k; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      residual.col(j) -= v * v.dot(residual.col(j));
    }
  }
  return Subspace::from_basis(q.leftCols(rank));
}

Matrix projector(const Subspace& s) {
  if (s.is_trivial()) return Matrix::Zero(s.ambient_dim(), s.ambient_dim());
  return s.basis() * s.basis().transpose();
}

CanonicalStructure canonical_structure(const Subspace& s1, const Subspace& s2,
                                       double angle_tol) {
  detail::require_same_ambient(s1, s2, "canonical_structure");
  detail::require_nontrivial(s1, "canonical_structure");
  detail::require_nontrivial(s2, "canonical_structure");
  if (!(angle_tol >= 0.0)) throw InvalidArgument("angle_tol must be non-negative");

  const Matrix cross = s1.basis().transpose() * s2.basis();
  Eigen::BDCSVD<Matrix> svd(cross, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index k = std::min(s1.dim(), s2.dim());

  Vector sigma = svd.singularValues().head(k);
  if (sigma.size() > 0 && sigma.maxCoeff() > 1.0 + kCosineOvershootTol) {
    throw NumericalError("canonical_structure: singular value " +
                         std::to_string(sigma.maxCoeff()) + " exceeds one");
  }
  sigma = sigma.cwiseMax(0.0).cwiseMin(1.0);

  const Matrix left = s1.basis() * svd.matrixU().leftCols(k);
  const Matrix right = s2.basis() * svd.matrixV().leftCols(k);

  Vector angles(k);
  Vector gaps(k);
  for (Index i = 0; i < k; ++i) {
    const double chord = (left.col(i) - right.col(i)).norm();
    gaps[i] = 0.5 * chord * chord;
    // Small angles come from the chord |u - v| = 2 sin(theta / 2); acos of a
    // cosine near one would lose half the digits.
    if (sigma[i] >= M_SQRT1_2) {
      angles[i] = 2.0 * std::asin(std::min(1.0, 0.5 * chord));
    } else {
      angles[i] = std::acos(sigma[i]);
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return angles[a] < angles[b]; });

  CanonicalStructure cs;
  cs.angles.resize(k);
  cs.cosines.resize(k);
  cs.gaps.resize(k);
  cs.left_vectors.resize(s1.ambient_dim(), k);
  cs.right_vectors.resize(s1.ambient_dim(), k);
  for (Index i = 0; i < k; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    cs.angles[i] = angles[src];
    cs.cosines[i] = sigma[src];
    cs.gaps[i] = gaps[src];
    cs.left_vectors.col(i) = left.col(src);
    cs.right_vectors.col(i) = right.col(src);
    if (gaps[src] <= angle_tol) ++cs.intersection_rank;
  }
  return cs;
}

double geodesic_distance(const Subspace& s1, const Subspace& s2) {
  if (s1.dim() != s2.dim()) {
    throw DimensionMismatch("geodesic_distance requires equal subspace dimensions");
  }
  return canonical_structure(s1, s2).angles.norm();
}

double largest_principal_angle(const Subspace& inner, const Subspace& outer) {
  detail::require_same_ambient(inner, outer, "largest_principal_angle");
  if (inner.dim() > outer.dim()) {
    throw DimensionMismatch("largest_principal_angle: inner subspace is larger than outer");
  }
  if (inner.is_trivial()) return 0.0;
  if (outer.is_trivial()) return M_PI_2;
  const Matrix& b = inner.basis();
  const Matrix r = b - outer.basis() * (outer.basis().transpose() * b);
  Eigen::JacobiSVD<Matrix> svd(r);
  return std::asin(std::min(1.0, svd.singularValues()[0]));
}

double containment_residual(const Subspace& inner, const Subspace& outer) {
  detail::require_same_ambient(inner, outer, "containment_residual");
  if (inner.is_trivial()) return 0.0;
  const Matrix& b = inner.basis();
  if (outer.is_trivial()) return b.colwise().norm().maxCoeff();
  const Matrix r = b - outer.basis() * (outer.basis().transpose() * b);
  return r.colwise().norm().maxCoeff();
}

namespace detail {

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionMismatch(std::string(op) + ": ambient dimensions differ (" +
                            std::to_string(a.ambient_dim()) + " vs " +
                            std::to_string(b.ambient_dim()) + ")");
  }
}

void require_nontrivial(const Subspace& s, const char* op) {
  if (s.is_trivial()) throw TrivialSubspace(std::string(op) + ": trivial subspace input");
}

Matrix polish_basis(Matrix columns) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < columns.cols(); ++j) {
      for (Index i = 0; i < j; ++i) {
        columns.col(j) -= columns.col(i) * columns.col(i).dot(columns.col(j));
      }
      const double nj = columns.col(j).norm();
      if (nj == 0.0) throw NumericalError("polish_basis: rank-deficient column set");
      columns.col(j) /= nj;
    }
  }
  return columns;
}

}  // namespace detail

}  // namespace dsub
