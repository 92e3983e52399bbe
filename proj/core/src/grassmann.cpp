#include "diffsub/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dsub {

namespace {

// W^T S singular values at or below this make the projection degenerate.
constexpr double kProjectionSingularTol = 1e-8;
// Below this |v - cos(theta) u| carries no usable direction.
constexpr double kTangentNormFloor = 1e-13;

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw InvalidArgument("delta must lie in (0, 0.5), got " + std::to_string(delta));
  }
}

Matrix columns_of(const Matrix& vectors, const std::vector<Index>& idx) {
  Matrix out(vectors.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = vectors.col(idx[j]);
  return out;
}

Subspace subspace_from_columns(const Matrix& cols, Index ambient) {
  if (cols.cols() == 0) return Subspace::trivial(ambient);
  return Subspace::from_basis(detail::polish_basis(cols));
}

}  // namespace

Subspace difference_subspace(const Subspace& s1, const Subspace& s2, double delta) {
  require_delta(delta);
  const CanonicalStructure cs = canonical_structure(s1, s2);
  const Matrix diff = cs.difference_vectors();
  Matrix cols(s1.ambient_dim(), cs.size());
  Index kept = 0;
  for (Index i = 0; i < cs.size(); ++i) {
    if (cs.gaps[i] < delta) continue;
    // |u_i - v_i| = sqrt(2 (1 - cos theta_i))
    cols.col(kept++) = diff.col(i) / std::sqrt(2.0 * cs.gaps[i]);
  }
  return subspace_from_columns(cols.leftCols(kept), s1.ambient_dim());
}

Subspace principal_component_subspace(const Subspace& s1, const Subspace& s2,
                                      double angle_tol) {
  const CanonicalStructure cs = canonical_structure(s1, s2, angle_tol);
  Matrix cols(s1.ambient_dim(), cs.size());
  for (Index i = 0; i < cs.size(); ++i) {
    if (cs.gaps[i] <= angle_tol) {
      cols.col(i) = cs.left_vectors.col(i);
    } else {
      // |u_i + v_i| = sqrt(2 (1 + cos theta_i)) = sqrt(2 (2 - gap_i))
      cols.col(i) = (cs.left_vectors.col(i) + cs.right_vectors.col(i)) /
                    std::sqrt(2.0 * (2.0 - cs.gaps[i]));
    }
  }
  return subspace_from_columns(cols, s1.ambient_dim());
}

Subspace sum_subspace(const Subspace& s1, const Subspace& s2, double angle_tol) {
  detail::require_same_ambient(s1, s2, "sum_subspace");
  if (s1.is_trivial()) return s2;
  if (s2.is_trivial()) return s1;
  if (!(angle_tol >= 0.0 && angle_tol < 1.0)) {
    throw InvalidArgument("sum_subspace: angle_tol must lie in [0, 1)");
  }

  const Matrix& phi = s1.basis();
  Matrix r = s2.basis() - phi * (phi.transpose() * s2.basis());
  r -= phi * (phi.transpose() * r);

  // Singular values of (I - P1) Psi are sin(theta_i) (and 1 for directions
  // of S2 with no partner in S1). Keep those above sin of the zero-angle cut.
  const double sin_cut =
      std::max(std::sqrt(angle_tol * (2.0 - angle_tol)), 64.0 * Eigen::NumTraits<double>::epsilon());
  Eigen::BDCSVD<Matrix> svd(r, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Index extra = 0;
  while (extra < s.size() && s[extra] > sin_cut) ++extra;

  Matrix cols(phi.rows(), phi.cols() + extra);
  cols << phi, svd.matrixU().leftCols(extra);
  return subspace_from_columns(cols, phi.rows());
}

DecompositionResult analytic_decompose(const Subspace& a, const Subspace& b, double delta) {
  require_delta(delta);
  detail::require_same_ambient(a, b, "analytic_decompose");
  detail::require_nontrivial(a, "analytic_decompose");
  detail::require_nontrivial(b, "analytic_decompose");
  const Subspace& s1 = a.dim() <= b.dim() ? a : b;
  const Subspace& s2 = a.dim() <= b.dim() ? b : a;
  const Index n = s1.ambient_dim();

  const Matrix g = projector(s1) + projector(s2);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  if (eig.info() != Eigen::Success) throw NumericalError("analytic_decompose: eigensolver failed");
  const Vector& lambda = eig.eigenvalues();  // ascending
  const Matrix& vecs = eig.eigenvectors();

  std::vector<Index> band_i, band_m, band_d, band_z;
  for (Index j = n - 1; j >= 0; --j) {
    const double l = lambda[j];
    if (l >= 2.0 - delta) {
      band_i.push_back(j);
    } else if (l > 1.0 + delta) {
      band_m.push_back(j);
    } else if (l >= 1.0 - delta) {
      band_z.push_back(j);
    } else if (l > delta) {
      band_d.push_back(j);
    }
  }
  std::vector<Index> principal = band_i;
  principal.insert(principal.end(), band_m.begin(), band_m.end());

  DecompositionResult out{
      subspace_from_columns(columns_of(vecs, band_d), n),
      subspace_from_columns(columns_of(vecs, principal), n),
      subspace_from_columns(columns_of(vecs, band_i), n),
      subspace_from_columns(columns_of(vecs, band_z), n),
      lambda.reverse().cwiseMax(0.0).cwiseMin(2.0),
      delta,
  };

  Subspace geo_d = difference_subspace(s1, s2, delta);
  Subspace geo_m = principal_component_subspace(s1, s2);
  if (out.difference.dim() != geo_d.dim() || out.principal.dim() != geo_m.dim()) {
    throw InconsistencyError(
        "analytic_decompose: eigen bands give dim(D) = " + std::to_string(out.difference.dim()) +
            ", dim(M) = " + std::to_string(out.principal.dim()) +
            " but canonical angles give dim(D) = " + std::to_string(geo_d.dim()) +
            ", dim(M) = " + std::to_string(geo_m.dim()),
        std::move(out), std::move(geo_d), std::move(geo_m));
  }
  return out;
}

double magnitude(const Subspace& s1, const Subspace& s2, double delta) {
  require_delta(delta);
  return magnitude(canonical_structure(s1, s2), delta);
}

double magnitude(const CanonicalStructure& cs, double delta) {
  require_delta(delta);
  double total = 0.0;
  for (Index i = 0; i < cs.size(); ++i) {
    if (cs.gaps[i] >= delta) total += 2.0 * cs.gaps[i];
  }
  return total;
}

Subspace second_order_difference_subspace(const Subspace& s1, const Subspace& s2,
                                          const Subspace& s3, double delta) {
  return difference_subspace(s2, principal_component_subspace(s1, s3), delta);
}

double second_order_magnitude(const Subspace& s1, const Subspace& s2, const Subspace& s3,
                              double delta) {
  return magnitude(s2, principal_component_subspace(s1, s3), delta);
}

Subspace geodesic(const Subspace& s1, const Subspace& s2, double t) {
  if (s1.dim() != s2.dim()) throw DimensionMismatch("geodesic requires equal dimensions");
  if (!std::isfinite(t)) throw InvalidArgument("geodesic: non-finite t");
  const CanonicalStructure cs = canonical_structure(s1, s2);
  Matrix cols(s1.ambient_dim(), cs.size());
  for (Index i = 0; i < cs.size(); ++i) {
    const auto u = cs.left_vectors.col(i);
    Vector tangent = cs.right_vectors.col(i) - cs.cosines[i] * u;
    tangent -= u * u.dot(tangent);
    const double tn = tangent.norm();
    if (tn <= kTangentNormFloor) {
      cols.col(i) = u;
      continue;
    }
    tangent /= tn;
    const double angle = t * cs.angles[i];
    cols.col(i) = std::cos(angle) * u + std::sin(angle) * tangent;
  }
  return subspace_from_columns(cols, s1.ambient_dim());
}

Projection subspace_project(const Subspace& s, const Subspace& w) {
  detail::require_same_ambient(s, w, "subspace_project");
  detail::require_nontrivial(s, "subspace_project");
  detail::require_nontrivial(w, "subspace_project");
  if (s.dim() > w.dim()) {
    throw DimensionMismatch("subspace_project: dim(S) = " + std::to_string(s.dim()) +
                            " exceeds dim(W) = " + std::to_string(w.dim()));
  }
  const Matrix cross = w.basis().transpose() * s.basis();
  Eigen::BDCSVD<Matrix> svd(cross, Eigen::ComputeThinU);
  const Vector sigma = svd.singularValues();
  if (sigma[0] <= kProjectionSingularTol) {
    throw ProjectionIllDefined("projection ill-defined: S is orthogonal to W");
  }
  Projection out{
      subspace_from_columns(w.basis() * svd.matrixU().leftCols(s.dim()), s.ambient_dim()),
      sigma,
      sigma[sigma.size() - 1] <= kProjectionSingularTol,
  };
  return out;
}

MagnitudeReport magnitude_decomposition(const Subspace& s1, const Subspace& s2,
                                        const Subspace& s3, double delta) {
  if (s1.dim() != s2.dim() || s2.dim() != s3.dim()) {
    throw DimensionMismatch("magnitude_decomposition requires three subspaces of equal dimension");
  }
  const Subspace mean = principal_component_subspace(s1, s3);
  const Subspace span = sum_subspace(s1, s3);
  const Projection projected = subspace_project(s2, span);

  MagnitudeReport r;
  r.total = magnitude(s2, mean, delta);
  r.orthogonal_component = magnitude(s2, span, delta);
  r.along_component = magnitude(projected.subspace, mean, delta);
  r.residual = r.total - r.orthogonal_component - r.along_component;
  return r;
}

}  // namespace dsub
