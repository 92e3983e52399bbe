#pragma once

// Reference computations that avoid the library's SVD route: symmetric
// eigen-solvers on projector products, explicit planted geodesics and
// brute-force integrals.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline Matrix projector(const Matrix& basis) { return basis * basis.transpose(); }

/// Top min(d1, d2) eigenvalues of P1 P2 P1, descending: the squared cosines.
inline Vector cos2_from_projectors(const Matrix& phi, const Matrix& psi) {
  const Matrix p1 = projector(phi);
  const Matrix g = p1 * projector(psi) * p1;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()));
  const Index k = std::min(phi.cols(), psi.cols());
  return eig.eigenvalues().reverse().head(k);
}

/// sin of the largest principal angle between equal-dimension spans:
/// the spectral norm of P_A - P_B.
inline double span_distance(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0 && b.cols() == 0) return 0.0;
  const Matrix diff = projector(a) - projector(b);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(diff);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

/// Largest norm of a column of x after removing its component in span(basis).
inline double max_residual(const Matrix& x, const Matrix& basis) {
  const Matrix r = x - basis * (basis.transpose() * x);
  return x.cols() == 0 ? 0.0 : r.colwise().norm().maxCoeff();
}

/// Canonical pairs from the eigen-decomposition of Phi^T P2 Phi (d1 <= d2):
/// eigenvectors a_i give u_i = Phi a_i and v_i = P2 u_i / |P2 u_i|.
struct Pairs {
  Vector cosines;  // descending
  Matrix u;
  Matrix v;
};

inline Pairs canonical_pairs(const Matrix& phi, const Matrix& psi) {
  const Matrix g = phi.transpose() * projector(psi) * phi;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()));
  const Index k = phi.cols();
  Pairs out;
  out.cosines.resize(k);
  out.u.resize(phi.rows(), k);
  out.v.resize(phi.rows(), k);
  for (Index i = 0; i < k; ++i) {
    const Index j = k - 1 - i;
    out.u.col(i) = phi * eig.eigenvectors().col(j);
    const Vector pu = psi * (psi.transpose() * out.u.col(i));
    out.cosines[i] = pu.norm();
    out.v.col(i) = out.cosines[i] > 0 ? Vector(pu / pu.norm()) : Vector(out.u.col(i));
  }
  return out;
}

/// Columns (u_i - v_i) / |u_i - v_i| for pairs with 1 - cos >= gap_min.
inline Matrix raw_difference_basis(const Pairs& p, double gap_min) {
  std::vector<Vector> cols;
  for (Index i = 0; i < p.u.cols(); ++i) {
    if (1.0 - p.cosines[i] < gap_min) continue;
    const Vector d = p.u.col(i) - p.v.col(i);
    cols.push_back(d / d.norm());
  }
  Matrix out(p.u.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = cols[j];
  return out;
}

/// Columns (u_i + v_i) / |u_i + v_i|.
inline Matrix raw_principal_basis(const Pairs& p) {
  Matrix out(p.u.rows(), p.u.cols());
  for (Index i = 0; i < p.u.cols(); ++i) {
    const Vector m = p.u.col(i) + p.v.col(i);
    out.col(i) = m / m.norm();
  }
  return out;
}

/// Orthonormal basis of the column span by a thin QR; assumes full rank.
inline Matrix orth(const Matrix& x) {
  Eigen::HouseholderQR<Matrix> qr(x);
  return qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
}

/// 2 sum (1 - cos) over pairs with 1 - cos >= gap_min, cosines taken from
/// the projector eigen-oracle.
inline double magnitude(const Matrix& phi, const Matrix& psi, double gap_min) {
  const Vector c2 = cos2_from_projectors(phi, psi);
  double total = 0.0;
  for (Index i = 0; i < c2.size(); ++i) {
    const double c = std::sqrt(std::clamp(c2[i], 0.0, 1.0));
    if (1.0 - c >= gap_min) total += 2.0 * (1.0 - c);
  }
  return total;
}

/// Point t on the geodesic through planted canonical directions:
/// column i is cos(t a_i) u_i + sin(t a_i) w_i with w_i orthogonal to u.
inline Matrix geodesic_point(const Matrix& u, const Matrix& w, const Vector& angles, double t) {
  Matrix out(u.rows(), u.cols());
  for (Index i = 0; i < u.cols(); ++i) {
    out.col(i) = std::cos(t * angles[i]) * u.col(i) + std::sin(t * angles[i]) * w.col(i);
  }
  return out;
}

/// Composite trapezoid rule for the integral over [0, 1] of l(t) l(t)^T
/// with `intervals` subintervals.
inline Matrix trapezoid_projector_integral(const Matrix& u, const Matrix& w,
                                           const Vector& angles, int intervals) {
  Matrix acc = Matrix::Zero(u.rows(), u.rows());
  for (int k = 0; k <= intervals; ++k) {
    const double t = static_cast<double>(k) / intervals;
    const double weight = (k == 0 || k == intervals) ? 0.5 : 1.0;
    acc += weight * projector(geodesic_point(u, w, angles, t));
  }
  return acc / intervals;
}

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace oracle
