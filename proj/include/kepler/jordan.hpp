#pragma once

// Hermitian Jordan triple V = C^{r x s} with {u;v;w} = u v* w + w v* u.
//
// Conventions: inner product (z|w) = trace(z w*), quadratic representation
// Q_z w = z w* z, Bergman operator B_{z,w} v = (I - z w*) v (I - w* z).

#include <cstdint>
#include <string>

#include "kepler/core.hpp"

namespace kepler {

/// Structure constants of the matrix triple C^{r x s} together with the
/// Kepler rank lambda of the variety V_lambda = {rank <= lambda}.
class TripleSpace {
public:
  TripleSpace(int r, int s, int lambda) : r_(r), s_(s), lambda_(lambda) {
    if (r < 1) throw ConfigError("TripleSpace: r must be positive");
    if (s < r) throw ConfigError("TripleSpace: need s >= r");
    if (lambda < 1 || lambda > r) throw ConfigError("TripleSpace: need 1 <= lambda <= r");
    if (lambda == r && s == r)
      throw ConfigError("TripleSpace: lambda = r on square matrices (tube type) is excluded");
  }

  int r() const { return r_; }
  int s() const { return s_; }
  int lambda() const { return lambda_; }

  double a() const { return 2.0; }
  double b() const { return s_ - r_; }
  int dim() const { return r_ * s_; }
  int genus() const { return r_ + s_; }

  /// dim V_2^c for a rank-lambda tripotent c.
  double d2() const { return lambda_ * (1.0 + 0.5 * a() * (lambda_ - 1)); }
  /// dim V_1^c for a rank-lambda tripotent c.
  double d1() const { return lambda_ * (a() * (r_ - lambda_) + b()); }
  /// Complex dimension of the Kepler manifold of rank-lambda elements.
  double d_lambda() const { return d2() + d1(); }

  bool contains(const TripleElement& z) const { return z.rows() == r_ && z.cols() == s_; }

  std::string describe() const {
    return "C^{" + std::to_string(r_) + "x" + std::to_string(s_) + "}, lambda=" +
           std::to_string(lambda_);
  }

  friend bool operator==(const TripleSpace&, const TripleSpace&) = default;

private:
  int r_;
  int s_;
  int lambda_;
};

// ---------------------------------------------------------------------------
// triple product and derived operators

inline TripleElement triple_product(const TripleElement& u, const TripleElement& v,
                                    const TripleElement& w) {
  require_same_shape(u, v, "triple_product");
  require_same_shape(u, w, "triple_product");
  return u * v.adjoint() * w + w * v.adjoint() * u;
}

/// D(z,w) v = {z;w;v}
inline TripleElement box_operator(const TripleElement& z, const TripleElement& w,
                                  const TripleElement& v) {
  return triple_product(z, w, v);
}

/// Q_z w = z w* z
inline TripleElement quadratic_rep(const TripleElement& z, const TripleElement& w) {
  require_same_shape(z, w, "quadratic_rep");
  return z * w.adjoint() * z;
}

/// B_{z,w} v = (I - z w*) v (I - w* z)
inline TripleElement bergman_apply(const TripleElement& z, const TripleElement& w,
                                   const TripleElement& v) {
  require_same_shape(z, w, "bergman_apply");
  require_same_shape(z, v, "bergman_apply");
  const Matrix left = Matrix::Identity(z.rows(), z.rows()) - z * w.adjoint();
  const Matrix right = Matrix::Identity(z.cols(), z.cols()) - w.adjoint() * z;
  return left * v * right;
}

/// The same operator written through the triple product only:
/// v - {z;w;v} + 1/4 {z;{w;v;w};z}, i.e. I - D(z,w) + Q_z Q_w.
inline TripleElement bergman_apply_triple(const TripleElement& z, const TripleElement& w,
                                          const TripleElement& v) {
  return v - triple_product(z, w, v) + 0.25 * triple_product(z, triple_product(w, v, w), z);
}

/// Jordan triple determinant Delta(z,w) = det(I_r - z w*).
inline Complex delta(const TripleElement& z, const TripleElement& w) {
  require_same_shape(z, w, "delta");
  const Matrix m = Matrix::Identity(z.rows(), z.rows()) - z * w.adjoint();
  return m.determinant();
}

/// det B_{z,w} from the Kronecker structure of B: det(I - zw*)^s det(I - w*z)^r.
inline Complex bergman_det(const TripleElement& z, const TripleElement& w) {
  require_same_shape(z, w, "bergman_det");
  const auto r = static_cast<int>(z.rows());
  const auto s = static_cast<int>(z.cols());
  const Complex left = (Matrix::Identity(r, r) - z * w.adjoint()).determinant();
  const Complex right = (Matrix::Identity(s, s) - w.adjoint() * z).determinant();
  return std::pow(left, s) * std::pow(right, r);
}

// ---------------------------------------------------------------------------
// rank, tripotents

/// Number of singular values above tol * (largest singular value).
inline int rank(const TripleElement& z, double tol = 1e-10) {
  if (tol <= 0.0) throw ConfigError("rank: tol must be positive");
  if (z.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(z);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0;
  int count = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++count;
  return count;
}

inline bool is_tripotent(const TripleElement& c, double tol = 1e-10) {
  if (tol <= 0.0) throw ConfigError("is_tripotent: tol must be positive");
  return (quadratic_rep(c, c) - c).norm() <= tol;
}

/// A partial isometry c = U [I_k 0; 0 0] W* carried together with the
/// unitary frame (U, W). The frame fixes the Jordan determinant N_c.
class Tripotent {
public:
  /// Builds c from a frame; the first `rank` columns of U and W span the
  /// Peirce 2-space.
  static Tripotent from_frame(Matrix u, Matrix w, int rank) {
    if (rank < 0 || rank > std::min(u.rows(), w.rows()))
      throw ConfigError("Tripotent: rank out of range");
    Tripotent c;
    c.rank_ = rank;
    c.element_ = u.leftCols(rank) * w.leftCols(rank).adjoint();
    c.u_ = std::move(u);
    c.w_ = std::move(w);
    return c;
  }

  /// Validates c (Q_c c = c) and extracts an SVD frame.
  static Tripotent from_element(const TripleElement& element, double tol = 1e-10) {
    if (!is_tripotent(element, tol)) throw DomainError("Tripotent: element is not a tripotent");
    Eigen::JacobiSVD<Matrix> svd(element, Eigen::ComputeFullU | Eigen::ComputeFullV);
    int k = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 0.5) ++k;
    Tripotent c;
    c.rank_ = k;
    c.element_ = element;
    c.u_ = svd.matrixU();
    c.w_ = svd.matrixV();
    return c;
  }

  const TripleElement& element() const { return element_; }
  int rank() const { return rank_; }
  Eigen::Index rows() const { return element_.rows(); }
  Eigen::Index cols() const { return element_.cols(); }

  /// Unitary frames with c = U [I 0; 0 0] W*.
  const Matrix& frame_u() const { return u_; }
  const Matrix& frame_w() const { return w_; }

  /// U* x W: x written in the block form adapted to c.
  Matrix to_frame(const TripleElement& x) const { return u_.adjoint() * x * w_; }
  TripleElement from_frame_coords(const Matrix& blocks) const { return u_ * blocks * w_.adjoint(); }

  /// Range projections q = c c* and q' = c* c.
  Matrix left_projection() const { return element_ * element_.adjoint(); }
  Matrix right_projection() const { return element_.adjoint() * element_; }

private:
  Tripotent() = default;

  TripleElement element_;
  Matrix u_;
  Matrix w_;
  int rank_ = 0;
};

/// Random rank-k tripotent U [I_k 0; 0 0] W* with Haar frames.
inline Tripotent random_tripotent(const TripleSpace& space, int k, Rng& rng) {
  if (k < 0 || k > space.r()) throw ConfigError("random_tripotent: rank out of range");
  Matrix u = haar_unitary(space.r(), rng);
  Matrix w = haar_unitary(space.s(), rng);
  return Tripotent::from_frame(std::move(u), std::move(w), k);
}

inline Tripotent random_tripotent(const TripleSpace& space, int k, std::uint64_t seed) {
  Rng rng(seed);
  return random_tripotent(space, k, rng);
}

/// Tripotent E_11 + ... + E_kk of C^{r x s}.
inline Tripotent standard_tripotent(int r, int s, int k) {
  return Tripotent::from_frame(Matrix::Identity(r, r), Matrix::Identity(s, s), k);
}

// ---------------------------------------------------------------------------
// Peirce decomposition

/// Eigenprojection of D(c,c) for eigenvalue k in {0, 1, 2}.
inline TripleElement peirce_project(const Tripotent& c, const TripleElement& v, int k) {
  require_same_shape(c.element(), v, "peirce_project");
  const Matrix q = c.left_projection();
  const Matrix qp = c.right_projection();
  switch (k) {
    case 2:
      return q * v * qp;
    case 0: {
      const Matrix iq = Matrix::Identity(q.rows(), q.cols()) - q;
      const Matrix iqp = Matrix::Identity(qp.rows(), qp.cols()) - qp;
      return iq * v * iqp;
    }
    case 1:
      return v - peirce_project(c, v, 2) - peirce_project(c, v, 0);
    default:
      throw ConfigError("peirce_project: k must be 0, 1 or 2");
  }
}

/// Unique z~ with Q_z z~ = z, Q_{z~} z = z~ and commuting Q operators;
/// equals the adjoint of the Moore-Penrose inverse.
inline TripleElement pseudo_inverse(const TripleElement& z, double tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) throw DomainError("pseudo_inverse: zero element");
  Matrix result = Matrix::Zero(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol * sv(0)) break;
    result += (1.0 / sv(i)) * svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
  }
  return result;
}

/// Jordan algebra determinant of the Peirce 2-space of c, normalized by
/// N_c(c) = 1: det of the leading block of U* x W.
inline Complex jordan_det_Nc(const Tripotent& c, const TripleElement& x, double tol = 1e-10) {
  require_same_shape(c.element(), x, "jordan_det_Nc");
  const double off = (x - peirce_project(c, x, 2)).norm();
  if (off > tol * std::max(1.0, x.norm()))
    throw DomainError("jordan_det_Nc: argument is not in the Peirce 2-space");
  const int k = c.rank();
  if (k == 0) return 1.0;
  const Matrix block = c.to_frame(x).topLeftCorner(k, k);
  return block.determinant();
}

}  // namespace kepler
