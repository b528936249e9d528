#pragma once

// Higher-rank blow-up of the Kepler variety: the charts
// rho_c(s,t) = (B_{t,-c} s, [B_{t,-c} c]), chart inversion and transitions,
// the line bundle over the blow-up with its hermitian metric, and numerical
// curvature of metrics given in chart coordinates.

#include <functional>
#include <vector>

#include "kepler/jordan.hpp"
#include "kepler/kernel.hpp"
#include "kepler/partition.hpp"

namespace kepler {

/// Local coordinates (c, s, t) on the blow-up: s in the Peirce 2-space of c,
/// t in its Peirce 1-space.
struct ChartPoint {
  Tripotent c;
  TripleElement s;
  TripleElement t;
};

inline ChartPoint make_chart_point(Tripotent c, TripleElement s, TripleElement t, double tol = 1e-10) {
  require_same_shape(c.element(), s, "make_chart_point");
  require_same_shape(c.element(), t, "make_chart_point");
  if ((s - peirce_project(c, s, 2)).norm() > tol * std::max(1.0, s.norm()))
    throw DomainError("make_chart_point: s is not in the Peirce 2-space of c");
  if ((t - peirce_project(c, t, 1)).norm() > tol * std::max(1.0, t.norm()))
    throw DomainError("make_chart_point: t is not in the Peirce 1-space of c");
  return {std::move(c), std::move(s), std::move(t)};
}

/// Number of complex chart coordinates, d_lambda = lambda(r + s - lambda).
inline int chart_dimension(const Tripotent& c) {
  const auto k = c.rank();
  return static_cast<int>(k * (c.rows() + c.cols() - k));
}

/// Chart point from coordinates in the frame of c: the lambda x lambda block
/// of s, then the blocks t12 (lambda x (s-lambda)) and t21 ((r-lambda) x lambda)
/// of t, each column-major.
inline ChartPoint chart_point_from_coordinates(const Tripotent& c, const Vector& coords) {
  const auto k = static_cast<Eigen::Index>(c.rank());
  const auto r = c.rows();
  const auto s = c.cols();
  if (coords.size() != chart_dimension(c)) throw ShapeError("chart_point_from_coordinates: wrong coordinate count");
  Matrix sb = Matrix::Zero(r, s);
  Matrix tb = Matrix::Zero(r, s);
  Eigen::Index pos = 0;
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < k; ++i) sb(i, j) = coords(pos++);
  for (Eigen::Index j = k; j < s; ++j)
    for (Eigen::Index i = 0; i < k; ++i) tb(i, j) = coords(pos++);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = k; i < r; ++i) tb(i, j) = coords(pos++);
  return {c, c.from_frame_coords(sb), c.from_frame_coords(tb)};
}

inline Vector chart_coordinates(const ChartPoint& p) {
  const auto k = static_cast<Eigen::Index>(p.c.rank());
  const auto r = p.c.rows();
  const auto s = p.c.cols();
  const Matrix sb = p.c.to_frame(p.s);
  const Matrix tb = p.c.to_frame(p.t);
  Vector out(chart_dimension(p.c));
  Eigen::Index pos = 0;
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < k; ++i) out(pos++) = sb(i, j);
  for (Eigen::Index j = k; j < s; ++j)
    for (Eigen::Index i = 0; i < k; ++i) out(pos++) = tb(i, j);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = k; i < r; ++i) out(pos++) = tb(i, j);
  return out;
}

/// sigma_c(s,t) = B_{t,-c} s = (I + t c*) s (I + c* t)
inline TripleElement sigma_c(const ChartPoint& p) { return bergman_apply(p.t, -p.c.element(), p.s); }

/// Inverse of sigma_c on rank-lambda elements whose leading block in the
/// frame of c is invertible.
inline ChartPoint chart_inverse(const Tripotent& c, const TripleElement& w, double tol = 1e-10) {
  require_same_shape(c.element(), w, "chart_inverse");
  const auto k = static_cast<Eigen::Index>(c.rank());
  const auto r = c.rows();
  const auto s = c.cols();
  const Matrix wb = c.to_frame(w);
  const Matrix w11 = wb.topLeftCorner(k, k);
  const double scale = std::max(1.0, w.norm());
  Eigen::JacobiSVD<Matrix> svd(w11);
  const auto& sv = svd.singularValues();
  if (k == 0 || sv(k - 1) <= 1e-12 * scale) throw ChartError("chart_inverse: point outside the chart range");
  const Eigen::PartialPivLU<Matrix> lu(w11);
  const Matrix t12 = lu.solve(wb.topRightCorner(k, s - k));
  // t21 = w21 w11^{-1}
  const Matrix t21 = w11.transpose().partialPivLu().solve(wb.bottomLeftCorner(r - k, k).transpose()).transpose();
  const Matrix w22 = wb.bottomRightCorner(r - k, s - k);
  const double residual = (w22 - t21 * w11 * t12).norm();
  if (residual > tol * scale) throw DomainError("chart_inverse: element does not have rank lambda");
  Matrix sb = Matrix::Zero(r, s);
  Matrix tb = Matrix::Zero(r, s);
  sb.topLeftCorner(k, k) = w11;
  tb.topRightCorner(k, s - k) = t12;
  tb.bottomLeftCorner(r - k, k) = t21;
  return {c, c.from_frame_coords(sb), c.from_frame_coords(tb)};
}

// ---------------------------------------------------------------------------
// the Peirce manifold chart

struct ThetaResult {
  /// z = B_{t,-c} c, a rank-lambda element spanning the Peirce 2-space Theta_c(t).
  TripleElement z;
  /// Pseudo-inverse of z as B_{t,-c} applied to the inverse of B_{t,-t} c in
  /// the Jordan algebra V_2^c.
  TripleElement z_tilde;
  /// Pseudo-inverse of z from the Moore-Penrose route.
  TripleElement z_tilde_direct;
  /// |z_tilde - z_tilde_direct|
  double agreement = 0.0;
};

/// Inverse of x in the Jordan algebra V_2^c (unit c): the inverse of the
/// leading block in the frame of c.
inline TripleElement peirce_inverse(const Tripotent& c, const TripleElement& x, double tol = 1e-10) {
  require_same_shape(c.element(), x, "peirce_inverse");
  if ((x - peirce_project(c, x, 2)).norm() > tol * std::max(1.0, x.norm()))
    throw DomainError("peirce_inverse: argument is not in the Peirce 2-space");
  const auto k = static_cast<Eigen::Index>(c.rank());
  const Matrix block = c.to_frame(x).topLeftCorner(k, k);
  const Eigen::FullPivLU<Matrix> lu(block);
  if (!lu.isInvertible()) throw DomainError("peirce_inverse: element is not invertible in V_2^c");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  out.topLeftCorner(k, k) = lu.inverse();
  return c.from_frame_coords(out);
}

inline ThetaResult theta_c(const Tripotent& c, const TripleElement& t) {
  require_same_shape(c.element(), t, "theta_c");
  const TripleElement btt = bergman_apply(t, -t, c.element());
  ThetaResult out;
  out.z = bergman_apply(t, -c.element(), c.element());
  out.z_tilde = bergman_apply(t, -c.element(), peirce_inverse(c, peirce_project(c, btt, 2)));
  out.z_tilde_direct = pseudo_inverse(out.z);
  out.agreement = (out.z_tilde - out.z_tilde_direct).norm();
  return out;
}

/// The two idempotents z z~* and z~* z determined by a (z, z~) pair; equal
/// idempotents mean the same point of the Peirce manifold.
inline std::pair<Matrix, Matrix> peirce_idempotents(const TripleElement& z, const TripleElement& z_tilde) {
  return {z * z_tilde.adjoint(), z_tilde.adjoint() * z};
}

inline bool same_peirce_point(const ThetaResult& a, const ThetaResult& b, double tol = 1e-9) {
  const auto [qa, qpa] = peirce_idempotents(a.z, a.z_tilde);
  const auto [qb, qpb] = peirce_idempotents(b.z, b.z_tilde);
  return (qa - qb).norm() <= tol && (qpa - qpb).norm() <= tol;
}

// ---------------------------------------------------------------------------
// the line bundle

/// Representative [s, t, coefficient]_c of a fibre element of the line bundle.
struct BundleGerm {
  ChartPoint chart;
  Complex coefficient;
};

/// Re-expresses a germ in the chart of c', using the transition factor
/// conj(N_{c'}(s')) / conj(N_c(s)).
inline BundleGerm transition_germ(const BundleGerm& from, const Tripotent& target, double tol = 1e-10) {
  if (target.rank() != from.chart.c.rank()) throw ConfigError("transition_germ: tripotent ranks differ");
  const TripleElement w = sigma_c(from.chart);
  ChartPoint to = chart_inverse(target, w, tol);
  const Complex n_from = jordan_det_Nc(from.chart.c, from.chart.s, 1e-8);
  const Complex n_to = jordan_det_Nc(target, to.s, 1e-8);
  if (std::abs(n_from) < 1e-300) throw ChartError("transition_germ: N_c(s) vanishes");
  return {std::move(to), from.coefficient * std::conj(n_to) / std::conj(n_from)};
}

// ---------------------------------------------------------------------------
// metric and identities on the blow-up

/// Delta(t,-t) = det(I + t t*); equals N_c(P_c B*_{t,-c} B_{t,-c} c).
inline double peirce_one_weight(const TripleElement& t) { return delta(t, -t).real(); }

/// Hermitian metric of the line bundle in the chart of c:
/// h(s,t) = Delta(t,-t) Q(w,w), w = sigma_c(s,t).
inline double bundle_metric(const KernelSpec& spec, const ChartPoint& p,
                            double tail_tol = std::numeric_limits<double>::infinity()) {
  const TripleElement w = sigma_c(p);
  const double q = q_kernel_eval(spec, w, w, tail_tol).value.real();
  return peirce_one_weight(p.t) * q;
}

/// N_c(P_c B*_{t,-c} B_{t,-c} c) = Delta(t,-t).
inline IdentityCheck peirce_determinant_check(const Tripotent& c, const TripleElement& t) {
  const TripleElement bc = bergman_apply(t, -c.element(), c.element());
  const TripleElement bsbc = bergman_apply(c.element(), -t, bc);  // B*_{t,-c} = B_{c,-t}
  const Complex lhs = jordan_det_Nc(c, peirce_project(c, bsbc, 2), 1e-8);
  return IdentityCheck::of(lhs, delta(t, -t));
}

/// E^{mu+1}(z, w) = (d2/lambda)_mu / (d2/lambda)_{mu+1} N_c(P_c B*_{t,-c} z) conj(N_c(s)) E^mu(z, w)
/// at w = sigma_c(s,t).
inline IdentityCheck shifted_component_check(const Partition& mu, const TripleElement& z, const ChartPoint& p) {
  const int k = p.c.rank();
  const Partition shifted = mu.plus_rectangle(1, k);
  const TripleElement w = sigma_c(p);
  const FischerFock ff(z, w, shifted.weight());
  const double peirce = k;  // d2/lambda = lambda for matrices
  const double ratio = pochhammer(peirce, mu, 2.0) / pochhammer(peirce, shifted, 2.0);
  const TripleElement pulled = peirce_project(p.c, bergman_apply(p.c.element(), -p.t, z), 2);
  const Complex rhs = ratio * jordan_det_Nc(p.c, pulled, 1e-8) * std::conj(jordan_det_Nc(p.c, p.s, 1e-8)) * ff.E(mu);
  return IdentityCheck::of(ff.E(shifted), rhs);
}

/// Truncated kernel factorization K~(z, w) = N_c(P_c B*_{t,-c} z) conj(N_c(s)) Q(z, w).
inline IdentityCheck truncated_factorization_check(const KernelSpec& spec, const TripleElement& z,
                                                   const ChartPoint& p) {
  const TripleElement w = sigma_c(p);
  const Complex lhs = truncated_kernel_eval(spec, z, w).value;
  const TripleElement pulled = peirce_project(p.c, bergman_apply(p.c.element(), -p.t, z), 2);
  const Complex rhs = jordan_det_Nc(p.c, pulled, 1e-8) * std::conj(jordan_det_Nc(p.c, p.s, 1e-8)) *
                      q_kernel_eval(spec, z, w).value;
  return IdentityCheck::of(lhs, rhs);
}

/// Diagonal form K~(w, w) = Delta(t,-t) |N_c(s)|^2 Q(w, w).
inline IdentityCheck diagonal_factorization_check(const KernelSpec& spec, const ChartPoint& p) {
  const TripleElement w = sigma_c(p);
  const Complex lhs = truncated_kernel_eval(spec, w, w).value;
  const double ns = std::norm(jordan_det_Nc(p.c, p.s, 1e-8));
  const Complex rhs = peirce_one_weight(p.t) * ns * q_kernel_eval(spec, w, w).value;
  return IdentityCheck::of(lhs, rhs);
}

/// Squared-norm form of the isometric embedding of the line bundle:
/// K~(w,w) / |N_c(s)|^2 against the metric Delta(t,-t) Q(w,w).
inline IdentityCheck embedding_check(const KernelSpec& spec, const ChartPoint& p) {
  const TripleElement w = sigma_c(p);
  const double ns = std::norm(jordan_det_Nc(p.c, p.s, 1e-8));
  if (ns < 1e-300) throw ChartError("embedding_check: N_c(s) vanishes");
  const Complex lhs = truncated_kernel_eval(spec, w, w).value / ns;
  return IdentityCheck::of(lhs, bundle_metric(spec, p));
}

/// Unital case: E^{mu+1}(z,w) = (n)_mu/(n)_{mu+1} det(z) conj(det(w)) E^mu(z,w)
/// on square n x n matrices.
inline IdentityCheck unital_shift_check(const Partition& mu, const Matrix& z, const Matrix& w) {
  if (z.rows() != z.cols()) throw ShapeError("unital_shift_check: square matrices required");
  const auto n = static_cast<int>(z.rows());
  const Partition shifted = mu.plus_rectangle(1, n);
  const FischerFock ff(z, w, shifted.weight());
  const double ratio = pochhammer(static_cast<double>(n), mu, 2.0) / pochhammer(static_cast<double>(n), shifted, 2.0);
  return IdentityCheck::of(ff.E(shifted), ratio * z.determinant() * std::conj(w.determinant()) * ff.E(mu));
}

/// Random chart point with c Haar-random of rank lambda, ||t|| <= t_norm and
/// ||sigma_c(s,t)|| <= w_norm.
inline ChartPoint random_chart_point(const TripleSpace& space, Rng& rng, double t_norm, double w_norm) {
  const Tripotent c = random_tripotent(space, space.lambda(), rng);
  const auto k = static_cast<Eigen::Index>(space.lambda());
  const auto r = static_cast<Eigen::Index>(space.r());
  const auto s = static_cast<Eigen::Index>(space.s());
  Matrix tb = Matrix::Zero(r, s);
  tb.topRightCorner(k, s - k) = ginibre(k, s - k, rng);
  tb.bottomLeftCorner(r - k, k) = ginibre(r - k, k, rng);
  const double tn = spectral_norm(tb);
  if (tn > 0.0) tb *= t_norm * rng.uniform(0.2, 1.0) / tn;
  const double tnorm = spectral_norm(tb);
  Matrix sb = Matrix::Zero(r, s);
  sb.topLeftCorner(k, k) = ginibre(k, k, rng);
  sb *= w_norm * rng.uniform(0.3, 1.0) / ((1.0 + tnorm) * (1.0 + tnorm) * spectral_norm(sb));
  return {c, c.from_frame_coords(sb), c.from_frame_coords(tb)};
}

// ---------------------------------------------------------------------------
// curvature

struct CurvatureReport {
  Vector base;
  /// [d_i dbar_j log h], hermitian.
  Matrix matrix;
  double h = 0.0;
  double step = 0.0;
  /// max |Richardson value - half-step value| over the entries.
  double error_estimate = 0.0;
};

using ChartMetric = std::function<double(const Vector&)>;

namespace detail {

inline Eigen::MatrixXd log_hessian(const ChartMetric& h, const Vector& base, double step) {
  const Eigen::Index n = 2 * base.size();
  auto f = [&](const Eigen::VectorXd& dx) {
    Vector z = base;
    for (Eigen::Index i = 0; i < base.size(); ++i) z(i) += Complex(dx(2 * i), dx(2 * i + 1));
    const double v = h(z);
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("curvature: metric not positive at a stencil point");
    return std::log(v);
  };
  Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
  const double f0 = f(dx);
  Eigen::MatrixXd hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dx.setZero();
    dx(i) = step;
    const double fp = f(dx);
    dx(i) = -step;
    const double fm = f(dx);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (step * step);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          dx.setZero();
          dx(i) = si * step;
          dx(j) = sj * step;
          acc += si * sj * f(dx);
        }
      hess(i, j) = hess(j, i) = acc / (4.0 * step * step);
    }
  }
  return hess;
}

inline Matrix complex_hessian(const Eigen::MatrixXd& hess) {
  const Eigen::Index n = hess.rows() / 2;
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = hess(2 * i, 2 * j) + hess(2 * i + 1, 2 * j + 1);
      const double im = hess(2 * i, 2 * j + 1) - hess(2 * i + 1, 2 * j);
      out(i, j) = 0.25 * Complex(re, im);
    }
  return out;
}

}  // namespace detail

/// Matrix of d_i dbar_j log h at `base` (the curvature form is its negative),
/// by central differences at steps `step` and `step/2` combined by Richardson
/// extrapolation.
inline CurvatureReport curvature(const ChartMetric& h, const Vector& base, double step = 1e-3) {
  if (!(step > 0.0)) throw ConfigError("curvature: step must be positive");
  const Matrix coarse = detail::complex_hessian(detail::log_hessian(h, base, step));
  const Matrix fine = detail::complex_hessian(detail::log_hessian(h, base, 0.5 * step));
  CurvatureReport out;
  out.base = base;
  out.matrix = (4.0 * fine - coarse) / 3.0;
  out.h = h(base);
  out.step = step;
  out.error_estimate = (out.matrix - fine).cwiseAbs().maxCoeff();
  return out;
}

/// The bundle metric as a function of chart coordinates around c.
inline ChartMetric chart_metric(const KernelSpec& spec, const Tripotent& c) {
  return [spec, c](const Vector& coords) { return bundle_metric(spec, chart_point_from_coordinates(c, coords)); };
}

}  // namespace kepler
