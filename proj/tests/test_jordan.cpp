#include <gtest/gtest.h>

#include "kepler/jordan.hpp"

using namespace kepler;

namespace {

/// Matrix of v -> (I - z w*) v (I - w* z) on the basis E_ij (column-major).
Matrix operator_matrix(const Matrix& z, const Matrix& w) {
  const auto r = z.rows();
  const auto s = z.cols();
  Matrix op(r * s, r * s);
  for (Eigen::Index j = 0; j < r * s; ++j) {
    Matrix e = Matrix::Zero(r, s);
    e(j % r, j / r) = 1.0;
    const Matrix img = (Matrix::Identity(r, r) - z * w.adjoint()) * e * (Matrix::Identity(s, s) - w.adjoint() * z);
    op.col(j) = img.reshaped();
  }
  return op;
}

Matrix random_ball_element(int r, int s, Rng& rng, double norm = 0.7) { return random_element(r, s, r, norm, rng); }

}  // namespace

TEST(TripleSpace, DerivedConstants) {
  const TripleSpace sp(2, 3, 1);
  EXPECT_EQ(sp.dim(), 6);
  EXPECT_EQ(sp.genus(), 5);
  EXPECT_DOUBLE_EQ(sp.b(), 1.0);
  EXPECT_DOUBLE_EQ(sp.d2(), 1.0);
  EXPECT_DOUBLE_EQ(sp.d1(), 3.0);
  EXPECT_DOUBLE_EQ(sp.d_lambda(), 4.0);
  for (int r = 1; r <= 4; ++r)
    for (int s = r; s <= 5; ++s)
      for (int l = 1; l <= r; ++l) {
        if (l == r && s == r) continue;
        const TripleSpace t(r, s, l);
        EXPECT_DOUBLE_EQ(t.genus(), 2 + t.a() * (r - 1) + t.b());
        EXPECT_DOUBLE_EQ((2 * t.d2() + t.d1()) / l, t.genus());
        // complex dimension of the rank-l matrices
        EXPECT_DOUBLE_EQ(t.d_lambda(), l * (r + s - l));
      }
}

TEST(TripleSpace, RejectsInvalid) {
  EXPECT_THROW(TripleSpace(2, 2, 2), ConfigError);
  EXPECT_THROW(TripleSpace(3, 2, 1), ConfigError);
  EXPECT_THROW(TripleSpace(2, 3, 0), ConfigError);
  EXPECT_THROW(TripleSpace(2, 3, 3), ConfigError);
  EXPECT_NO_THROW(TripleSpace(2, 2, 1));
}

TEST(TripleProduct, Examples) {
  const Matrix zero = Matrix::Zero(2, 3);
  EXPECT_EQ(triple_product(zero, zero, zero).norm(), 0.0);
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  EXPECT_NEAR(std::abs(triple_product(one, one, one)(0, 0) - 2.0), 0.0, 1e-15);
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 1.0;
  EXPECT_LT((triple_product(c, c, c) - 2.0 * c).norm(), 1e-15);
  EXPECT_THROW(triple_product(Matrix::Zero(2, 3), Matrix::Zero(3, 2), Matrix::Zero(2, 3)), ShapeError);
}

TEST(TripleProduct, SymmetricAndConjugateLinear) {
  Rng rng(11);
  const Matrix u = ginibre(2, 3, rng), v = ginibre(2, 3, rng), w = ginibre(2, 3, rng);
  const Complex alpha(0.3, -1.2);
  EXPECT_LT((triple_product(u, v, w) - triple_product(w, v, u)).norm(), 1e-13);
  EXPECT_LT((triple_product(u, alpha * v, w) - std::conj(alpha) * triple_product(u, v, w)).norm(), 1e-13);
}

TEST(Bergman, Examples) {
  Rng rng(3);
  const Matrix w = ginibre(2, 3, rng), v = ginibre(2, 3, rng);
  EXPECT_LT((bergman_apply(Matrix::Zero(2, 3), w, v) - v).norm(), 1e-15);
  const double x = 0.4;
  const Matrix zx = Matrix::Constant(1, 1, x);
  const Matrix vx = Matrix::Constant(1, 1, Complex(0.7, 0.2));
  EXPECT_LT(std::abs(bergman_apply(zx, zx, vx)(0, 0) - std::pow(1 - x * x, 2) * vx(0, 0)), 1e-15);
}

TEST(Bergman, MatrixFormMatchesTripleExpansion) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Matrix z = ginibre(2, 3, rng), w = ginibre(2, 3, rng), v = ginibre(2, 3, rng);
    EXPECT_LT((bergman_apply(z, w, v) - bergman_apply_triple(z, w, v)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Bergman, DeterminantMatchesOperatorMatrix) {
  Rng rng(17);
  for (auto [r, s] : {std::pair{2, 3}, std::pair{1, 4}, std::pair{2, 2}}) {
    for (int i = 0; i < 100; ++i) {
      const Matrix z = random_ball_element(r, s, rng), w = random_ball_element(r, s, rng);
      const Complex direct = operator_matrix(z, w).determinant();
      EXPECT_LT(std::abs(bergman_det(z, w) - direct) / std::abs(direct), 1e-10);
      const Complex dp = std::pow(delta(z, w), r + s);
      EXPECT_LT(std::abs(bergman_det(z, w) - dp) / std::abs(dp), 1e-10);
    }
  }
}

TEST(Bergman, RankOneDeterminant) {
  Rng rng(2);
  const Matrix z = random_ball_element(1, 4, rng), w = random_ball_element(1, 4, rng);
  const Complex ip = (z * w.adjoint())(0, 0);
  EXPECT_LT(std::abs(bergman_det(z, w) - std::pow(1.0 - ip, 5)), 1e-12);
  EXPECT_LT(std::abs(delta(z, w) - (1.0 - ip)), 1e-15);
}

TEST(Delta, Examples) {
  Rng rng(1);
  const Matrix w = ginibre(2, 3, rng);
  EXPECT_EQ(delta(Matrix::Zero(2, 3), w), Complex(1.0));
  EXPECT_EQ(delta(w, Matrix::Zero(2, 3)), Complex(1.0));
  const Matrix c = standard_tripotent(2, 3, 1).element();
  EXPECT_LT(std::abs(delta(c, c)), 1e-15);
}

TEST(QuadraticRep, Examples) {
  Rng rng(4);
  const Matrix z = ginibre(2, 3, rng);
  EXPECT_EQ(quadratic_rep(z, Matrix::Zero(2, 3)).norm(), 0.0);
  const Matrix c = random_tripotent(TripleSpace(2, 3, 1), 2, rng).element();
  EXPECT_LT((quadratic_rep(c, c) - c).norm(), 1e-13);
  const Complex a(0.3, 0.5), b(-1.0, 0.25);
  EXPECT_LT(std::abs(quadratic_rep(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b))(0, 0) - a * a * std::conj(b)),
            1e-15);
}

TEST(Rank, ThresholdSemantics) {
  Matrix c(2, 3);
  c << 1, 0, 0, 0, 1, 0;
  EXPECT_TRUE(is_tripotent(c, 1e-12));
  EXPECT_EQ(rank(c), 2);
  EXPECT_TRUE(is_tripotent(Matrix::Zero(2, 3), 1e-12));
  EXPECT_EQ(rank(Matrix::Zero(2, 3)), 0);
  Matrix z = Matrix::Zero(2, 3);
  z(0, 0) = 0.9;
  z(1, 1) = 1e-14;
  EXPECT_EQ(rank(z, 1e-10), 1);
  EXPECT_THROW(rank(z, 0.0), ConfigError);
}

TEST(RandomTripotent, Properties) {
  const TripleSpace sp(3, 4, 2);
  EXPECT_EQ(random_tripotent(sp, 0, 42).element().norm(), 0.0);
  for (int k = 0; k <= 3; ++k) {
    const Tripotent c = random_tripotent(sp, k, 100 + k);
    EXPECT_TRUE(is_tripotent(c.element(), 1e-12));
    EXPECT_EQ(rank(c.element()), k);
  }
  const Matrix a = random_tripotent(sp, 2, 42).element();
  const Matrix b = random_tripotent(sp, 2, 42).element();
  EXPECT_TRUE((a.array() == b.array()).all());
  EXPECT_THROW(random_tripotent(sp, 4, 1), ConfigError);
}

TEST(Peirce, BlockExample) {
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 1.0;
  const Tripotent t = Tripotent::from_element(c);
  Matrix v(2, 2);
  v << Complex(1, 1), Complex(2, 0), Complex(0, 3), Complex(4, -1);
  Matrix p2 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2), p0 = Matrix::Zero(2, 2);
  p2(0, 0) = v(0, 0);
  p1(0, 1) = v(0, 1);
  p1(1, 0) = v(1, 0);
  p0(1, 1) = v(1, 1);
  EXPECT_LT((peirce_project(t, v, 2) - p2).norm(), 1e-15);
  EXPECT_LT((peirce_project(t, v, 1) - p1).norm(), 1e-15);
  EXPECT_LT((peirce_project(t, v, 0) - p0).norm(), 1e-15);
  EXPECT_LT((peirce_project(t, c, 2) - c).norm(), 1e-15);
  EXPECT_THROW(peirce_project(t, v, 3), ConfigError);
}

TEST(Peirce, SpectralDecomposition) {
  Rng rng(9);
  const TripleSpace sp(3, 4, 2);
  for (int i = 0; i < 20; ++i) {
    const Tripotent c = random_tripotent(sp, 2, rng);
    const Matrix v = ginibre(3, 4, rng);
    const Matrix p2 = peirce_project(c, v, 2), p1 = peirce_project(c, v, 1), p0 = peirce_project(c, v, 0);
    EXPECT_LT((box_operator(c.element(), c.element(), v) - 2.0 * p2 - p1).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((p0 + p1 + p2 - v).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(peirce_project(c, p2, 1).norm() + peirce_project(c, p1, 0).norm() + peirce_project(c, p0, 2).norm(),
              1e-12);
  }
}

TEST(Tripotent, FromElementRejectsNonTripotent) {
  Matrix z = Matrix::Zero(2, 3);
  z(0, 0) = 0.5;
  EXPECT_THROW(Tripotent::from_element(z), DomainError);
}

TEST(PseudoInverse, Examples) {
  Rng rng(6);
  const Tripotent c = random_tripotent(TripleSpace(2, 3, 1), 1, rng);
  EXPECT_LT((pseudo_inverse(c.element()) - c.element()).norm(), 1e-12);
  EXPECT_LT(std::abs(pseudo_inverse(Matrix::Constant(1, 1, 2.0))(0, 0) - 0.5), 1e-15);
  const Complex z0(1.0, 2.0);
  // Q_z z~ = z forces z~ = 1 / conj(z) in one variable
  EXPECT_LT(std::abs(pseudo_inverse(Matrix::Constant(1, 1, z0))(0, 0) - 1.0 / std::conj(z0)), 1e-15);
  EXPECT_THROW(pseudo_inverse(Matrix::Zero(2, 3)), DomainError);
}

TEST(PseudoInverse, DefiningIdentities) {
  Rng rng(8);
  for (int k = 1; k <= 2; ++k)
    for (int i = 0; i < 20; ++i) {
      const Matrix z = random_element(2, 3, k, 1.3, rng);
      const Matrix zt = pseudo_inverse(z);
      const Matrix v = ginibre(2, 3, rng);
      EXPECT_LT((quadratic_rep(z, zt) - z).norm(), 1e-10);
      EXPECT_LT((quadratic_rep(zt, z) - zt).norm(), 1e-10);
      EXPECT_LT((quadratic_rep(z, quadratic_rep(zt, v)) - quadratic_rep(zt, quadratic_rep(z, v))).norm(), 1e-10);
    }
}

TEST(JordanDeterminant, Examples) {
  Rng rng(10);
  const TripleSpace sp(3, 4, 2);
  const Tripotent c = random_tripotent(sp, 2, rng);
  EXPECT_LT(std::abs(jordan_det_Nc(c, c.element()) - 1.0), 1e-12);
  const Complex alpha(0.4, -0.7);
  EXPECT_LT(std::abs(jordan_det_Nc(c, alpha * c.element()) - alpha * alpha), 1e-12);

  const Tripotent e1 = standard_tripotent(1, 4, 1);
  Matrix x = Matrix::Zero(1, 4);
  x(0, 0) = Complex(0.3, 0.1);
  EXPECT_LT(std::abs(jordan_det_Nc(e1, x) - x(0, 0)), 1e-15);

  Matrix off = Matrix::Zero(1, 4);
  off(0, 1) = 1.0;
  EXPECT_THROW(jordan_det_Nc(e1, off), DomainError);
}

TEST(JordanDeterminant, FrameIndependent) {
  Rng rng(12);
  const TripleSpace sp(3, 4, 2);
  for (int i = 0; i < 10; ++i) {
    const Tripotent c = random_tripotent(sp, 2, rng);
    const Tripotent again = Tripotent::from_element(c.element());
    const Matrix x = peirce_project(c, ginibre(3, 4, rng), 2);
    EXPECT_LT(std::abs(jordan_det_Nc(c, x) - jordan_det_Nc(again, x)), 1e-10);
  }
}

TEST(JordanDeterminant, PeirceDimensions) {
  Rng rng(13);
  for (auto [r, s, l] : {std::tuple{2, 3, 1}, std::tuple{3, 4, 2}, std::tuple{2, 3, 2}}) {
    const TripleSpace sp(r, s, l);
    const Tripotent c = random_tripotent(sp, l, rng);
    Matrix img2(r * s, r * s), img1(r * s, r * s);
    for (int j = 0; j < r * s; ++j) {
      Matrix e = Matrix::Zero(r, s);
      e(j % r, j / r) = 1.0;
      img2.col(j) = peirce_project(c, e, 2).reshaped();
      img1.col(j) = peirce_project(c, e, 1).reshaped();
    }
    EXPECT_EQ(rank(img2, 1e-8), sp.d2());
    EXPECT_EQ(rank(img1, 1e-8), sp.d1());
  }
}
