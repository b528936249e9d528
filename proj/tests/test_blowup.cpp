#include <gtest/gtest.h>

#include "kepler/blowup.hpp"

using namespace kepler;

namespace {

Matrix row(std::initializer_list<Complex> v) {
  Matrix m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index j = 0;
  for (auto x : v) m(0, j++) = x;
  return m;
}

}  // namespace

TEST(ChartPoint, Validation) {
  const Tripotent c = standard_tripotent(2, 3, 1);
  Matrix s = Matrix::Zero(2, 3), t = Matrix::Zero(2, 3);
  s(0, 0) = 0.5;
  t(0, 1) = 0.2;
  EXPECT_NO_THROW(make_chart_point(c, s, t));
  EXPECT_THROW(make_chart_point(c, t, t), DomainError);
  EXPECT_THROW(make_chart_point(c, s, s), DomainError);
}

TEST(Sigma, Examples) {
  Rng rng(41);
  const TripleSpace sp(2, 3, 1);
  const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
  EXPECT_LT((sigma_c(ChartPoint{p.c, p.s, Matrix::Zero(2, 3)}) - p.s).norm(), 1e-15);

  // rank one: c = e1 in C^{1x3}, s = sigma e1, t = (0, t')
  const Tripotent e1 = standard_tripotent(1, 3, 1);
  const Complex sig(0.4, 0.1), t1(0.2, -0.3), t2(-0.5, 0.05);
  const ChartPoint q{e1, row({sig, 0.0, 0.0}), row({0.0, t1, t2})};
  EXPECT_LT((sigma_c(q) - row({sig, sig * t1, sig * t2})).norm(), 1e-15);

  // block pattern [[s, s t12], [t21 s, t21 s t12]] on C^{2x3}
  const Tripotent c = standard_tripotent(2, 3, 1);
  Matrix s = Matrix::Zero(2, 3), t = Matrix::Zero(2, 3);
  s(0, 0) = Complex(0.3, 0.2);
  t(0, 1) = Complex(0.1, 0.4);
  t(0, 2) = Complex(-0.2, 0.0);
  t(1, 0) = Complex(0.6, -0.1);
  Matrix expect(2, 3);
  expect << s(0, 0), s(0, 0) * t(0, 1), s(0, 0) * t(0, 2), t(1, 0) * s(0, 0), t(1, 0) * s(0, 0) * t(0, 1),
      t(1, 0) * s(0, 0) * t(0, 2);
  EXPECT_LT((sigma_c(ChartPoint{c, s, t}) - expect).norm(), 1e-15);
}

TEST(ChartInverse, Examples) {
  Rng rng(42);
  const TripleSpace sp(3, 4, 2);
  const Tripotent c = random_tripotent(sp, 2, rng);
  const ChartPoint at_c = chart_inverse(c, c.element());
  EXPECT_LT((at_c.s - c.element()).norm(), 1e-12);
  EXPECT_LT(at_c.t.norm(), 1e-12);

  const Tripotent e1 = standard_tripotent(1, 4, 1);
  const Matrix w = row({Complex(0.5, 0.1), 0.2, Complex(0.0, -0.3), 0.1});
  const ChartPoint p = chart_inverse(e1, w);
  EXPECT_LT(std::abs(p.s(0, 0) - w(0, 0)), 1e-15);
  for (int j = 1; j < 4; ++j) EXPECT_LT(std::abs(p.t(0, j) - w(0, j) / w(0, 0)), 1e-15);

  EXPECT_THROW(chart_inverse(e1, row({0.0, 0.2, 0.1, 0.0})), ChartError);
  EXPECT_THROW(chart_inverse(c, random_element(3, 4, 3, 0.5, rng)), DomainError);
}

TEST(ChartInverse, RoundTrip) {
  Rng rng(43);
  for (auto [r, s, l] : {std::tuple{2, 3, 1}, std::tuple{3, 4, 2}, std::tuple{3, 5, 3}}) {
    const TripleSpace sp(r, s, l);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
      const Matrix w = sigma_c(p);
      EXPECT_EQ(rank(w), l);
      const ChartPoint back = chart_inverse(p.c, w);
      EXPECT_LT((sigma_c(back) - w).norm(), 1e-10);
      EXPECT_LT((chart_coordinates(back) - chart_coordinates(p)).norm(), 1e-10);
    }
  }
}

TEST(ChartCoordinates, RoundTrip) {
  Rng rng(44);
  const TripleSpace sp(3, 4, 2);
  const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
  const Vector v = chart_coordinates(p);
  EXPECT_EQ(v.size(), sp.d_lambda());
  const ChartPoint q = chart_point_from_coordinates(p.c, v);
  EXPECT_LT((q.s - p.s).norm() + (q.t - p.t).norm(), 1e-13);
  EXPECT_THROW(chart_point_from_coordinates(p.c, Vector::Zero(3)), ShapeError);
}

TEST(Theta, Examples) {
  Rng rng(45);
  const TripleSpace sp(3, 4, 2);
  const Tripotent c = random_tripotent(sp, 2, rng);
  const ThetaResult at0 = theta_c(c, Matrix::Zero(3, 4));
  EXPECT_LT((at0.z - c.element()).norm() + (at0.z_tilde - c.element()).norm(), 1e-13);

  // rank one: z = (1, t) up to scale
  const Tripotent e1 = standard_tripotent(1, 3, 1);
  const Complex t1(0.3, 0.2), t2(-0.1, 0.5);
  const ThetaResult th = theta_c(e1, row({0.0, t1, t2}));
  EXPECT_LT((th.z - row({1.0, t1, t2})).norm(), 1e-15);
}

TEST(Theta, PseudoInverseFormulas) {
  Rng rng(46);
  for (auto [r, s, l] : {std::tuple{2, 3, 1}, std::tuple{3, 4, 2}}) {
    const TripleSpace sp(r, s, l);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p = random_chart_point(sp, rng, 0.9, 0.6);
      const ThetaResult th = theta_c(p.c, p.t);
      EXPECT_LT(th.agreement, 1e-9);
      EXPECT_LT((quadratic_rep(th.z, th.z_tilde) - th.z).norm(), 1e-9);
      EXPECT_LT((quadratic_rep(th.z_tilde, th.z) - th.z_tilde).norm(), 1e-9);
    }
  }
}

TEST(Theta, SamePointFromRescaledRepresentative) {
  Rng rng(47);
  const TripleSpace sp(3, 4, 2);
  const ChartPoint p = random_chart_point(sp, rng, 0.7, 0.6);
  const ThetaResult a = theta_c(p.c, p.t);
  ThetaResult b = a;
  // another spanning element of the same Peirce 2-space
  const Matrix g = Matrix::Identity(3, 3) + 0.3 * (a.z * a.z_tilde.adjoint());
  b.z = g * a.z;
  b.z_tilde = pseudo_inverse(b.z);
  EXPECT_TRUE(same_peirce_point(a, b));
  const ThetaResult other = theta_c(p.c, 1.5 * p.t);
  EXPECT_FALSE(same_peirce_point(a, other));
}

TEST(Transition, Examples) {
  Rng rng(48);
  const TripleSpace sp(2, 3, 1);
  const ChartPoint p = random_chart_point(sp, rng, 0.7, 0.6);
  const BundleGerm g{p, Complex(0.3, 0.8)};
  const BundleGerm same = transition_germ(g, p.c);
  EXPECT_LT(std::abs(same.coefficient - g.coefficient), 1e-12);
  EXPECT_LT((chart_coordinates(same.chart) - chart_coordinates(p)).norm(), 1e-12);

  // rank one on C^{1x2}: c = e1 -> c' = e2 rescales by conj(w2) / conj(w1)
  const Tripotent e1 = standard_tripotent(1, 2, 1);
  const Tripotent e2 = Tripotent::from_frame(Matrix::Identity(1, 1), (Matrix(2, 2) << 0, 1, 1, 0).finished(), 1);
  const Matrix w = row({Complex(0.3, 0.1), Complex(-0.2, 0.4)});
  const BundleGerm h{chart_inverse(e1, w), 1.0};
  const BundleGerm moved = transition_germ(h, e2);
  EXPECT_LT(std::abs(moved.coefficient - std::conj(w(0, 1)) / std::conj(w(0, 0))), 1e-14);
  EXPECT_THROW(transition_germ(g, random_tripotent(TripleSpace(2, 3, 2), 2, rng)), ConfigError);
}

TEST(Transition, Cocycle) {
  Rng rng(49);
  for (auto [r, s, l] : {std::tuple{2, 3, 1}, std::tuple{3, 4, 2}}) {
    const TripleSpace sp(r, s, l);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
      const Tripotent c1 = random_tripotent(sp, l, rng), c2 = random_tripotent(sp, l, rng);
      const BundleGerm g{p, 1.0};
      const BundleGerm via = transition_germ(transition_germ(g, c1), c2);
      const BundleGerm direct = transition_germ(g, c2);
      EXPECT_LT(std::abs(via.coefficient - direct.coefficient) / std::max(1.0, std::abs(direct.coefficient)), 1e-10);
    }
  }
}

TEST(PeirceOneWeight, DeterminantOfPulledBackTripotent) {
  Rng rng(50);
  for (auto [r, s, l] : {std::tuple{2, 3, 1}, std::tuple{3, 4, 2}, std::tuple{4, 5, 3}}) {
    const TripleSpace sp(r, s, l);
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p = random_chart_point(sp, rng, 0.9, 0.6);
      EXPECT_LT(peirce_determinant_check(p.c, p.t).scaled_residual(), 1e-10);
      // det(I + t t*) as a product over the singular values of t
      Eigen::JacobiSVD<Matrix> svd(p.t);
      double prod = 1.0;
      for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) prod *= 1.0 + std::pow(svd.singularValues()(j), 2);
      EXPECT_NEAR(peirce_one_weight(p.t), prod, 1e-12 * prod);
    }
  }
}

TEST(PeirceOneWeight, RankOneValue) {
  const Tripotent e1 = standard_tripotent(1, 3, 1);
  const Matrix t = row({0.0, Complex(0.3, 0.4), 0.0});
  EXPECT_NEAR(peirce_determinant_check(e1, t).lhs.real(), 1.25, 1e-15);
}

TEST(ShiftedComponents, AtChartPoints) {
  Rng rng(51);
  for (auto [r, s, l] : {std::tuple{2, 3, 1}, std::tuple{3, 4, 2}}) {
    const TripleSpace sp(r, s, l);
    for (int i = 0; i < 10; ++i) {
      const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
      const Matrix z = random_element(r, s, l, 0.7, rng);
      for (const auto& mu : enumerate_partitions(l, 4))
        EXPECT_LT(shifted_component_check(mu, z, p).scaled_residual(), 1e-8) << mu.to_string();
    }
  }
}

TEST(UnitalShift, SquareMatrices) {
  Rng rng(52);
  for (int n = 1; n <= 3; ++n) {
    const Matrix z = random_element(n, n, n, 0.8, rng), w = random_element(n, n, n, 0.8, rng);
    for (const auto& mu : enumerate_partitions(n, 4))
      EXPECT_LT(unital_shift_check(mu, z, w).scaled_residual(), 1e-10);
  }
  EXPECT_THROW(unital_shift_check(Partition{}, Matrix::Zero(2, 3), Matrix::Zero(2, 3)), ShapeError);
}

TEST(Factorization, TruncatedKernelThroughQ) {
  Rng rng(53);
  for (auto [r, s, l] : {std::tuple{2, 3, 1}, std::tuple{3, 4, 2}}) {
    const TripleSpace sp(r, s, l);
    const KernelSpec spec(sp, CoefficientSequence::nu_rule(9.0), 12, 1);
    for (int i = 0; i < 10; ++i) {
      const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
      const Matrix z = random_element(r, s, l, 0.6, rng);
      EXPECT_LT(truncated_factorization_check(spec, z, p).scaled_residual(), 1e-8);
      EXPECT_LT(diagonal_factorization_check(spec, p).scaled_residual(), 1e-8);
      EXPECT_LT(embedding_check(spec, p).scaled_residual(), 1e-8);
    }
  }
}

TEST(Embedding, BasePointAndScaling) {
  Rng rng(54);
  const TripleSpace sp(2, 3, 1);
  const KernelSpec spec(sp, CoefficientSequence::nu_rule(6.0), 14, 1);
  const Tripotent c = standard_tripotent(2, 3, 1);
  const ChartPoint base{c, 0.5 * c.element(), Matrix::Zero(2, 3)};
  const IdentityCheck at_base = embedding_check(spec, base);
  EXPECT_LT(at_base.scaled_residual(), 1e-8);
  const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
  for (double alpha : {0.3, 0.7}) EXPECT_LT(embedding_check(spec, ChartPoint{p.c, alpha * p.s, p.t}).scaled_residual(), 1e-8);
  EXPECT_THROW(embedding_check(spec, ChartPoint{c, Matrix::Zero(2, 3), Matrix::Zero(2, 3)}), ChartError);
}

TEST(BundleMetric, ChartIndependentKernelDiagonal) {
  Rng rng(55);
  const TripleSpace sp(3, 4, 2);
  const KernelSpec spec(sp, CoefficientSequence::nu_rule(9.0), 10, 1);
  for (int i = 0; i < 5; ++i) {
    const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
    const ChartPoint q = chart_inverse(random_tripotent(sp, 2, rng), sigma_c(p));
    const double hp = bundle_metric(spec, p) * std::norm(jordan_det_Nc(p.c, p.s, 1e-8));
    const double hq = bundle_metric(spec, q) * std::norm(jordan_det_Nc(q.c, q.s, 1e-8));
    EXPECT_NEAR(hp, hq, 1e-9 * std::max(1.0, hp));
    EXPECT_GT(bundle_metric(spec, p), 0.0);
  }
}

TEST(Curvature, ClosedFormMetrics) {
  const ChartMetric fs = [](const Vector& v) { return 1.0 + std::norm(v(0)); };
  const ChartMetric ball = [](const Vector& v) { return std::pow(1.0 - std::norm(v(0)), -6.0); };
  const ChartMetric flat = [](const Vector&) { return 2.5; };
  EXPECT_NEAR(curvature(fs, Vector::Zero(1)).matrix(0, 0).real(), 1.0, 1e-6);
  EXPECT_NEAR(curvature(ball, Vector::Zero(1)).matrix(0, 0).real(), 6.0, 1e-6);
  EXPECT_LT(curvature(flat, Vector::Zero(2)).matrix.norm(), 1e-9);
  Vector tau(1);
  tau(0) = Complex(0.2, -0.3);
  EXPECT_NEAR(curvature(fs, tau).matrix(0, 0).real(), std::pow(1.13, -2.0), 1e-6);
  EXPECT_NEAR(curvature(ball, tau).matrix(0, 0).real(), 6.0 * std::pow(0.87, -2.0), 1e-6);
}

TEST(Curvature, FubiniStudyInTwoVariables) {
  const ChartMetric fs = [](const Vector& v) { return 1.0 + v.squaredNorm(); };
  Vector p(2);
  p << Complex(0.3, 0.1), Complex(-0.2, 0.4);
  const CurvatureReport rep = curvature(fs, p);
  const double n = 1.0 + p.squaredNorm();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Complex expect = ((i == j ? n : 0.0) - std::conj(p(i)) * p(j)) / (n * n);
      EXPECT_LT(std::abs(rep.matrix(i, j) - expect), 1e-6);
    }
  EXPECT_LT((rep.matrix - rep.matrix.adjoint()).norm(), 1e-8);
}

TEST(Curvature, RejectsNonPositiveMetric) {
  const ChartMetric bad = [](const Vector& v) { return v(0).real(); };
  EXPECT_THROW(curvature(bad, Vector::Zero(1)), DomainError);
  EXPECT_THROW(curvature(bad, Vector::Zero(1), 0.0), ConfigError);
}

TEST(Curvature, BundleMetricOnExceptionalFibre) {
  const TripleSpace sp(2, 3, 1);
  const KernelSpec spec(sp, CoefficientSequence::nu_rule(6.0), 14, 1);
  const Tripotent c = standard_tripotent(2, 3, 1);
  const ChartMetric h = chart_metric(spec, c);
  Vector base = Vector::Zero(sp.d_lambda());
  base(1) = Complex(0.25, -0.1);
  const CurvatureReport rep = curvature(h, base);
  EXPECT_NEAR(rep.matrix(1, 1).real(), std::pow(1.0 + std::norm(base(1)), -2.0), 1e-6);
  EXPECT_LT((rep.matrix - rep.matrix.adjoint()).norm(), 1e-8);
}

TEST(Curvature, RankOneGridAgainstOracle) {
  const TripleSpace sp(1, 2, 1);
  const KernelSpec spec(sp, CoefficientSequence::nu_rule(4.0), 14, 1);
  const ChartMetric h = chart_metric(spec, standard_tripotent(1, 2, 1));
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      Vector coords = Vector::Zero(2);
      coords(1) = Complex(-0.5 + 0.1 * i, -0.5 + 0.1 * j);
      const double oracle = std::pow(1.0 + std::norm(coords(1)), -2.0);
      EXPECT_NEAR(curvature(h, coords).matrix(1, 1).real(), oracle, 1e-6);
    }
}
