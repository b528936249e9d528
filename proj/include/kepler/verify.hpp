#pragma once

// Verification suites: each suite evaluates both sides of an identity at
// seeded sample points and returns one record per case.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kepler/blowup.hpp"
#include "kepler/jordan.hpp"
#include "kepler/kernel.hpp"
#include "kepler/partition.hpp"
#include "kepler/radial.hpp"

namespace kepler {

struct Record {
  std::string suite;
  std::string name;
  Complex lhs;
  Complex rhs;
  double residual = 0.0;
  double tolerance = 0.0;
  /// "<=": pass iff residual <= tolerance; ">": pass iff residual > tolerance.
  std::string relation = "<=";
  bool pass = false;
};

struct SuiteConfig {
  int r = 2;
  int s = 3;
  int lambda = 1;
  /// Set: work on the ball C^{1 x d} instead of C^{r x s}.
  std::optional<int> d;
  /// "nu" or "hardy".
  std::string coefficients = "nu";
  double nu = 6.0;
  int M = 14;
  int k = 1;
  std::uint64_t seed = 7;
  /// 0 = suite default.
  int trials = 0;
  int recovery_weight = 6;
  long mc_samples = 10000000;
  long sphere_samples = 1000000;
  int workers = default_workers();
  /// Overrides keyed "suite.check".
  std::map<std::string, double> tolerances;

  TripleSpace space() const { return d ? TripleSpace(1, *d, 1) : TripleSpace(r, s, lambda); }

  CoefficientSequence sequence() const {
    if (coefficients == "nu") return CoefficientSequence::nu_rule(nu);
    if (coefficients == "hardy") return CoefficientSequence::hardy();
    throw ConfigError("unknown coefficient sequence '" + coefficients + "'");
  }

  KernelSpec kernel(int order) const { return KernelSpec(space(), sequence(), M, order); }
};

/// Suite names in canonical order.
inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "bergman", "peirce",  "fischer-fock", "faraut-koranyi", "beta-integral", "charts",    "cocycle",
      "lemma-e", "prop-d",  "prop-h",       "embedding",      "recovery",      "e-shift",   "unital-shift",
      "vanishing", "reproducing", "curvature"};
  return names;
}

inline double default_tolerance(const std::string& key) {
  static const std::map<std::string, double> table = {
      {"bergman.det", 1e-10},           {"bergman.expansion", 1e-12},
      {"peirce.projections", 1e-12},    {"peirce.dimension", 0.5},
      {"peirce.frame", 1e-10},          {"peirce.pseudo-inverse", 1e-10},
      {"peirce.tripotent", 1e-12},      {"fischer-fock.expansion", 1e-8},
      {"fischer-fock.symmetry", 1e-12}, {"fischer-fock.invariance", 1e-10},
      {"faraut-koranyi.kernel", 1e-6},  {"faraut-koranyi.rank-one", 1e-10},
      {"beta-integral.quadrature", 1e-10}, {"beta-integral.mc-relative", 0.02},
      {"beta-integral.mc-sigmas", 3.0}, {"charts.round-trip", 1e-10},
      {"charts.theta", 1e-9},         {"charts.pseudo-inverse", 1e-9},
      {"cocycle.cocycle", 1e-10},       {"cocycle.identity", 1e-12},
      {"lemma-e.determinant", 1e-10},   {"prop-d.factorization", 1e-8},
      {"prop-h.diagonal", 1e-8},        {"prop-h.chart-independence", 1e-9},
      {"embedding.isometry", 1e-8},     {"recovery.round-trip", 1e-8},
      {"recovery.distinct", 1e-3},      {"recovery.equal", 1e-10},
      {"recovery.normalized", 1e-8},    {"e-shift.shift", 1e-8},
      {"unital-shift.shift", 1e-10},         {"unital-shift.tube", 1e-10},
      {"vanishing.rank-deficient", 1e-9}, {"vanishing.slope", 0.1},
      {"reproducing.normalization", 1e-10}, {"reproducing.relative", 5e-3},
      {"curvature.oracle", 1e-6},       {"curvature.hermitian", 1e-8},
      {"curvature.reciprocal", 1e-3}};
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("no tolerance named '" + key + "'");
  return it->second;
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class SuiteRun {
public:
  SuiteRun(std::string suite, const SuiteConfig& cfg) : suite_(std::move(suite)), cfg_(cfg) {}

  double tol(const std::string& check) const {
    const std::string key = suite_ + "." + check;
    auto it = cfg_.tolerances.find(key);
    return it != cfg_.tolerances.end() ? it->second : default_tolerance(key);
  }

  static Record make(const std::string& suite, std::string name, Complex lhs, Complex rhs, double residual,
                     double tolerance, const std::string& relation = "<=") {
    Record rec{suite, std::move(name), lhs, rhs, residual, tolerance, relation, false};
    rec.pass = relation == ">" ? residual > tolerance : residual <= tolerance;
    return rec;
  }

  Record record(std::string name, Complex lhs, Complex rhs, double residual, const std::string& check,
                const std::string& relation = "<=") const {
    return make(suite_, std::move(name), lhs, rhs, residual, tol(check), relation);
  }

  Record identity(std::string name, const IdentityCheck& c, const std::string& check) const {
    return record(std::move(name), c.lhs, c.rhs, c.scaled_residual(), check);
  }

  /// Runs fn(i, rng) for i < count in parallel; each case has its own seed.
  template <class Fn>
  std::vector<Record> cases(int count, Fn&& fn) const {
    std::vector<std::vector<Record>> slots(static_cast<std::size_t>(count));
    const std::uint64_t suite_seed = derive_seed(cfg_.seed, fnv1a(suite_));
    parallel_for(slots.size(), cfg_.workers, [&](std::size_t i) {
      Rng rng(derive_seed(suite_seed, i));
      slots[i] = fn(static_cast<int>(i), rng);
    });
    std::vector<Record> out;
    for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
    return out;
  }

  int trials(int fallback) const { return cfg_.trials > 0 ? cfg_.trials : fallback; }
  const SuiteConfig& cfg() const { return cfg_; }

private:
  std::string suite_;
  const SuiteConfig& cfg_;
};

inline std::string idx(const std::string& base, int i) { return base + "/" + std::to_string(i); }

/// Rank-k element of the space with spectral norm drawn from [lo, hi].
inline Matrix sample_element(const TripleSpace& sp, int k, double lo, double hi, Rng& rng) {
  const double norm = rng.uniform(lo, hi);
  return random_element(sp.r(), sp.s(), k, norm, rng);
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace detail

// ---------------------------------------------------------------------------

inline std::vector<Record> suite_bergman(const SuiteConfig& cfg) {
  detail::SuiteRun run("bergman", cfg);
  const TripleSpace sp = cfg.space();
  return run.cases(run.trials(200), [&](int i, Rng& rng) {
    const Matrix z = detail::sample_element(sp, sp.r(), 0.1, 0.9, rng);
    const Matrix w = detail::sample_element(sp, sp.r(), 0.1, 0.9, rng);
    const Matrix v = ginibre(sp.r(), sp.s(), rng);
    const Complex det = bergman_det(z, w);
    const Complex dp = std::pow(delta(z, w), sp.genus());
    const Matrix direct = bergman_apply(z, w, v);
    const Matrix expanded = bergman_apply_triple(z, w, v);
    return std::vector<Record>{
        run.record(detail::idx("det", i), det, dp, std::abs(det - dp) / std::abs(dp), "det"),
        run.record(detail::idx("expansion", i), direct.norm(), expanded.norm(), detail::max_abs(direct - expanded),
                   "expansion")};
  });
}

inline std::vector<Record> suite_peirce(const SuiteConfig& cfg) {
  detail::SuiteRun run("peirce", cfg);
  const TripleSpace sp = cfg.space();
  const int lam = sp.lambda();
  return run.cases(run.trials(20), [&](int i, Rng& rng) {
    std::vector<Record> out;
    const Tripotent c = random_tripotent(sp, lam, rng);
    const Matrix v = ginibre(sp.r(), sp.s(), rng);
    const Matrix p0 = peirce_project(c, v, 0);
    const Matrix p1 = peirce_project(c, v, 1);
    const Matrix p2 = peirce_project(c, v, 2);
    out.push_back(run.record(detail::idx("tripotent", i), 0.0, 0.0,
                             (quadratic_rep(c.element(), c.element()) - c.element()).norm(), "tripotent"));
    out.push_back(run.record(detail::idx("resolution", i), (p0 + p1 + p2).norm(), v.norm(),
                             detail::max_abs(p0 + p1 + p2 - v), "projections"));
    double cross = 0.0;
    const Matrix parts[3] = {p0, p1, p2};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const Matrix pp = peirce_project(c, parts[b], a);
        cross = std::max(cross, detail::max_abs(a == b ? Matrix(pp - parts[b]) : pp));
      }
    out.push_back(run.record(detail::idx("orthogonality", i), 0.0, 0.0, cross, "projections"));
    const Matrix dcc = box_operator(c.element(), c.element(), v);
    out.push_back(run.record(detail::idx("spectral", i), dcc.norm(), (2.0 * p2 + p1).norm(),
                             detail::max_abs(dcc - 2.0 * p2 - p1), "projections"));

    // dimensions of the Peirce 2- and 1-spaces from the projections of a basis
    const Eigen::Index n = sp.r() * sp.s();
    Matrix img2(n, n);
    Matrix img1(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(sp.r(), sp.s());
      e(j % sp.r(), j / sp.r()) = 1.0;
      img2.col(j) = peirce_project(c, e, 2).reshaped();
      img1.col(j) = peirce_project(c, e, 1).reshaped();
    }
    const double dim2 = rank(img2, 1e-8);
    const double dim1 = rank(img1, 1e-8);
    out.push_back(run.record(detail::idx("dim2", i), dim2, sp.d2(), std::abs(dim2 - sp.d2()), "dimension"));
    out.push_back(run.record(detail::idx("dim1", i), dim1, sp.d1(), std::abs(dim1 - sp.d1()), "dimension"));

    // N_c in a second frame of the same tripotent
    const Matrix a = haar_unitary(lam, rng);
    Matrix u2 = c.frame_u();
    Matrix w2 = c.frame_w();
    u2.leftCols(lam) = u2.leftCols(lam) * a;
    w2.leftCols(lam) = w2.leftCols(lam) * a;
    if (sp.r() > lam) u2.rightCols(sp.r() - lam) = u2.rightCols(sp.r() - lam) * haar_unitary(sp.r() - lam, rng);
    if (sp.s() > lam) w2.rightCols(sp.s() - lam) = w2.rightCols(sp.s() - lam) * haar_unitary(sp.s() - lam, rng);
    const Tripotent c2 = Tripotent::from_frame(u2, w2, lam);
    const Matrix x = p2 + c.element();
    const Complex n1 = jordan_det_Nc(c, x);
    const Complex n2 = jordan_det_Nc(c2, x);
    out.push_back(run.record(detail::idx("frame", i), n1, n2, std::abs(n1 - n2) / std::max(1.0, std::abs(n2)),
                             "frame"));

    // pseudo-inverse identities on a rank-lambda element
    const Matrix z = detail::sample_element(sp, lam, 0.2, 1.5, rng);
    const Matrix zt = pseudo_inverse(z);
    const Matrix probe = ginibre(sp.r(), sp.s(), rng);
    const double r1 = (quadratic_rep(z, zt) - z).norm();
    const double r2 = (quadratic_rep(zt, z) - zt).norm();
    const double r3 = (quadratic_rep(z, quadratic_rep(zt, probe)) - quadratic_rep(zt, quadratic_rep(z, probe))).norm();
    out.push_back(run.record(detail::idx("pseudo-inverse", i), z.norm(), zt.norm(), std::max({r1, r2, r3}),
                             "pseudo-inverse"));
    return out;
  });
}

inline std::vector<Record> suite_fischer_fock(const SuiteConfig& cfg) {
  detail::SuiteRun run("fischer-fock", cfg);
  const TripleSpace sp = cfg.space();
  const auto parts = enumerate_partitions(sp.r(), cfg.M);
  return run.cases(run.trials(100), [&](int i, Rng& rng) {
    const Matrix z = detail::sample_element(sp, sp.r(), 0.05, 0.5, rng);
    const Matrix w = detail::sample_element(sp, sp.r(), 0.05, 0.5, rng);
    const FischerFock ff(z, w, cfg.M);
    const FischerFock ffc(w, z, cfg.M);
    const Matrix u = haar_unitary(sp.r(), rng);
    const Matrix k = haar_unitary(sp.s(), rng);
    const FischerFock ffk(u * z * k, u * w * k, cfg.M);
    CompensatedSum sum;
    double symmetry = 0.0;
    double invariance = 0.0;
    for (const auto& mu : parts) {
      const Complex e = ff.E(mu);
      sum.add(e);
      symmetry = std::max(symmetry, std::abs(e - std::conj(ffc.E(mu))));
      invariance = std::max(invariance, std::abs(e - ffk.E(mu)));
    }
    const Complex exact = std::exp((z * w.adjoint()).trace());
    return std::vector<Record>{
        run.record(detail::idx("expansion", i), sum.value(), exact, std::abs(sum.value() - exact) / std::abs(exact),
                   "expansion"),
        run.record(detail::idx("conjugate-symmetry", i), 0.0, 0.0, symmetry, "symmetry"),
        run.record(detail::idx("k-invariance", i), 0.0, 0.0, invariance, "invariance")};
  });
}

inline std::vector<Record> suite_faraut_koranyi(const SuiteConfig& cfg) {
  detail::SuiteRun run("faraut-koranyi", cfg);
  const TripleSpace base = cfg.space();
  const TripleSpace sp(base.r(), base.s(), base.r());
  const KernelSpec spec(sp, CoefficientSequence::nu_rule(cfg.nu), cfg.M);
  const std::string check = sp.r() == 1 ? "rank-one" : "kernel";
  return run.cases(run.trials(20), [&](int i, Rng& rng) {
    const Matrix z = detail::sample_element(sp, sp.r(), 0.05, 0.35, rng);
    const Matrix w = detail::sample_element(sp, sp.r(), 0.05, 0.35, rng);
    const Complex k = kernel_eval(spec, z, w).value;
    const Complex closed = std::pow(delta(z, w), -cfg.nu);
    return std::vector<Record>{run.record(detail::idx(check, i), k, closed, std::abs(k - closed), check)};
  });
}

inline std::vector<Record> suite_beta_integral(const SuiteConfig& cfg) {
  detail::SuiteRun run("beta-integral", cfg);
  const TripleSpace sp = cfg.space();
  std::vector<Record> out;
  if (sp.lambda() == 1) {
    for (const Partition& mu : {Partition{}, Partition{1}, Partition{3}}) {
      const auto res = beta_integral_quadrature(sp, cfg.nu, mu);
      out.push_back(run.record("quadrature/" + mu.to_string(), res.lhs, res.rhs, res.abs_error, "quadrature"));
    }
  } else if (sp.lambda() == 2) {
    const std::vector<Partition> mus = {Partition{}, Partition{1}, Partition{1, 1}, Partition{2, 1}};
    const auto results = beta_integral_monte_carlo(sp, cfg.nu, mus, derive_seed(cfg.seed, 0xbe7a), cfg.mc_samples,
                                                   cfg.workers);
    for (const auto& res : results) {
      const double allowed =
          std::max(run.tol("mc-relative") * std::abs(res.rhs), run.tol("mc-sigmas") * res.std_error);
      out.push_back(detail::SuiteRun::make("beta-integral", "monte-carlo/" + res.mu.to_string(), res.lhs, res.rhs,
                                           res.abs_error, allowed));
    }
  } else {
    throw ConfigError("beta-integral: numeric check needs lambda in {1, 2}");
  }
  return out;
}

inline std::vector<Record> suite_reproducing(const SuiteConfig& cfg) {
  detail::SuiteRun run("reproducing", cfg);
  // runs on the ball C^{1 x s} when the configured space is not a ball
  const TripleSpace sp = cfg.space().r() == 1 ? cfg.space() : TripleSpace(1, cfg.space().s(), 1);
  std::vector<Record> out;
  for (int m : {0, 1, 3}) {
    const auto res =
        reproducing_property_check(sp.s(), cfg.nu, m, derive_seed(cfg.seed, 0x5e + m), cfg.sphere_samples, cfg.workers);
    out.push_back(run.record("monomial/" + std::to_string(m), res.lhs, res.rhs, res.relative_error,
                             m == 0 ? "normalization" : "relative"));
  }
  return out;
}

inline std::vector<Record> suite_charts(const SuiteConfig& cfg) {
  detail::SuiteRun run("charts", cfg);
  const TripleSpace sp = cfg.space();
  return run.cases(run.trials(50), [&](int i, Rng& rng) {
    const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
    const Matrix w = sigma_c(p);
    const ChartPoint back = chart_inverse(p.c, w);
    const double trip = std::max((sigma_c(back) - w).norm(), (chart_coordinates(back) - chart_coordinates(p)).norm());
    const ThetaResult th = theta_c(p.c, p.t);
    const double r1 = (quadratic_rep(th.z, th.z_tilde) - th.z).norm();
    const double r2 = (quadratic_rep(th.z_tilde, th.z) - th.z_tilde).norm();
    const Matrix probe = ginibre(sp.r(), sp.s(), rng);
    const double r3 = (quadratic_rep(th.z, quadratic_rep(th.z_tilde, probe)) -
                       quadratic_rep(th.z_tilde, quadratic_rep(th.z, probe)))
                          .norm();
    return std::vector<Record>{
        run.record(detail::idx("round-trip", i), w.norm(), sigma_c(back).norm(), trip, "round-trip"),
        run.record(detail::idx("theta", i), th.z_tilde.norm(), th.z_tilde_direct.norm(), th.agreement, "theta"),
        run.record(detail::idx("pseudo-inverse", i), th.z.norm(), th.z_tilde.norm(), std::max({r1, r2, r3}),
                   "pseudo-inverse")};
  });
}

inline std::vector<Record> suite_cocycle(const SuiteConfig& cfg) {
  detail::SuiteRun run("cocycle", cfg);
  const TripleSpace sp = cfg.space();
  return run.cases(run.trials(50), [&](int i, Rng& rng) {
    const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
    const Tripotent c1 = random_tripotent(sp, sp.lambda(), rng);
    const Tripotent c2 = random_tripotent(sp, sp.lambda(), rng);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const BundleGerm g{p, std::polar(rng.uniform(0.5, 2.0), phase)};
    const BundleGerm via = transition_germ(transition_germ(g, c1), c2);
    const BundleGerm direct = transition_germ(g, c2);
    const BundleGerm same = transition_germ(g, p.c);
    const BundleGerm home = transition_germ(direct, p.c);
    const double coef = std::abs(via.coefficient - direct.coefficient) / std::max(1.0, std::abs(direct.coefficient));
    const double point = (chart_coordinates(via.chart) - chart_coordinates(direct.chart)).norm() /
                         std::max(1.0, chart_coordinates(direct.chart).norm());
    const double back = std::abs(home.coefficient - g.coefficient) / std::max(1.0, std::abs(g.coefficient));
    const double ident = std::abs(same.coefficient - g.coefficient) +
                         (chart_coordinates(same.chart) - chart_coordinates(p)).norm();
    return std::vector<Record>{
        run.record(detail::idx("cocycle", i), via.coefficient, direct.coefficient, std::max(coef, point), "cocycle"),
        run.record(detail::idx("return", i), home.coefficient, g.coefficient, back, "cocycle"),
        run.record(detail::idx("identity", i), same.coefficient, g.coefficient, ident, "identity")};
  });
}

inline std::vector<Record> suite_lemma_e(const SuiteConfig& cfg) {
  detail::SuiteRun run("lemma-e", cfg);
  const TripleSpace sp = cfg.space();
  return run.cases(run.trials(100), [&](int i, Rng& rng) {
    const ChartPoint p = random_chart_point(sp, rng, 0.9, 0.6);
    return std::vector<Record>{run.identity(detail::idx("determinant", i), peirce_determinant_check(p.c, p.t), "determinant")};
  });
}

inline std::vector<Record> suite_e_shift(const SuiteConfig& cfg) {
  detail::SuiteRun run("e-shift", cfg);
  const TripleSpace sp = cfg.space();
  const auto parts = enumerate_partitions(sp.lambda(), 4);
  return run.cases(run.trials(100), [&](int i, Rng& rng) {
    const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
    const Matrix z = detail::sample_element(sp, sp.lambda(), 0.1, 0.9, rng);
    IdentityCheck worst;
    for (const auto& mu : parts) {
      const IdentityCheck c = shifted_component_check(mu, z, p);
      if (c.scaled_residual() >= worst.scaled_residual()) worst = c;
    }
    return std::vector<Record>{run.identity(detail::idx("shift", i), worst, "shift")};
  });
}

inline std::vector<Record> suite_prop_d(const SuiteConfig& cfg) {
  detail::SuiteRun run("prop-d", cfg);
  const TripleSpace sp = cfg.space();
  const KernelSpec spec = cfg.kernel(1);
  return run.cases(run.trials(100), [&](int i, Rng& rng) {
    const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
    const Matrix z = detail::sample_element(sp, sp.lambda(), 0.05, 0.6, rng);
    return std::vector<Record>{
        run.identity(detail::idx("factorization", i), truncated_factorization_check(spec, z, p), "factorization")};
  });
}

inline std::vector<Record> suite_prop_h(const SuiteConfig& cfg) {
  detail::SuiteRun run("prop-h", cfg);
  const TripleSpace sp = cfg.space();
  const KernelSpec spec = cfg.kernel(1);
  return run.cases(run.trials(100), [&](int i, Rng& rng) {
    const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
    std::vector<Record> out{
        run.identity(detail::idx("diagonal", i), diagonal_factorization_check(spec, p), "diagonal")};
    // the same point in a second chart
    const Tripotent c2 = random_tripotent(sp, sp.lambda(), rng);
    const ChartPoint q = chart_inverse(c2, sigma_c(p));
    const double qww = q_kernel_eval(spec, sigma_c(p), sigma_c(p)).value.real();
    const double h1 = peirce_one_weight(p.t) * std::norm(jordan_det_Nc(p.c, p.s, 1e-8)) * qww;
    const double h2 = peirce_one_weight(q.t) * std::norm(jordan_det_Nc(q.c, q.s, 1e-8)) * qww;
    out.push_back(run.identity(detail::idx("chart-independence", i), IdentityCheck::of(h1, h2), "chart-independence"));
    return out;
  });
}

inline std::vector<Record> suite_embedding(const SuiteConfig& cfg) {
  detail::SuiteRun run("embedding", cfg);
  const TripleSpace sp = cfg.space();
  const KernelSpec spec = cfg.kernel(1);
  std::vector<Record> out;
  {
    const Tripotent c = standard_tripotent(sp.r(), sp.s(), sp.lambda());
    const ChartPoint p{c, 0.5 * c.element(), Matrix::Zero(sp.r(), sp.s())};
    out.push_back(run.identity("base-point", embedding_check(spec, p), "isometry"));
  }
  auto random = run.cases(run.trials(100), [&](int i, Rng& rng) {
    const ChartPoint p = random_chart_point(sp, rng, 0.8, 0.6);
    std::vector<Record> recs{run.identity(detail::idx("isometry", i), embedding_check(spec, p), "isometry")};
    for (double alpha : {0.3, 0.7}) {
      const ChartPoint scaled{p.c, alpha * p.s, p.t};
      recs.push_back(run.identity(detail::idx("scaled-" + std::to_string(alpha).substr(0, 3), i),
                                  embedding_check(spec, scaled), "isometry"));
    }
    return recs;
  });
  out.insert(out.end(), random.begin(), random.end());
  return out;
}

/// Diagonal Q evaluator of a generator sequence, truncated so that Q is a
/// polynomial of weight <= max_weight.
inline std::function<double(const TripleElement&)> q_generator(const TripleSpace& space,
                                                               const CoefficientSequence& seq, int max_weight) {
  const KernelSpec spec(space, seq, max_weight + space.lambda(), 1);
  return [spec](const TripleElement& x) { return q_kernel_eval(spec, x, x).value.real(); };
}

inline std::vector<Record> suite_recovery(const SuiteConfig& cfg) {
  detail::SuiteRun run("recovery", cfg);
  const TripleSpace sp = cfg.space();
  const int mw = cfg.recovery_weight;
  std::vector<Record> out;
  const auto nu_seq = CoefficientSequence::nu_rule(cfg.nu);
  const auto hardy_seq = CoefficientSequence::hardy();
  const auto nu_res = recover_coefficients(sp, q_generator(sp, nu_seq, mw), mw);
  const auto hardy_res = recover_coefficients(sp, q_generator(sp, hardy_seq, mw), mw);
  for (const auto& [mu, v] : nu_res.rho) {
    const double exact = nu_seq.value(sp, mu);
    out.push_back(run.record("nu/" + mu.to_string(), v, exact, std::abs(v - exact), "round-trip"));
  }
  for (const auto& [mu, v] : hardy_res.rho)
    out.push_back(run.record("hardy/" + mu.to_string(), v, 1.0, std::abs(v - 1.0), "round-trip"));
  const double distinct = max_table_discrepancy(nu_res.rho, hardy_res.rho);
  out.push_back(run.record("distinct", distinct, run.tol("distinct"), distinct, "distinct", ">"));
  const auto again = recover_coefficients(sp, q_generator(sp, nu_seq, mw), mw);
  const double same = max_table_discrepancy(nu_res.rho, again.rho);
  out.push_back(run.record("equal", same, 0.0, same, "equal"));

  // normalized Q at 0 only fixes the ratios rho_{mu+1}/rho_1
  auto plain = q_generator(sp, nu_seq, mw);
  const TripleElement zero = Matrix::Zero(sp.r(), sp.s());
  const double q0 = plain(zero);
  const auto normalized = [&](const TripleElement& x) { return plain(x) / q0; };
  RecoveryOptions opts;
  opts.normalized = true;
  const auto ratio_res = recover_coefficients(sp, normalized, mw, opts);
  const Partition one = Partition{}.plus_rectangle(1, sp.lambda());
  for (const auto& [mu, v] : ratio_res.rho) {
    const double exact = nu_seq.value(sp, mu) / nu_seq.value(sp, one);
    out.push_back(run.record("normalized/" + mu.to_string(), v, exact, std::abs(v - exact), "normalized"));
  }
  return out;
}

inline std::vector<Record> suite_unital_shift(const SuiteConfig& cfg) {
  detail::SuiteRun run("unital-shift", cfg);
  const int n = cfg.space().r();
  const auto parts = enumerate_partitions(n, 4);
  std::vector<Record> out;
  const Matrix e = Matrix::Identity(n, n);
  for (const auto& mu : parts) {
    const FischerFock ff(e, e, mu.weight());
    const double rhs = static_cast<double>(dim_P_mu(n, n, mu)) / pochhammer(static_cast<double>(n), mu, 2.0);
    const Complex lhs = ff.E(mu);
    out.push_back(run.record("tube/" + mu.to_string(), lhs, rhs, std::abs(lhs - rhs) / std::max(1.0, rhs), "tube"));
  }
  auto random = run.cases(run.trials(50), [&](int i, Rng& rng) {
    const Matrix z = random_element(n, n, n, rng.uniform(0.2, 0.9), rng);
    const Matrix w = random_element(n, n, n, rng.uniform(0.2, 0.9), rng);
    IdentityCheck worst;
    for (const auto& mu : parts) {
      const IdentityCheck c = unital_shift_check(mu, z, w);
      if (c.scaled_residual() >= worst.scaled_residual()) worst = c;
    }
    return std::vector<Record>{run.identity(detail::idx("shift", i), worst, "shift")};
  });
  out.insert(out.end(), random.begin(), random.end());
  return out;
}

inline std::vector<Record> suite_vanishing(const SuiteConfig& cfg) {
  detail::SuiteRun run("vanishing", cfg);
  const TripleSpace sp = cfg.space();
  const int lam = sp.lambda();
  return run.cases(run.trials(10), [&](int i, Rng& rng) {
    std::vector<Record> out;
    const Matrix z = detail::sample_element(sp, lam, 0.3, 0.6, rng);
    const Matrix w0 = lam > 1 ? detail::sample_element(sp, lam - 1, 0.2, 0.4, rng) : Matrix(Matrix::Zero(sp.r(), sp.s()));
    const Matrix u = detail::sample_element(sp, 1, 0.3, 0.5, rng);
    for (int k = 1; k <= std::max(1, cfg.k); ++k) {
      if (cfg.M < k * lam) break;
      const KernelSpec spec = cfg.kernel(k);
      const Complex at_zero = truncated_kernel_eval(spec, z, w0).value;
      out.push_back(run.record(detail::idx("rank-deficient-k" + std::to_string(k), i), at_zero, 0.0,
                               std::abs(at_zero), "rank-deficient"));
      double slope = std::numeric_limits<double>::infinity();
      double prev = std::abs(truncated_kernel_eval(spec, z, w0 + 0.1 * u).value);
      for (double eps : {0.05, 0.025}) {
        const double cur = std::abs(truncated_kernel_eval(spec, z, w0 + eps * u).value);
        slope = std::min(slope, std::log2(prev / cur));
        prev = cur;
      }
      out.push_back(run.record(detail::idx("slope-k" + std::to_string(k), i), slope, k, std::max(0.0, k - slope),
                               "slope"));
    }
    return out;
  });
}

inline std::vector<Record> suite_curvature(const SuiteConfig& cfg) {
  detail::SuiteRun run("curvature", cfg);
  std::vector<Record> out;
  const Vector origin = Vector::Zero(1);
  const ChartMetric fubini = [](const Vector& v) { return 1.0 + std::norm(v(0)); };
  const double nu = cfg.nu;
  const ChartMetric ball = [nu](const Vector& v) { return std::pow(1.0 - std::norm(v(0)), -nu); };

  const Complex k_fs = curvature(fubini, origin).matrix(0, 0);
  out.push_back(run.record("fubini-study/origin", k_fs, 1.0, std::abs(k_fs - 1.0), "oracle"));
  const Complex k_ball = curvature(ball, origin).matrix(0, 0);
  out.push_back(run.record("ball/origin", k_ball, nu, std::abs(k_ball - nu), "oracle"));

  Vector tau(1);
  tau(0) = Complex(0.3, 0.0);
  const Complex k_tau = curvature(fubini, tau).matrix(0, 0);
  const double derived = std::pow(1.0 + 0.09, -2.0);
  const double reciprocal = std::pow(1.0 - 0.09, -2.0);
  out.push_back(run.record("fubini-study/derived", k_tau, derived, std::abs(k_tau - derived), "oracle"));
  out.push_back(run.record("fubini-study/reciprocal", k_tau, reciprocal, std::abs(k_tau - reciprocal), "reciprocal", ">"));

  // bundle metric on the exceptional fibre s = 0 and at a generic point
  const TripleSpace sp = cfg.space();
  const KernelSpec spec = cfg.kernel(1);
  auto random = run.cases(run.trials(5), [&](int i, Rng& rng) {
    const ChartPoint p = random_chart_point(sp, rng, 0.6, 0.5);
    const ChartMetric h = chart_metric(spec, p.c);
    Vector coords = chart_coordinates(p);
    const int t0 = sp.lambda() * sp.lambda();
    for (int j = 0; j < t0; ++j) coords(j) = 0.0;
    for (Eigen::Index j = t0 + 1; j < coords.size(); ++j) coords(j) = 0.0;
    const Complex tv = coords(t0);
    const CurvatureReport fibre = curvature(h, coords);
    const double oracle = std::pow(1.0 + std::norm(tv), -2.0);
    const CurvatureReport generic = curvature(h, chart_coordinates(p));
    const double herm = detail::max_abs(generic.matrix - generic.matrix.adjoint());
    return std::vector<Record>{
        run.record(detail::idx("exceptional-fibre", i), fibre.matrix(t0, t0), oracle,
                   std::abs(fibre.matrix(t0, t0) - oracle), "oracle"),
        run.record(detail::idx("hermitian", i), generic.matrix.norm(), generic.matrix.adjoint().norm(), herm,
                   "hermitian")};
  });
  out.insert(out.end(), random.begin(), random.end());
  return out;
}

inline std::vector<Record> run_suite(const std::string& name, const SuiteConfig& cfg) {
  static const std::map<std::string, std::function<std::vector<Record>(const SuiteConfig&)>> table = {
      {"bergman", suite_bergman},
      {"peirce", suite_peirce},
      {"fischer-fock", suite_fischer_fock},
      {"faraut-koranyi", suite_faraut_koranyi},
      {"beta-integral", suite_beta_integral},
      {"charts", suite_charts},
      {"cocycle", suite_cocycle},
      {"lemma-e", suite_lemma_e},
      {"prop-d", suite_prop_d},
      {"prop-h", suite_prop_h},
      {"embedding", suite_embedding},
      {"recovery", suite_recovery},
      {"e-shift", suite_e_shift},
      {"unital-shift", suite_unital_shift},
      {"vanishing", suite_vanishing},
      {"reproducing", suite_reproducing},
      {"curvature", suite_curvature}};
  auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown suite '" + name + "'");
  return it->second(cfg);
}

}  // namespace kepler
