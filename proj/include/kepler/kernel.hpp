#pragma once

// Reproducing kernels of the K-invariant Hilbert modules on the Kepler ball,
// the truncated kernels of the submodules vanishing on V_{lambda-1}, the
// Q-kernel cross-section, normalized kernels, and coefficient recovery.

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "kepler/jordan.hpp"
#include "kepler/partition.hpp"

namespace kepler {

/// Positive weights rho_mu (rho_0 = 1) defining the module inner product
/// (f|g) = sum_mu rho_mu (f_mu|g_mu)_S.
class CoefficientSequence {
public:
  enum class Kind { table, nu_rule, hardy };

  static CoefficientSequence hardy() { return CoefficientSequence(Kind::hardy, 0.0, {}); }

  /// rho_mu = (d_lambda/lambda)_mu / (nu)_mu, the moments of the measure rho^nu.
  static CoefficientSequence nu_rule(double nu) { return CoefficientSequence(Kind::nu_rule, nu, {}); }

  static CoefficientSequence table(std::map<Partition, double> values) {
    auto it = values.find(Partition{});
    if (it == values.end()) values.emplace(Partition{}, 1.0);
    else if (it->second != 1.0) throw ConfigError("CoefficientSequence: rho_0 must be 1");
    for (const auto& [mu, v] : values)
      if (!(v > 0.0)) throw ConfigError("CoefficientSequence: value for " + mu.to_string() + " not positive");
    return CoefficientSequence(Kind::table, 0.0, std::move(values));
  }

  /// Tabulates fn over all partitions of length <= lambda and weight <= max_weight.
  static CoefficientSequence tabulate(int lambda, int max_weight,
                                      const std::function<double(const Partition&)>& fn) {
    std::map<Partition, double> values;
    for (const auto& mu : enumerate_partitions(lambda, max_weight)) values[mu] = mu.empty() ? 1.0 : fn(mu);
    return table(std::move(values));
  }

  Kind kind() const { return kind_; }
  double nu() const { return nu_; }

  void validate(const TripleSpace& space) const {
    if (kind_ == Kind::nu_rule) {
      const double bound = space.d_lambda() / space.lambda() + 0.5 * space.a() * (space.lambda() - 1);
      if (!(nu_ > bound))
        throw ConfigError("nu-rule requires nu > " + std::to_string(bound) + " on " + space.describe());
    }
  }

  double value(const TripleSpace& space, const Partition& mu) const {
    switch (kind_) {
      case Kind::hardy:
        return 1.0;
      case Kind::nu_rule:
        return pochhammer(space.d_lambda() / space.lambda(), mu, space.a()) / pochhammer(nu_, mu, space.a());
      case Kind::table: {
        auto it = table_.find(mu);
        if (it == table_.end()) throw DomainError("CoefficientSequence: no value for " + mu.to_string());
        return it->second;
      }
    }
    return 0.0;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::hardy:
        return "hardy";
      case Kind::nu_rule:
        return "nu:" + std::to_string(nu_);
      case Kind::table:
        return "table";
    }
    return "";
  }

private:
  CoefficientSequence(Kind kind, double nu, std::map<Partition, double> table)
      : kind_(kind), nu_(nu), table_(std::move(table)) {}

  Kind kind_;
  double nu_;
  std::map<Partition, double> table_;
};

/// Everything needed to evaluate a kernel: the space, the coefficient
/// sequence, the truncation weight and the vanishing order k (0 = full
/// kernel, k >= 1 = submodule of functions vanishing to order k on V_{lambda-1}).
class KernelSpec {
public:
  KernelSpec(TripleSpace space, CoefficientSequence coeffs, int truncation, int vanishing_order = 0)
      : space_(space), coeffs_(std::move(coeffs)), truncation_(truncation), order_(vanishing_order) {
    if (truncation < 0) throw ConfigError("KernelSpec: truncation weight must be >= 0");
    if (vanishing_order < 0) throw ConfigError("KernelSpec: vanishing order must be >= 0");
    if (vanishing_order >= 1 && truncation < vanishing_order * space.lambda())
      throw ConfigError("KernelSpec: truncation below k*lambda leaves an empty series");
    coeffs_.validate(space_);
  }

  const TripleSpace& space() const { return space_; }
  const CoefficientSequence& coefficients() const { return coeffs_; }
  int truncation() const { return truncation_; }
  int vanishing_order() const { return order_; }

  KernelSpec with_order(int k) const { return KernelSpec(space_, coeffs_, truncation_, k); }
  KernelSpec with_truncation(int m) const { return KernelSpec(space_, coeffs_, m, order_); }

private:
  TripleSpace space_;
  CoefficientSequence coeffs_;
  int truncation_;
  int order_;
};

struct SeriesValue {
  Complex value;
  /// Sum of |term| over the outermost weight shell that was summed.
  double tail = 0.0;
  int terms = 0;
};

namespace detail {

inline void check_kepler_ball(const TripleSpace& space, const TripleElement& z, const char* what) {
  if (!space.contains(z)) throw ShapeError(std::string(what) + ": element not in " + space.describe());
  if (spectral_norm(z) >= 1.0) throw DomainError(std::string(what) + ": element outside the spectral unit ball");
  if (rank(z) > space.lambda()) throw DomainError(std::string(what) + ": element has rank above lambda");
}

inline void check_tail(const SeriesValue& v, double tail_tol, const char* what) {
  if (v.tail > tail_tol * std::max(1.0, std::abs(v.value)))
    throw ConvergenceError(std::string(what) + ": tail estimate " + std::to_string(v.tail) +
                           " above tolerance");
}

}  // namespace detail

/// Coefficient of E^mu in the kernel: (d/r)_mu/rho_mu * (ra/2)_mu/(lambda a/2)_mu.
inline double kernel_coefficient(const KernelSpec& spec, const Partition& mu) {
  const auto& sp = spec.space();
  if (mu.length() > sp.lambda()) throw ConfigError("kernel_coefficient: partition longer than lambda");
  const double a = sp.a();
  const double num = pochhammer(static_cast<double>(sp.dim()) / sp.r(), mu, a) * pochhammer(sp.r() * a / 2, mu, a);
  const double den = spec.coefficients().value(sp, mu) * pochhammer(sp.lambda() * a / 2, mu, a);
  return num / den;
}

/// Coefficient of E^mu in the Q-kernel: the kernel coefficient of mu + 1
/// times (d2/lambda)_mu / (d2/lambda)_{mu+1}.
inline double q_coefficient(const KernelSpec& spec, const Partition& mu) {
  const auto& sp = spec.space();
  const Partition shifted = mu.plus_rectangle(1, sp.lambda());
  const double peirce = sp.d2() / sp.lambda();
  return kernel_coefficient(spec, shifted) * pochhammer(peirce, mu, sp.a()) /
         pochhammer(peirce, shifted, sp.a());
}

/// Full kernel: sum over |mu| <= M, length(mu) <= lambda, of coefficient(mu) E^mu(z,w).
inline SeriesValue kernel_eval(const KernelSpec& spec, const TripleElement& z, const TripleElement& w,
                               double tail_tol = std::numeric_limits<double>::infinity()) {
  const auto& sp = spec.space();
  detail::check_kepler_ball(sp, z, "kernel_eval");
  detail::check_kepler_ball(sp, w, "kernel_eval");
  const int m = spec.truncation();
  const FischerFock ff(z, w, m);
  CompensatedSum sum;
  SeriesValue out;
  for (const auto& mu : enumerate_partitions(sp.lambda(), m)) {
    const Complex term = kernel_coefficient(spec, mu) * ff.E(mu);
    sum.add(term);
    if (mu.weight() == m) out.tail += std::abs(term);
    ++out.terms;
  }
  out.value = sum.value();
  detail::check_tail(out, tail_tol, "kernel_eval");
  return out;
}

/// Kernel of the submodule vanishing to order k on V_{lambda-1}: the terms
/// mu + kappa, kappa = (k,...,k) of length lambda, with |mu + kappa| <= M.
inline SeriesValue truncated_kernel_eval(const KernelSpec& spec, const TripleElement& z,
                                         const TripleElement& w,
                                         double tail_tol = std::numeric_limits<double>::infinity()) {
  const auto& sp = spec.space();
  const int k = spec.vanishing_order();
  if (k < 1) throw ConfigError("truncated_kernel_eval: vanishing order must be >= 1");
  detail::check_kepler_ball(sp, z, "truncated_kernel_eval");
  detail::check_kepler_ball(sp, w, "truncated_kernel_eval");
  const int m = spec.truncation();
  const FischerFock ff(z, w, m);
  CompensatedSum sum;
  SeriesValue out;
  for (const auto& mu : enumerate_partitions(sp.lambda(), m - k * sp.lambda())) {
    const Partition shifted = mu.plus_rectangle(k, sp.lambda());
    const Complex term = kernel_coefficient(spec, shifted) * ff.E(shifted);
    sum.add(term);
    if (shifted.weight() == m) out.tail += std::abs(term);
    ++out.terms;
  }
  out.value = sum.value();
  detail::check_tail(out, tail_tol, "truncated_kernel_eval");
  return out;
}

/// Q-kernel: sum over |mu + 1| <= M of q_coefficient(mu) E^mu(z,w). With this
/// truncation the factorization of the truncated kernel through Q holds term
/// by term.
inline SeriesValue q_kernel_eval(const KernelSpec& spec, const TripleElement& z, const TripleElement& w,
                                 double tail_tol = std::numeric_limits<double>::infinity()) {
  const auto& sp = spec.space();
  if (spec.vanishing_order() != 1) throw ConfigError("q_kernel_eval: requires vanishing order 1");
  detail::check_kepler_ball(sp, z, "q_kernel_eval");
  detail::check_kepler_ball(sp, w, "q_kernel_eval");
  const int top = spec.truncation() - sp.lambda();
  const FischerFock ff(z, w, top);
  CompensatedSum sum;
  SeriesValue out;
  for (const auto& mu : enumerate_partitions(sp.lambda(), top)) {
    const Complex term = q_coefficient(spec, mu) * ff.E(mu);
    sum.add(term);
    if (mu.weight() == top) out.tail += std::abs(term);
    ++out.terms;
  }
  out.value = sum.value();
  detail::check_tail(out, tail_tol, "q_kernel_eval");
  return out;
}

// ---------------------------------------------------------------------------
// normalized kernels

using KernelFn = std::function<Complex(const TripleElement&, const TripleElement&)>;

/// K^(0)(z,w) = Phi(z) K(z,w) conj(Phi(w)) with Phi(z) = K(w0,w0)^{1/2} / K(z,w0),
/// so that K^(0)(z, w0) = 1.
inline Complex normalized_kernel(const KernelFn& kernel, const TripleElement& w0, const TripleElement& z,
                                 const TripleElement& w) {
  const Complex k00 = kernel(w0, w0);
  const Complex kz0 = kernel(z, w0);
  const Complex kw0 = kernel(w, w0);
  const double floor = 1e-300;
  if (std::abs(kz0) < floor || std::abs(kw0) < floor)
    throw ChartError("normalized_kernel: K(., w0) vanishes at the evaluation point");
  const Complex root = std::sqrt(k00);
  const Complex phi_z = root / kz0;
  const Complex phi_w = root / kw0;
  return phi_z * kernel(z, w) * std::conj(phi_w);
}

inline KernelFn normalize_at(KernelFn kernel, TripleElement w0) {
  return [kernel = std::move(kernel), w0 = std::move(w0)](const TripleElement& z, const TripleElement& w) {
    return normalized_kernel(kernel, w0, z, w);
  };
}

// ---------------------------------------------------------------------------
// coefficient recovery

struct RecoveryOptions {
  /// Evaluator returns the kernel normalized at 0; only ratios rho_{mu+1}/rho_1
  /// are then determined and are what gets returned.
  bool normalized = false;
  /// Collocation matrices with a larger (column-equilibrated) condition
  /// number are rejected.
  double max_condition = 1e12;
};

struct RecoveryResult {
  /// rho_{mu+1}, keyed by the shifted partition mu + 1.
  std::map<Partition, double> rho;
  double condition = 0.0;
  double relative_residual = 0.0;
  int samples = 0;
};

/// Diagonal sample points t_1 > ... > t_lambda > 0 drawn from an arithmetic
/// grid in [0.1, 0.9], with at least `min_count` tuples.
inline std::vector<std::vector<double>> recovery_sample_grid(int lambda, int min_count) {
  auto choose = [](int n, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
  };
  int g = lambda;
  while (choose(g, lambda) < min_count) ++g;
  std::vector<double> base(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) base[static_cast<std::size_t>(i)] = g == 1 ? 0.5 : 0.9 - 0.8 * i / (g - 1);
  std::vector<std::vector<double>> out;
  std::vector<int> idx(static_cast<std::size_t>(lambda));
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == lambda) {
      std::vector<double> t;
      for (int i : idx) t.push_back(base[static_cast<std::size_t>(i)]);
      out.push_back(std::move(t));
      return;
    }
    for (int i = start; i < g; ++i) {
      idx[static_cast<std::size_t>(pos)] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  return out;
}

/// x = sum_i t_i E_ii, a diagonal point built on the frame of standard
/// rank-one tripotents.
inline TripleElement diagonal_point(int r, int s, const std::vector<double>& t) {
  Matrix x = Matrix::Zero(r, s);
  for (std::size_t i = 0; i < t.size(); ++i) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = t[i];
  return x;
}

/// Recovers rho_{mu+1} for |mu| <= max_weight from diagonal values Q(x,x).
///
/// The evaluator is sampled on a grid of diagonal points, the values are
/// fitted against E^mu(x,x) by column-equilibrated least squares, and the
/// Q-coefficient formula is inverted.
inline RecoveryResult recover_coefficients(const TripleSpace& space,
                                           const std::function<double(const TripleElement&)>& diagonal_q,
                                           int max_weight, RecoveryOptions options = {}) {
  if (max_weight < 0) throw ConfigError("recover_coefficients: negative weight");
  const int lambda = space.lambda();
  const auto basis = enumerate_partitions(lambda, max_weight);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const auto grid = recovery_sample_grid(lambda, static_cast<int>(2 * n + 4));
  const auto rows = static_cast<Eigen::Index>(grid.size());

  Eigen::MatrixXd a(rows, n);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const TripleElement x = diagonal_point(space.r(), space.s(), grid[static_cast<std::size_t>(i)]);
    const FischerFock ff(x, x, max_weight);
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = ff.E(basis[static_cast<std::size_t>(j)]).real();
    b(i) = diagonal_q(x);
  }
  Eigen::VectorXd scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    scale(j) = a.col(j).norm();
    a.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  RecoveryResult result;
  result.samples = static_cast<int>(rows);
  result.condition = sv(0) / sv(sv.size() - 1);
  if (!(result.condition <= options.max_condition))
    throw IllConditionedError("recover_coefficients: collocation matrix condition number " +
                                  std::to_string(result.condition),
                              result.condition);
  const Eigen::VectorXd scaled = svd.solve(b);
  result.relative_residual = (a * scaled - b).norm() / b.norm();
  const Eigen::VectorXd q = scaled.cwiseQuotient(scale);

  const KernelSpec unit(space, CoefficientSequence::hardy(), max_weight + lambda, 1);
  const double base = options.normalized ? q_coefficient(unit, Partition{}) / q(0) : 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& mu = basis[static_cast<std::size_t>(j)];
    if (!(q(j) > 0.0))
      throw DomainError("recover_coefficients: non-positive fitted coefficient for " + mu.to_string() +
                        " (inconsistent input)");
    result.rho[mu.plus_rectangle(1, lambda)] = q_coefficient(unit, mu) / q(j) / base;
  }
  return result;
}

/// Largest |rho - rho'| over the common keys of two recovered tables.
inline double max_table_discrepancy(const std::map<Partition, double>& lhs,
                                    const std::map<Partition, double>& rhs) {
  double worst = 0.0;
  for (const auto& [mu, v] : lhs) {
    auto it = rhs.find(mu);
    if (it == rhs.end()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(v - it->second));
  }
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  return worst;
}

}  // namespace kepler
