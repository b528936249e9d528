#pragma once

// Partitions and the partition-indexed special functions: multivariate
// Pochhammer symbols, Koecher-Gindikin Gamma, Schur polynomials and the
// Fischer-Fock components E^mu of exp((z|w)).

#include <compare>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "kepler/core.hpp"
#include "kepler/jordan.hpp"

namespace kepler {

class Partition {
public:
  Partition() = default;
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0) throw ConfigError("Partition: negative part");
      if (i > 0 && parts_[i] > parts_[i - 1]) throw ConfigError("Partition: parts must be weakly decreasing");
    }
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  }

  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }

  int weight() const {
    int total = 0;
    for (int m : parts_) total += m;
    return total;
  }

  /// m_{j+1} (zero-based j); zero past the length.
  int operator[](int j) const { return j < length() ? parts_[static_cast<std::size_t>(j)] : 0; }

  const std::vector<int>& parts() const { return parts_; }

  /// mu + (k, ..., k) with k repeated `len` times.
  Partition plus_rectangle(int k, int len) const {
    if (length() > len) throw ConfigError("Partition: too long for the rectangular shift");
    std::vector<int> out(static_cast<std::size_t>(len));
    for (int j = 0; j < len; ++j) out[static_cast<std::size_t>(j)] = (*this)[j] + k;
    return Partition(std::move(out));
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

  friend auto operator<=>(const Partition&, const Partition&) = default;
  friend bool operator==(const Partition&, const Partition&) = default;

private:
  std::vector<int> parts_;
};

namespace detail {

inline void partitions_of(int remaining, int max_part, int slots, std::vector<int>& prefix,
                          std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  if (slots == 0) return;
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    partitions_of(remaining - part, part, slots - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Partitions of length <= length_bound and weight <= weight_bound, by
/// increasing weight and, within a weight, in decreasing lexicographic order.
inline std::vector<Partition> enumerate_partitions(int length_bound, int weight_bound) {
  if (length_bound < 0 || weight_bound < 0) throw ConfigError("enumerate_partitions: negative bound");
  std::vector<Partition> out;
  std::vector<int> prefix;
  for (int w = 0; w <= weight_bound; ++w) {
    if (w > 0 && length_bound == 0) break;
    detail::partitions_of(w, w, length_bound, prefix, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pochhammer symbols and Gamma functions

/// Classical rising factorial (x)_n.
template <class T>
T rising_factorial(T x, int n) {
  T out{1};
  for (int i = 0; i < n; ++i) out *= x + static_cast<double>(i);
  return out;
}

/// (nu)_mu = prod_j (nu - (a/2)(j-1))_{m_j}
template <class T>
T pochhammer(T nu, const Partition& mu, double a) {
  T out{1};
  for (int j = 0; j < mu.length(); ++j) out *= rising_factorial(nu - 0.5 * a * j, mu[j]);
  return out;
}

/// Constant C(lambda, a) = (a/2) * lambda(lambda-1)/2 * log(pi) of the
/// Koecher-Gindikin Gamma function used here. Every identity in the library
/// involves only ratios of Gamma values, which do not see this constant.
inline double log_gamma_lambda_constant(int lambda, double a) {
  return 0.5 * a * 0.5 * lambda * (lambda - 1) * std::log(M_PI);
}

/// log Gamma_lambda(nu + mu) = C + sum_j log Gamma(nu + m_j - (a/2)(j-1)).
inline double log_gamma_lambda(double nu, const Partition& mu, int lambda, double a) {
  if (lambda < 1) throw ConfigError("log_gamma_lambda: lambda must be positive");
  if (mu.length() > lambda) throw ConfigError("log_gamma_lambda: partition longer than lambda");
  double out = log_gamma_lambda_constant(lambda, a);
  for (int j = 0; j < lambda; ++j) {
    const double arg = nu + mu[j] - 0.5 * a * j;
    if (arg <= 0.0) throw DomainError("log_gamma_lambda: pole at argument " + std::to_string(arg));
    out += boost::math::lgamma(arg);
  }
  return out;
}

inline double log_gamma_lambda(double nu, int lambda, double a) {
  return log_gamma_lambda(nu, Partition{}, lambda, a);
}

// ---------------------------------------------------------------------------
// Young diagram combinatorics

/// Product of the hook lengths of mu.
inline double hook_product(const Partition& mu) {
  double out = 1.0;
  std::vector<int> conj(static_cast<std::size_t>(mu[0]), 0);
  for (int i = 0; i < mu.length(); ++i)
    for (int j = 0; j < mu[i]; ++j) ++conj[static_cast<std::size_t>(j)];
  for (int i = 0; i < mu.length(); ++i)
    for (int j = 0; j < mu[i]; ++j) out *= (mu[i] - j - 1) + (conj[static_cast<std::size_t>(j)] - i - 1) + 1;
  return out;
}

/// Number of standard Young tableaux of shape mu (hook-length formula).
inline std::uint64_t num_syt(const Partition& mu) {
  const int n = mu.weight();
  if (n > 33) throw DomainError("num_syt: weight too large for exact evaluation");
  unsigned __int128 num = 1;
  for (int i = 2; i <= n; ++i) num *= static_cast<unsigned>(i);
  const auto den = static_cast<unsigned __int128>(std::llround(hook_product(mu)));
  return static_cast<std::uint64_t>(num / den);
}

/// Dimension of the irreducible GL_n module of highest weight mu (0 if mu is
/// longer than n), by the hook-content formula.
inline std::uint64_t weyl_dimension(int n, const Partition& mu) {
  if (mu.length() > n) return 0;
  long double num = 1.0L;
  for (int i = 0; i < mu.length(); ++i)
    for (int j = 0; j < mu[i]; ++j) num *= static_cast<long double>(n + j - i);
  return static_cast<std::uint64_t>(std::llround(num / static_cast<long double>(hook_product(mu))));
}

/// dim P_mu(C^{r x s}) = dim_{GL_r}(mu) * dim_{GL_s}(mu).
inline std::uint64_t dim_P_mu(int r, int s, const Partition& mu) {
  if (mu.length() > r) throw ConfigError("dim_P_mu: partition longer than the rank");
  return weyl_dimension(r, mu) * weyl_dimension(s, mu);
}

// ---------------------------------------------------------------------------
// symmetric functions

/// h_0..h_n from power sums p_1..p_n via k h_k = sum_{i=1}^k p_i h_{k-i}.
inline std::vector<Complex> complete_from_power_sums(std::span<const Complex> p, int n) {
  if (static_cast<int>(p.size()) < n) throw ConfigError("complete_from_power_sums: too few power sums");
  std::vector<Complex> h(static_cast<std::size_t>(n) + 1);
  h[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    Complex acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += p[static_cast<std::size_t>(i - 1)] * h[static_cast<std::size_t>(k - i)];
    h[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
  }
  return h;
}

/// Jacobi-Trudi determinant det(h_{mu_i - i + j}).
inline Complex schur_from_complete(const Partition& mu, std::span<const Complex> h) {
  const int len = mu.length();
  if (len == 0) return 1.0;
  auto hk = [&](int k) -> Complex {
    if (k < 0) return 0.0;
    if (k >= static_cast<int>(h.size())) throw ConfigError("schur_from_complete: too few h_k");
    return h[static_cast<std::size_t>(k)];
  };
  if (len == 1) return hk(mu[0]);
  if (len == 2) return hk(mu[0]) * hk(mu[1]) - hk(mu[0] + 1) * hk(mu[1] - 1);
  Matrix jt(len, len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j) jt(i, j) = hk(mu[i] - i + j);
  return jt.determinant();
}

inline Complex schur_from_power_sums(const Partition& mu, std::span<const Complex> p) {
  const auto h = complete_from_power_sums(p, mu.weight());
  return schur_from_complete(mu, h);
}

/// Fischer-Fock components of exp(trace(z w*)) for one pair (z, w).
///
/// E^mu(z,w) = f^mu / |mu|! * s_mu(spec(z w*)) = s_mu / (hook product),
/// with s_mu evaluated from the power sums trace((z w*)^k).
class FischerFock {
public:
  FischerFock(const TripleElement& z, const TripleElement& w, int max_weight) : rows_(z.rows()) {
    require_same_shape(z, w, "FischerFock");
    if (max_weight < 0) throw ConfigError("FischerFock: negative weight bound");
    const Matrix x = z * w.adjoint();
    std::vector<Complex> p(static_cast<std::size_t>(max_weight));
    Matrix power = Matrix::Identity(x.rows(), x.cols());
    for (int k = 1; k <= max_weight; ++k) {
      power = power * x;
      p[static_cast<std::size_t>(k - 1)] = power.trace();
    }
    h_ = complete_from_power_sums(p, max_weight);
  }

  int max_weight() const { return static_cast<int>(h_.size()) - 1; }

  Complex schur(const Partition& mu) const {
    if (mu.weight() > max_weight()) throw ConfigError("FischerFock: weight above precomputed bound");
    return schur_from_complete(mu, h_);
  }

  Complex E(const Partition& mu) const {
    if (mu.length() > rows_) throw ConfigError("E_mu: partition longer than the rank");
    return schur(mu) / hook_product(mu);
  }

private:
  Eigen::Index rows_;
  std::vector<Complex> h_;
};

inline Complex E_mu(const Partition& mu, const TripleElement& z, const TripleElement& w) {
  return FischerFock(z, w, mu.weight()).E(mu);
}

inline Complex E_mu(const TripleSpace& space, const Partition& mu, const TripleElement& z,
                    const TripleElement& w) {
  if (!space.contains(z) || !space.contains(w)) throw ShapeError("E_mu: element not in " + space.describe());
  if (mu.length() > space.r()) throw ConfigError("E_mu: partition longer than the rank");
  return E_mu(mu, z, w);
}

inline std::uint64_t dim_P_mu(const TripleSpace& space, const Partition& mu) {
  return dim_P_mu(space.r(), space.s(), mu);
}

// ---------------------------------------------------------------------------
// summation

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
  void add(Complex x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

private:
  struct Real {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
      const double t = sum + x;
      if (std::abs(sum) >= std::abs(x))
        comp += (sum - t) + x;
      else
        comp += (x - t) + sum;
      sum = t;
    }
    double value() const { return sum + comp; }
  };
  Real re_;
  Real im_;
};

}  // namespace kepler
