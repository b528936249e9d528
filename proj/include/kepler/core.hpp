#pragma once

// Shared vocabulary: scalar/matrix aliases, error hierarchy, tolerances,
// the seeded random source and a small deterministic parallel map.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace kepler {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// A point of the ambient triple C^{r x s}.
using TripleElement = Matrix;

// ---------------------------------------------------------------------------
// errors

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
  using Error::Error;
};

/// Invalid parameters or configuration (maps to CLI exit code 2).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (exit code 3).
class DomainError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Point not in the range of a blow-up chart.
class ChartError : public DomainError {
public:
  using DomainError::DomainError;
};

class IllConditionedError : public DomainError {
public:
  IllConditionedError(const std::string& what, double condition)
      : DomainError(what), condition_(condition) {}
  double condition() const { return condition_; }

private:
  double condition_;
};

// ---------------------------------------------------------------------------
// tolerances

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-10;
};

inline bool approx_equal(Complex a, Complex b, Tolerance tol = {}) {
  const double diff = std::abs(a - b);
  return diff <= tol.abs || diff <= tol.rel * std::max(std::abs(a), std::abs(b));
}

/// Two independently computed sides of an identity.
struct IdentityCheck {
  Complex lhs;
  Complex rhs;
  double residual = 0.0;

  static IdentityCheck of(Complex lhs, Complex rhs) { return {lhs, rhs, std::abs(lhs - rhs)}; }

  /// residual / max(1, |rhs|)
  double scaled_residual() const { return residual / std::max(1.0, std::abs(rhs)); }
};

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  }
}

inline double spectral_norm(const Matrix& z) {
  if (z.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(z);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// random numbers
//
// The engine is mt19937_64, whose output sequence is fixed by the standard.
// Uniform and normal variates are derived here rather than through the
// <random> distributions, whose algorithms are implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `index` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL));
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// diag(R) moved into Q.
inline Matrix haar_unitary(Eigen::Index n, Rng& rng) {
  const Matrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Random element of C^{rows x cols} with the given rank and spectral norm.
inline Matrix random_element(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                             double norm, Rng& rng) {
  if (rank < 0 || rank > std::min(rows, cols)) throw ConfigError("random_element: bad rank");
  const Matrix u = haar_unitary(rows, rng);
  const Matrix w = haar_unitary(cols, rng);
  Matrix core = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < rank; ++i) core(i, i) = (i == 0) ? 1.0 : rng.uniform(0.05, 1.0);
  return norm * (u * core * w.adjoint());
}

// ---------------------------------------------------------------------------
// parallel map with a deterministic result layout

inline int default_workers() {
  if (const char* env = std::getenv("KEPLER_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Each index is
/// processed exactly once; callers write results into slot i so the output
/// does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const std::size_t nthreads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += nthreads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace kepler
