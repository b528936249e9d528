#pragma once

// Radial measures on the Kepler ball and their moments: the beta-type
// integral over the order interval 0 < t < c, by quadrature (lambda = 1) or
// seeded Monte Carlo (lambda = 2), and the polar-coordinates check of the
// reproducing property on the unit ball of C^d.

#include <functional>
#include <optional>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "kepler/jordan.hpp"
#include "kepler/partition.hpp"

namespace kepler {

class RadialMeasure {
public:
  enum class Kind { nu, hardy, custom };

  /// Probability measure with density proportional to N(t)^{d1/lambda} N(c - t)^{nu - p}.
  static RadialMeasure nu_measure(double nu) { return RadialMeasure(Kind::nu, nu, {}); }
  /// Point mass at t = c.
  static RadialMeasure hardy() { return RadialMeasure(Kind::hardy, 0.0, {}); }
  /// Density on 0 < t < 1 (lambda = 1), normalized internally.
  static RadialMeasure custom(std::function<double(double)> density) {
    if (!density) throw ConfigError("RadialMeasure: empty density");
    return RadialMeasure(Kind::custom, 0.0, std::move(density));
  }

  Kind kind() const { return kind_; }
  double nu() const { return nu_; }
  const std::function<double(double)>& density() const { return density_; }

private:
  RadialMeasure(Kind kind, double nu, std::function<double(double)> density)
      : kind_(kind), nu_(nu), density_(std::move(density)) {}

  Kind kind_;
  double nu_;
  std::function<double(double)> density_;
};

namespace detail {

inline double integrate_unit_interval(const std::function<double(double)>& f) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, 0.0, 1.0);
}

}  // namespace detail

/// rho_mu = integral of N_mu against the measure.
inline double moment(const TripleSpace& space, const RadialMeasure& measure, const Partition& mu) {
  if (mu.length() > space.lambda()) throw ConfigError("moment: partition longer than lambda");
  switch (measure.kind()) {
    case RadialMeasure::Kind::hardy:
      return 1.0;
    case RadialMeasure::Kind::nu: {
      const double den = pochhammer(measure.nu(), mu, space.a());
      if (den == 0.0) throw DomainError("moment: nu is a pole of (nu)_mu");
      return pochhammer(space.d_lambda() / space.lambda(), mu, space.a()) / den;
    }
    case RadialMeasure::Kind::custom: {
      if (space.lambda() != 1) throw ConfigError("moment: custom densities are supported for lambda = 1 only");
      const auto& f = measure.density();
      const int m = mu[0];
      const double mass = detail::integrate_unit_interval(f);
      if (!(mass > 0.0)) throw DomainError("moment: density has no positive mass");
      return detail::integrate_unit_interval([&](double t) { return f(t) * std::pow(t, m); }) / mass;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// beta integral

struct BetaIntegralResult {
  Partition mu;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
  /// Monte Carlo standard error of lhs (0 for quadrature).
  double std_error = 0.0;
  long samples = 0;
};

/// Closed form Gamma(d_lambda/lambda) Gamma(nu - d_lambda/lambda) / Gamma(nu)
/// * (d_lambda/lambda)_mu / (nu)_mu, all Gamma functions of rank lambda.
inline double beta_integral_closed_form(const TripleSpace& space, double nu, const Partition& mu) {
  const int lam = space.lambda();
  const double a = space.a();
  const double e = space.d_lambda() / lam;
  const double log_norm = log_gamma_lambda(e, lam, a) + log_gamma_lambda(nu - e, lam, a) - log_gamma_lambda(nu, lam, a);
  return std::exp(log_norm) * pochhammer(e, mu, a) / pochhammer(nu, mu, a);
}

namespace detail {

inline void check_beta_parameters(const TripleSpace& space, double nu) {
  if (!(nu > space.genus() - 1)) throw DomainError("beta integral: need nu > p - 1 for integrability");
}

}  // namespace detail

/// Left side by tanh-sinh quadrature on (0, 1) for lambda = 1:
/// integral of t^{d1 + m} (1 - t)^{nu - p}.
inline BetaIntegralResult beta_integral_quadrature(const TripleSpace& space, double nu, const Partition& mu) {
  if (space.lambda() != 1) throw ConfigError("beta_integral_quadrature: lambda must be 1");
  if (mu.length() > 1) throw ConfigError("beta_integral_quadrature: partition longer than lambda");
  detail::check_beta_parameters(space, nu);
  const double e1 = space.d1() + mu[0];
  const double e2 = nu - space.genus();
  BetaIntegralResult out;
  out.mu = mu;
  out.lhs = detail::integrate_unit_interval([&](double t) { return std::pow(t, e1) * std::pow(1.0 - t, e2); });
  out.rhs = beta_integral_closed_form(space, nu, mu);
  out.abs_error = std::abs(out.lhs - out.rhs);
  return out;
}

/// Left side by Monte Carlo for lambda = 2, for several partitions on one
/// sample set. Points t = [[t11, x + iy], [x - iy, t22]] are drawn uniformly
/// from the unit-volume box t11, t22 in (0,1), x, y in (-1/2, 1/2); those
/// outside 0 < t < I contribute zero. N_mu(t) = t11^{m1 - m2} det(t)^{m2}.
/// Samples are split into blocks with seeds derive_seed(seed, block).
inline std::vector<BetaIntegralResult> beta_integral_monte_carlo(const TripleSpace& space, double nu,
                                                                 const std::vector<Partition>& mus,
                                                                 std::uint64_t seed, long samples,
                                                                 int workers = default_workers()) {
  if (space.lambda() != 2) throw ConfigError("beta_integral_monte_carlo: lambda must be 2");
  if (samples < 2) throw ConfigError("beta_integral_monte_carlo: need at least two samples");
  for (const auto& mu : mus)
    if (mu.length() > 2) throw ConfigError("beta_integral_monte_carlo: partition longer than lambda");
  detail::check_beta_parameters(space, nu);

  const double e1 = space.d1() / 2.0;
  const double e2 = nu - space.genus();
  const std::size_t nmu = mus.size();
  constexpr long block_size = 1L << 18;
  const auto blocks = static_cast<std::size_t>((samples + block_size - 1) / block_size);
  std::vector<std::vector<double>> sums(blocks, std::vector<double>(nmu, 0.0));
  std::vector<std::vector<double>> squares(blocks, std::vector<double>(nmu, 0.0));

  parallel_for(blocks, workers, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    const long begin = static_cast<long>(b) * block_size;
    const long count = std::min(block_size, samples - begin);
    auto& sum = sums[b];
    auto& sq = squares[b];
    for (long i = 0; i < count; ++i) {
      const double t11 = rng.uniform();
      const double t22 = rng.uniform();
      const double x = rng.uniform(-0.5, 0.5);
      const double y = rng.uniform(-0.5, 0.5);
      const double off = x * x + y * y;
      const double det = t11 * t22 - off;
      const double det_c = (1.0 - t11) * (1.0 - t22) - off;
      if (!(det > 0.0 && det_c > 0.0 && t11 < 1.0)) continue;
      const double base = std::pow(det, e1) * std::pow(det_c, e2);
      for (std::size_t j = 0; j < nmu; ++j) {
        const auto& mu = mus[j];
        const double v = base * std::pow(t11, mu[0] - mu[1]) * std::pow(det, mu[1]);
        sum[j] += v;
        sq[j] += v * v;
      }
    }
  });

  std::vector<BetaIntegralResult> out(nmu);
  const auto n = static_cast<double>(samples);
  for (std::size_t j = 0; j < nmu; ++j) {
    double s = 0.0;
    double q = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      s += sums[b][j];
      q += squares[b][j];
    }
    const double mean = s / n;
    const double var = std::max(0.0, q / n - mean * mean);
    auto& r = out[j];
    r.mu = mus[j];
    r.lhs = mean;
    r.std_error = std::sqrt(var / (n - 1.0));
    r.rhs = beta_integral_closed_form(space, nu, mus[j]);
    r.abs_error = std::abs(r.lhs - r.rhs);
    r.samples = samples;
  }
  return out;
}

struct BetaMethod {
  enum class Kind { quadrature, monte_carlo };
  Kind kind = Kind::quadrature;
  std::uint64_t seed = 0;
  long samples = 0;

  static BetaMethod quadrature() { return {}; }
  static BetaMethod monte_carlo(std::uint64_t seed, long samples) { return {Kind::monte_carlo, seed, samples}; }
};

inline BetaIntegralResult beta_integral_check(const TripleSpace& space, double nu, const Partition& mu,
                                              BetaMethod method) {
  if (method.kind == BetaMethod::Kind::quadrature) return beta_integral_quadrature(space, nu, mu);
  return beta_integral_monte_carlo(space, nu, {mu}, method.seed, method.samples).front();
}

// ---------------------------------------------------------------------------
// reproducing property on the ball of C^d

struct ReproducingCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error = 0.0;
};

/// ||z_1^m||^2 in the nu-module of C^{1 x d} in polar form: the radial factor
/// by quadrature of the normalized radial density, the spherical factor
/// E|k_11|^{2m} by Monte Carlo over Haar unitaries k. Compared with
/// rho_m times the exact sphere norm m!(d-1)!/(m+d-1)!.
inline ReproducingCheck reproducing_property_check(int d, double nu, int m, std::uint64_t seed,
                                                   long samples = 1000000, int workers = default_workers()) {
  if (d < 1 || m < 0) throw ConfigError("reproducing_property_check: need d >= 1, m >= 0");
  if (samples < 1) throw ConfigError("reproducing_property_check: need samples >= 1");
  const TripleSpace space(1, d, 1);
  if (!(nu > d)) throw DomainError("reproducing_property_check: need nu > d");

  const double e1 = space.d1();
  const double e2 = nu - space.genus();
  auto radial = [&](int k) {
    return detail::integrate_unit_interval([&](double t) { return std::pow(t, e1 + k) * std::pow(1.0 - t, e2); });
  };
  const double radial_part = radial(m) / radial(0);

  constexpr long block_size = 1L << 15;
  const auto blocks = static_cast<std::size_t>((samples + block_size - 1) / block_size);
  std::vector<double> sums(blocks, 0.0);
  parallel_for(blocks, workers, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    const long begin = static_cast<long>(b) * block_size;
    const long count = std::min(block_size, samples - begin);
    double acc = 0.0;
    for (long i = 0; i < count; ++i) {
      const Matrix k = haar_unitary(d, rng);
      acc += std::pow(std::norm(k(0, 0)), m);
    }
    sums[b] = acc;
  });
  double total = 0.0;
  for (double v : sums) total += v;
  const double sphere_mc = total / static_cast<double>(samples);

  double sphere_exact = 1.0;
  for (int i = 1; i <= m; ++i) sphere_exact *= static_cast<double>(i) / (d - 1 + i);

  ReproducingCheck out;
  out.lhs = radial_part * sphere_mc;
  out.rhs = moment(space, RadialMeasure::nu_measure(nu), Partition{m}) * sphere_exact;
  out.relative_error = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
  return out;
}

}  // namespace kepler
