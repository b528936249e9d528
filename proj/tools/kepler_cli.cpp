// kepler: verification suites, curvature scans and coefficient recovery.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kepler/kepler.hpp"

namespace {

using namespace kepler;

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;
constexpr int exit_domain = 3;

/// Flags shared by every command. Optional members are only applied when
/// given, so they override the config file.
struct CommonFlags {
  std::string config_path;
  std::optional<int> r, s, lambda, d, M, k, trials, workers, recovery_weight;
  std::optional<double> nu;
  std::optional<std::string> coefficients;
  std::optional<std::uint64_t> seed;
  std::optional<long> mc_samples, sphere_samples;
  std::string out = "-";

  void add(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file; flags override its values");
    app->add_option("--r", r, "rows of the matrix triple");
    app->add_option("--s", s, "columns of the matrix triple");
    app->add_option("--lambda", lambda, "Kepler rank");
    app->add_option("--d", d, "use the ball C^{1 x d}");
    app->add_option("--nu", nu, "parameter of the nu-rule");
    app->add_option("--coefficients", coefficients, "coefficient sequence: nu or hardy");
    app->add_option("--M", M, "truncation weight");
    app->add_option("--k", k, "vanishing order");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--trials", trials, "cases per suite (0 = suite default)");
    app->add_option("--mc-samples", mc_samples, "Monte Carlo samples for the rank-2 beta integral");
    app->add_option("--sphere-samples", sphere_samples, "Haar samples for the reproducing check");
    app->add_option("--recovery-weight", recovery_weight, "largest |mu| recovered");
    app->add_option("--workers", workers, "worker threads (default from KEPLER_WORKERS)");
    app->add_option("--out", out, "output path, - for stdout");
  }

  nlohmann::json load_file() const {
    if (config_path.empty()) return nlohmann::json::object();
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    try {
      return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config file: ") + e.what());
    }
  }

  SuiteConfig resolve(const nlohmann::json& file) const {
    SuiteConfig c;
    apply_json(c, file);
    if (r) c.r = *r;
    if (s) c.s = *s;
    if (lambda) c.lambda = *lambda;
    if (d) c.d = *d;
    if (nu) c.nu = *nu;
    if (coefficients) c.coefficients = *coefficients;
    if (M) c.M = *M;
    if (k) c.k = *k;
    if (seed) c.seed = *seed;
    if (trials) c.trials = *trials;
    if (mc_samples) c.mc_samples = *mc_samples;
    if (sphere_samples) c.sphere_samples = *sphere_samples;
    if (recovery_weight) c.recovery_weight = *recovery_weight;
    if (workers) c.workers = *workers;
    (void)c.space();
    (void)c.sequence();
    return c;
  }
};

class Output {
public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

std::vector<std::string> split_suites(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  if (out.empty() || (out.size() == 1 && out[0] == "all")) return suite_names();
  return out;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const CommonFlags& flags, const std::vector<std::string>& suite_flags) {
  const nlohmann::json file = flags.load_file();
  const SuiteConfig cfg = flags.resolve(file);
  std::vector<std::string> raw = suite_flags;
  if (raw.empty() && file.contains("suites")) raw = file["suites"].get<std::vector<std::string>>();
  const auto suites = split_suites(raw);
  const SuiteReport report = run_suites(suites, cfg);
  Output out(flags.out);
  write_report(out.stream(), report, cfg);
  std::cerr << report.records.size() << " cases, " << report.failed() << " failed\n";
  return report.pass() ? exit_ok : exit_fail;
}

// ---------------------------------------------------------------------------
// curvature-scan

struct ScanFlags {
  std::string metric = "bundle";
  double s0 = 0.0;
  double re_min = -0.5, re_max = 0.5, im_min = -0.5, im_max = 0.5;
  int n = 11;
  double step = 1e-3;
  std::string format = "csv";

  void add(CLI::App* app) {
    app->add_option("--metric", metric, "bundle, fubini-study (1+|t|^2) or ball ((1-|t|^2)^-nu)")
        ->check(CLI::IsMember({"bundle", "fubini-study", "ball"}));
    app->add_option("--s0", s0, "s = s0 * c in the bundle chart");
    app->add_option("--re-min", re_min);
    app->add_option("--re-max", re_max);
    app->add_option("--im-min", im_min);
    app->add_option("--im-max", im_max);
    app->add_option("--n", n, "grid points per axis (0 = empty grid)");
    app->add_option("--step", step, "finite-difference step");
    app->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  }
};

std::string fmt(double x) {
  if (!std::isfinite(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

int cmd_curvature_scan(const CommonFlags& flags, const ScanFlags& scan) {
  const SuiteConfig cfg = flags.resolve(flags.load_file());
  if (scan.n < 0) throw ConfigError("curvature-scan: --n must be >= 0");
  if (!(scan.step > 0.0)) throw ConfigError("curvature-scan: --step must be positive");

  ChartMetric metric;
  Vector base;
  Eigen::Index slot = 0;
  std::function<double(Complex)> oracle;
  if (scan.metric == "bundle") {
    const TripleSpace sp = cfg.space();
    const KernelSpec spec = cfg.kernel(1);
    const Tripotent c = standard_tripotent(sp.r(), sp.s(), sp.lambda());
    metric = chart_metric(spec, c);
    base = chart_coordinates(ChartPoint{c, scan.s0 * c.element(), Matrix::Zero(sp.r(), sp.s())});
    slot = sp.lambda() * sp.lambda();
    if (slot >= base.size()) throw ConfigError("curvature-scan: the chart has no t coordinate");
    if (scan.s0 == 0.0) oracle = [](Complex t) { return std::pow(1.0 + std::norm(t), -2.0); };
  } else if (scan.metric == "fubini-study") {
    metric = [](const Vector& v) { return 1.0 + std::norm(v(0)); };
    base = Vector::Zero(1);
    oracle = [](Complex t) { return std::pow(1.0 + std::norm(t), -2.0); };
  } else {
    const double nu = cfg.nu;
    metric = [nu](const Vector& v) { return std::pow(1.0 - std::norm(v(0)), -nu); };
    base = Vector::Zero(1);
    oracle = [nu](Complex t) { return nu * std::pow(1.0 - std::norm(t), -2.0); };
  }
  const auto dim = base.size();

  struct Row {
    Complex t;
    double h = std::numeric_limits<double>::quiet_NaN();
    Matrix k;
    double oracle = std::numeric_limits<double>::quiet_NaN();
    double err = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
  };
  auto axis = [&](double lo, double hi, int i) { return scan.n == 1 ? lo : lo + (hi - lo) * i / (scan.n - 1); };
  std::vector<Row> rows(static_cast<std::size_t>(scan.n) * static_cast<std::size_t>(scan.n));
  parallel_for(rows.size(), cfg.workers, [&](std::size_t idx) {
    Row& row = rows[idx];
    const int i = static_cast<int>(idx) / scan.n;
    const int j = static_cast<int>(idx) % scan.n;
    row.t = Complex(axis(scan.re_min, scan.re_max, i), axis(scan.im_min, scan.im_max, j));
    row.k = Matrix::Constant(dim, dim, Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
    Vector point = base;
    point(slot) = row.t;
    try {
      const CurvatureReport rep = curvature(metric, point, scan.step);
      row.h = rep.h;
      row.k = rep.matrix;
      row.err = rep.error_estimate;
      if (oracle) row.oracle = oracle(row.t);
    } catch (const DomainError&) {
      row.status = "outside-domain";
    }
  });

  Output out(flags.out);
  std::ostream& os = out.stream();
  if (scan.format == "csv") {
    os << "# kepler-curvature-scan v1\n";
    os << "t_re,t_im,h";
    for (Eigen::Index a = 0; a < dim; ++a)
      for (Eigen::Index b = 0; b < dim; ++b) os << ",k_" << a << "_" << b << "_re,k_" << a << "_" << b << "_im";
    os << ",oracle,fd_err,status\n";
    for (const auto& row : rows) {
      os << fmt(row.t.real()) << ',' << fmt(row.t.imag()) << ',' << fmt(row.h);
      for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < dim; ++b) os << ',' << fmt(row.k(a, b).real()) << ',' << fmt(row.k(a, b).imag());
      os << ',' << fmt(row.oracle) << ',' << fmt(row.err) << ',' << row.status << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["schema"] = "kepler-curvature-scan/1";
    j["config"] = to_json(cfg);
    j["metric"] = scan.metric;
    j["slot"] = slot;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json r;
      r["t"] = complex_json(row.t);
      r["h"] = row.h;
      nlohmann::ordered_json k = nlohmann::ordered_json::array();
      for (Eigen::Index a = 0; a < dim; ++a) {
        nlohmann::ordered_json line = nlohmann::ordered_json::array();
        for (Eigen::Index b = 0; b < dim; ++b) line.push_back(complex_json(row.k(a, b)));
        k.push_back(line);
      }
      r["k"] = k;
      r["oracle"] = row.oracle;
      r["fd_err"] = row.err;
      r["status"] = row.status;
      j["rows"].push_back(r);
    }
    os << j.dump(2) << '\n';
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// recover

CoefficientSequence parse_generator(const std::string& text) {
  if (text == "hardy") return CoefficientSequence::hardy();
  if (text.rfind("nu:", 0) == 0) {
    try {
      return CoefficientSequence::nu_rule(std::stod(text.substr(3)));
    } catch (const std::logic_error&) {
    }
  }
  throw ConfigError("generator must be 'hardy' or 'nu:<value>', got '" + text + "'");
}

nlohmann::ordered_json table_json(const RecoveryResult& res) {
  nlohmann::ordered_json t = nlohmann::ordered_json::array();
  for (const auto& [mu, v] : res.rho) t.push_back({{"mu", mu.to_string()}, {"rho", v}});
  return t;
}

int cmd_recover(const CommonFlags& flags, const std::string& generator, const std::string& compare,
                bool normalized, double max_condition, double equal_tol) {
  const SuiteConfig cfg = flags.resolve(flags.load_file());
  const TripleSpace sp = cfg.space();
  RecoveryOptions opts;
  opts.normalized = normalized;
  opts.max_condition = max_condition;
  auto evaluator = [&](const CoefficientSequence& seq) {
    auto q = q_generator(sp, seq, cfg.recovery_weight);
    if (!normalized) return q;
    const double q0 = q(Matrix::Zero(sp.r(), sp.s()));
    return std::function<double(const TripleElement&)>([q, q0](const TripleElement& x) { return q(x) / q0; });
  };
  const auto gen = parse_generator(generator);
  const RecoveryResult res = recover_coefficients(sp, evaluator(gen), cfg.recovery_weight, opts);

  nlohmann::ordered_json j;
  j["schema"] = "kepler-recovery/1";
  j["config"] = to_json(cfg);
  j["generator"] = generator;
  j["normalized"] = normalized;
  j["condition"] = res.condition;
  j["relative_residual"] = res.relative_residual;
  j["samples"] = res.samples;
  j["table"] = table_json(res);
  if (!compare.empty()) {
    const RecoveryResult other = recover_coefficients(sp, evaluator(parse_generator(compare)), cfg.recovery_weight, opts);
    const double disc = max_table_discrepancy(res.rho, other.rho);
    j["compare"] = {{"generator", compare}, {"condition", other.condition}, {"table", table_json(other)}};
    j["max_discrepancy"] = disc;
    j["equal_tolerance"] = equal_tol;
    j["verdict"] = disc < equal_tol ? "equal" : "distinct";
  }
  Output out(flags.out);
  out.stream() << j.dump(2) << '\n';
  return exit_ok;
}

void print_error(const char* kind, const std::string& message) {
  nlohmann::ordered_json e;
  e["error"] = kind;
  e["message"] = message;
  std::cerr << e.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kepler: Jordan-triple kernels, blow-up charts and verification suites"};
  app.require_subcommand(1);

  CommonFlags verify_flags;
  std::vector<std::string> suites;
  auto* verify = app.add_subcommand("verify", "run verification suites and write a JSON-lines report");
  verify_flags.add(verify);
  verify->add_option("--suite", suites, "suite names (repeatable or comma separated, 'all' for every suite)");

  CommonFlags scan_flags;
  ScanFlags scan;
  auto* curv = app.add_subcommand("curvature-scan", "curvature of a chart metric over a grid of t values");
  scan_flags.add(curv);
  scan.add(curv);

  CommonFlags recover_flags;
  std::string generator = "nu:6";
  std::string compare;
  bool normalized = false;
  double max_condition = 1e12;
  double equal_tol = 1e-8;
  auto* recover = app.add_subcommand("recover", "recover rho_{mu+1} from diagonal values of Q");
  recover_flags.add(recover);
  recover->add_option("--generator", generator, "hardy or nu:<value>");
  recover->add_option("--compare", compare, "second generator for an equal/distinct verdict");
  recover->add_flag("--normalized", normalized, "sample the kernel normalized at 0 (ratios only)");
  recover->add_option("--max-condition", max_condition, "reject collocation matrices above this condition number");
  recover->add_option("--equal-tol", equal_tol, "largest discrepancy still reported as equal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*verify) return cmd_verify(verify_flags, suites);
    if (*curv) return cmd_curvature_scan(scan_flags, scan);
    if (*recover) return cmd_recover(recover_flags, generator, compare, normalized, max_condition, equal_tol);
  } catch (const IllConditionedError& e) {
    nlohmann::ordered_json d;
    d["error"] = "ill-conditioned";
    d["message"] = e.what();
    d["condition"] = e.condition();
    std::cerr << d.dump() << '\n';
    return exit_domain;
  } catch (const ConfigError& e) {
    print_error("config", e.what());
    return exit_config;
  } catch (const ShapeError& e) {
    print_error("config", e.what());
    return exit_config;
  } catch (const DomainError& e) {
    print_error("domain", e.what());
    return exit_domain;
  }
  return exit_config;
}
