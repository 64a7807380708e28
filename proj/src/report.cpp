#include "fracdisp/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <thread>

#include "fracdisp/errors.hpp"
#include "fracdisp/estimates.hpp"
#include "fracdisp/hn_geometry.hpp"
#include "fracdisp/hn_kernel.hpp"
#include "fracdisp/hn_phase.hpp"
#include "fracdisp/nls_tree.hpp"
#include "fracdisp/tree.hpp"

namespace fracdisp::report {

namespace {

// ---------------------------------------------------------------------------
// config schema
// ---------------------------------------------------------------------------

enum class FieldType { Number, Integer, String, Boolean, Object, Array };

struct Field {
  const char* name;
  FieldType type;
  bool required;
};

bool type_matches(const json& v, FieldType t) {
  switch (t) {
    case FieldType::Number: return v.is_number();
    case FieldType::Integer: return v.is_number_integer();
    case FieldType::String: return v.is_string();
    case FieldType::Boolean: return v.is_boolean();
    case FieldType::Object: return v.is_object();
    case FieldType::Array: return v.is_array();
  }
  return false;
}

void check_schema(const json& config, const std::vector<Field>& fields,
                  const std::string& where) {
  if (!config.is_object())
    throw ConfigError(where + ": config must be a JSON object");
  for (const auto& [key, value] : config.items()) {
    bool known = false;
    for (const auto& f : fields) {
      if (key == f.name) {
        if (!type_matches(value, f.type))
          throw ConfigError(where + ": key '" + key + "' has wrong type");
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
  for (const auto& f : fields)
    if (f.required && !config.contains(f.name))
      throw ConfigError(where + ": missing required key '" +
                        std::string(f.name) + "'");
}

struct GridSpec {
  double min, max;
  int count;
  bool log_spaced;
};

GridSpec parse_grid(const json& j, const std::string& where) {
  check_schema(j, {{"min", FieldType::Number, true},
                   {"max", FieldType::Number, true},
                   {"count", FieldType::Integer, true},
                   {"log", FieldType::Boolean, false}},
               where);
  GridSpec g{j["min"].get<double>(), j["max"].get<double>(),
             j["count"].get<int>(), j.value("log", false)};
  if (g.count <= 0) throw ConfigError(where + ": grid count must be >= 1");
  if (g.log_spaced && !(g.min > 0.0))
    throw ConfigError(where + ": log grid requires min > 0");
  if (g.max < g.min) throw ConfigError(where + ": grid max < min");
  return g;
}

std::vector<double> materialize(const GridSpec& g) {
  std::vector<double> out;
  out.reserve(g.count);
  for (int i = 0; i < g.count; ++i) {
    double u = g.count == 1 ? 0.0 : double(i) / double(g.count - 1);
    out.push_back(g.log_spaced ? g.min * std::pow(g.max / g.min, u)
                               : g.min + (g.max - g.min) * u);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV assembly
// ---------------------------------------------------------------------------

class Csv {
public:
  explicit Csv(std::string header) { line(std::move(header)); }
  void line(std::string s) {
    body_ += s;
    body_ += "\r\n";  // RFC 4180
  }
  template <class... Args>
  void row(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    line(buf);
  }
  const std::string& str() const { return body_; }

private:
  std::string body_;
};

struct PayloadSet {
  std::vector<std::pair<std::string, std::string>> files;  // name -> bytes
  void add(std::string name, const Csv& csv) {
    files.emplace_back(std::move(name), csv.str());
  }
};

void finalize(Manifest& m, const PayloadSet& payloads,
              const RunOptions& opts,
              std::chrono::steady_clock::time_point t0) {
  std::string all_bytes;
  std::filesystem::create_directories(opts.out_dir);
  for (const auto& [name, bytes] : payloads.files) {
    write_file_atomic(opts.out_dir / name, bytes);
    m.payload_paths.push_back(name);
    all_bytes += bytes;
  }
  m.determinism_hash = fnv1a_hex(all_bytes);
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_file_atomic(opts.out_dir / "manifest.json", m.to_json().dump(2) + "\n");
}

int resolve_threads(const RunOptions& opts) {
  if (opts.threads > 0) return opts.threads;
  if (const char* env = std::getenv("FRACDISP_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// index-parallel map with deterministic placement
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  int nw = std::min(threads, n);
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

const char* status(bool pass) { return pass ? "PASS" : "FAIL"; }

}  // namespace

bool Manifest::all_pass() const {
  for (const auto& [name, st] : checks)
    if (st == "FAIL") return false;
  return true;
}

json Manifest::to_json() const {
  json j;
  j["command"] = command;
  j["version"] = version;
  j["config"] = config_echo;
  json ch = json::object();
  for (const auto& [name, st] : checks) ch[name] = st;
  j["checks"] = ch;
  j["payloads"] = payload_paths;
  j["wall_seconds"] = wall_seconds;
  j["determinism_hash"] = determinism_hash;
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path.string());
}

// ---------------------------------------------------------------------------
// phase-report
// ---------------------------------------------------------------------------

Manifest cmd_phase_report(const json& config, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  check_schema(config, {{"mode", FieldType::String, true},
                        {"alphas", FieldType::Array, true},
                        {"rho", FieldType::Number, false},
                        {"Q", FieldType::Integer, false},
                        {"R_grid", FieldType::Object, false},
                        {"t", FieldType::Number, false},
                        {"r_max", FieldType::Integer, false},
                        {"seed", FieldType::Integer, false},
                        {"jitter", FieldType::Number, false}},
               "phase-report");
  Manifest m;
  m.command = "phase-report";
  m.version = kVersion;
  m.config_echo = config;
  PayloadSet payloads;
  const double tol = opts.tol > 0.0 ? opts.tol : 1e-10;
  std::string mode = config["mode"].get<std::string>();
  std::vector<double> alphas;
  for (const auto& a : config["alphas"]) alphas.push_back(a.get<double>());

  std::mt19937_64 rng(config.value("seed", 0));
  double jitter = config.value("jitter", 0.0);
  auto jittered = [&](double x) {
    if (jitter == 0.0) return x;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return x * (1.0 + jitter * u(rng));
  };

  if (mode == "hn") {
    double rho = config.value("rho", 1.0);
    GridSpec rg = config.contains("R_grid")
                      ? parse_grid(config["R_grid"], "phase-report.R_grid")
                      : GridSpec{0.0, 10.0, 21, false};
    Csv csv("alpha,rho,R,regime,lambda0,lambda1,lambda2,theta0,max_residual");
    bool pass = true;
    for (double alpha : alphas) {
      for (double R0 : materialize(rg)) {
        double R = std::max(0.0, jittered(R0));
        auto rep = hn_phase::stationary_points(
            hn_phase::PhaseParams::make(alpha, rho, R));
        double resid = 0.0;
        for (double x : rep.residuals) resid = std::max(resid, x);
        if (resid > tol) pass = false;
        const char* regime = "";
        switch (rep.regime) {
          case hn_phase::PhaseRegime::SingleRootAlphaLarge: regime = "single_root"; break;
          case hn_phase::PhaseRegime::NoRoot: regime = "no_root"; break;
          case hn_phase::PhaseRegime::DegenerateRoot: regime = "degenerate"; break;
          case hn_phase::PhaseRegime::TwoRoots: regime = "two_roots"; break;
          case hn_phase::PhaseRegime::OriginOnly: regime = "origin_only"; break;
        }
        csv.row("%.12g,%.12g,%.12g,%s,%.12g,%.12g,%.12g,%.12g,%.3g", alpha,
                rho, R, regime, rep.lambda0.value_or(std::nan("")),
                rep.lambda1.value_or(std::nan("")),
                rep.lambda2.value_or(std::nan("")),
                rep.theta0.value_or(std::nan("")), resid);
      }
    }
    payloads.add("phase_hn.csv", csv);
    m.checks.emplace_back("root_residuals", status(pass));
  } else if (mode == "tree") {
    int Q = config.value("Q", 2);
    double tv = config.value("t", 10.0);
    int r_max = config.value("r_max", 16);
    auto tr = tree::Tree::make(Q);
    Csv csv("Q,alpha,t,r,M,lambda0,case,lambda1,lambda2");
    bool pass = true;
    for (double alpha : alphas) {
      for (int r = 0; r <= r_max; ++r) {
        auto rep = tree::tree_phase_report(tr, alpha, tv, r);
        const char* cs = rep.stationary == tree::TreeStationaryCase::NoStationary
                             ? "none"
                             : rep.stationary == tree::TreeStationaryCase::OneStationary
                                   ? "one"
                                   : "two";
        if (rep.stationary == tree::TreeStationaryCase::TwoStationary) {
          auto dpsi = [&](double l) {
            return 0.5 * alpha * tr.gamma0 *
                   std::pow(1.0 - tr.gamma0 * std::cos(l), 0.5 * alpha - 1.0) *
                   std::sin(l);
          };
          double mu = r / tv;
          if (std::fabs(dpsi(*rep.lambda1) - mu) > tol ||
              std::fabs(dpsi(*rep.lambda2) - mu) > tol)
            pass = false;
        }
        csv.row("%d,%.12g,%.12g,%d,%.12g,%.12g,%s,%.12g,%.12g", Q, alpha, tv,
                r, rep.M, rep.lambda0, cs,
                rep.lambda1.value_or(std::nan("")),
                rep.lambda2.value_or(std::nan("")));
      }
    }
    payloads.add("phase_tree.csv", csv);
    m.checks.emplace_back("root_residuals", status(pass));
  } else {
    throw ConfigError("phase-report: mode must be 'hn' or 'tree'");
  }
  finalize(m, payloads, opts, t0);
  return m;
}

// ---------------------------------------------------------------------------
// hn-kernel
// ---------------------------------------------------------------------------

Manifest cmd_hn_kernel(const json& config, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  check_schema(config, {{"n", FieldType::Integer, true},
                        {"alpha", FieldType::Number, true},
                        {"sigma", FieldType::Number, true},
                        {"t_grid", FieldType::Object, true},
                        {"r_grid", FieldType::Object, true},
                        {"tol", FieldType::Number, false}},
               "hn-kernel");
  Manifest m;
  m.command = "hn-kernel";
  m.version = kVersion;
  m.config_echo = config;

  auto space = hn::HyperbolicSpace::make(config["n"].get<int>());
  double alpha = config["alpha"].get<double>();
  double sigma = config["sigma"].get<double>();
  double tol = opts.tol > 0.0 ? opts.tol
                              : config.value("tol", 1e-6);
  auto ts = materialize(parse_grid(config["t_grid"], "hn-kernel.t_grid"));
  auto rs = materialize(parse_grid(config["r_grid"], "hn-kernel.r_grid"));
  hn_kernel::calibrate_constant(space);  // warm the cache before threading

  struct Row {
    double t, r;
    hn_kernel::KernelSample ks;
  };
  std::vector<Row> rows(ts.size() * rs.size());
  parallel_for(int(rows.size()), resolve_threads(opts), [&](int idx) {
    double t = ts[idx / rs.size()];
    double r = rs[idx % rs.size()];
    auto q = hn_kernel::KernelQuery::make(space, alpha, sigma, t, r);
    rows[idx] = {t, r, hn_kernel::kernel_sigma(q, tol)};
  });

  Csv csv("t,r,re,im,abs,regime,bound,ratio,err");
  bool all_conv = true;
  for (const auto& row : rows) {
    all_conv = all_conv && row.ks.converged;
    csv.row("%.12g,%.12g,%.12g,%.12g,%.12g,%s,%.12g,%.12g,%.3g", row.t, row.r,
            row.ks.value.real(), row.ks.value.imag(), std::abs(row.ks.value),
            row.ks.in_theorem_range ? hn_kernel::regime_name(row.ks.regime).c_str()
                                    : "n/a",
            row.ks.bound, row.ks.ratio, row.ks.err_estimate);
  }
  PayloadSet payloads;
  payloads.add("kernel.csv", csv);
  m.checks.emplace_back("quadrature_converged", status(all_conv));
  finalize(m, payloads, opts, t0);
  return m;
}

// ---------------------------------------------------------------------------
// hn-verify
// ---------------------------------------------------------------------------

Manifest cmd_hn_verify(const json& config, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  check_schema(config, {{"n", FieldType::Integer, true},
                        {"alpha", FieldType::Number, true},
                        {"sigma", FieldType::Number, true},
                        {"t_grid", FieldType::Object, true},
                        {"r_grid", FieldType::Object, true},
                        {"tol", FieldType::Number, false},
                        {"slope_r", FieldType::Number, false},
                        {"slope_window", FieldType::Array, false},
                        {"slope_points", FieldType::Integer, false},
                        {"slope_cap", FieldType::Number, false},
                        {"ks_q", FieldType::Number, false},
                        {"ks_r_max", FieldType::Number, false}},
               "hn-verify");
  Manifest m;
  m.command = "hn-verify";
  m.version = kVersion;
  m.config_echo = config;
  PayloadSet payloads;

  auto space = hn::HyperbolicSpace::make(config["n"].get<int>());
  double alpha = config["alpha"].get<double>();
  double sigma = config["sigma"].get<double>();
  double tol = opts.tol > 0.0 ? opts.tol : config.value("tol", 1e-6);
  double slope_cap = config.value("slope_cap", -1.35);

  auto tg = parse_grid(config["t_grid"], "hn-verify.t_grid");
  auto rg = parse_grid(config["r_grid"], "hn-verify.r_grid");
  hn_kernel::KernelGrid grid{tg.min, tg.max, tg.count, rg.min, rg.max,
                             rg.count};
  auto rep = hn_kernel::verify_kernel_estimate(space, alpha, sigma, grid, tol);

  Csv regimes("regime,max_ratio,refined_max_ratio,growth,count,refined_count");
  for (const auto& [tag, st] : rep.regimes)
    regimes.row("%s,%.12g,%.12g,%.12g,%d,%d",
                hn_kernel::regime_name(tag).c_str(), st.max_ratio,
                st.refined_max_ratio, st.growth, st.count, st.refined_count);
  payloads.add("regimes.csv", regimes);
  m.checks.emplace_back("regime_ratios", status(rep.pass));
  if (!rep.stability_checked)
    m.checks.emplace_back("grid_stability", "FLAGGED");

  // fixed-r decay slope
  double slope_r = config.value("slope_r", 2.0);
  double w_lo = 5.0, w_hi = 100.0;
  if (config.contains("slope_window")) {
    auto w = config["slope_window"];
    if (w.size() != 2) throw ConfigError("hn-verify: slope_window = [lo, hi]");
    w_lo = w[0].get<double>();
    w_hi = w[1].get<double>();
  }
  int npts = config.value("slope_points", 10);
  std::vector<std::pair<double, double>> samples(npts);
  parallel_for(npts, resolve_threads(opts), [&](int i) {
    double t = w_lo * std::pow(w_hi / w_lo, npts == 1 ? 0.0 : double(i) / (npts - 1));
    auto q = hn_kernel::KernelQuery::make(space, alpha, sigma, t, slope_r);
    samples[i] = {t, std::abs(hn_kernel::kernel_sigma(q, tol).value)};
  });
  Csv slope_csv("t,abs_kernel,r");
  for (auto& [t, v] : samples) slope_csv.row("%.12g,%.12g,%.12g", t, v, slope_r);
  payloads.add("slope.csv", slope_csv);
  auto fit = estimates::fit_decay(samples, {w_lo, w_hi});
  m.checks.emplace_back("decay_slope",
                        status(fit.slope <= slope_cap));

  // Kunze-Stein norm decay
  double q_ks = config.value("ks_q", 6.0);
  double ks_rmax = config.value("ks_r_max", 26.0);
  std::vector<std::pair<double, double>> ks(npts);
  parallel_for(npts, resolve_threads(opts), [&](int i) {
    double t = w_lo * std::pow(w_hi / w_lo, npts == 1 ? 0.0 : double(i) / (npts - 1));
    auto kf = [&](double r) {
      auto q = hn_kernel::KernelQuery::make(space, alpha, sigma, t, r);
      return hn_kernel::kernel_sigma(q, tol).value;
    };
    ks[i] = {t, hn_kernel::kunze_stein_norm(space, kf, q_ks, ks_rmax, 1e-5)};
  });
  Csv ks_csv("t,norm_q,q");
  for (auto& [t, v] : ks) ks_csv.row("%.12g,%.12g,%.12g", t, v, q_ks);
  payloads.add("kunze_stein.csv", ks_csv);
  auto ks_fit = estimates::fit_decay(ks, {w_lo, w_hi});
  m.checks.emplace_back("kunze_stein_slope",
                        status(ks_fit.slope <= slope_cap));

  finalize(m, payloads, opts, t0);
  return m;
}

// ---------------------------------------------------------------------------
// tree-verify
// ---------------------------------------------------------------------------

Manifest cmd_tree_verify(const json& config, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  check_schema(config, {{"Q", FieldType::Integer, true},
                        {"alpha", FieldType::Number, true},
                        {"t_grid", FieldType::Object, true},
                        {"tol", FieldType::Number, false},
                        {"slope_cap", FieldType::Number, false}},
               "tree-verify");
  Manifest m;
  m.command = "tree-verify";
  m.version = kVersion;
  m.config_echo = config;
  PayloadSet payloads;

  auto tr = tree::Tree::make(config["Q"].get<int>());
  double alpha = config["alpha"].get<double>();
  double tol = opts.tol > 0.0 ? opts.tol : config.value("tol", 1e-9);
  double cap = config.value("slope_cap", -1.35);
  auto grid = materialize(parse_grid(config["t_grid"], "tree-verify.t_grid"));

  // identity and unitarity first
  bool identity_ok = true;
  for (int r = 0; r <= 10; ++r) {
    auto s = tree::tree_kernel(tr, alpha, 0.0, r, 1e-13);
    double expect = r == 0 ? 1.0 : 0.0;
    if (std::abs(s.value - tree::Complex(expect, 0.0)) > 1e-12)
      identity_ok = false;
  }
  m.checks.emplace_back("identity_at_t0", status(identity_ok));

  bool unitary_ok = true;
  for (double tv : {1.0, 5.0, 20.0}) {
    int rmax = int(tr.gamma0 * tv) + 60;
    double mass = 0.0;
    for (int r = 0; r <= rmax; ++r)
      mass += tree::sphere_size_d(tr, r) *
              std::norm(tree::tree_kernel(tr, alpha, tv, r, 1e-12).value);
    if (std::fabs(mass - 1.0) > 1e-8) unitary_ok = false;
  }
  m.checks.emplace_back("l2_unitarity", status(unitary_ok));

  auto rep = tree::verify_tree_estimates(tr, alpha, grid, tol, cap);
  Csv fits("check,slope,r2,cap");
  fits.row("wavefront_sup,%.12g,%.12g,%.12g", rep.wavefront_fit.slope,
           rep.wavefront_fit.r2, cap);
  for (const auto& [q, f] : rep.lq_fits)
    fits.row("lq_norm_q%d,%.12g,%.12g,%.12g", q, f.slope, f.r2, cap);
  payloads.add("tree_fits.csv", fits);
  m.checks.emplace_back("wavefront_slope",
                        status(rep.wavefront_fit.slope <= cap));
  for (const auto& [q, f] : rep.lq_fits)
    m.checks.emplace_back("lq_slope_q" + std::to_string(q),
                          status(f.slope <= cap));
  m.checks.emplace_back("uniform_ratio_finite",
                        status(std::isfinite(rep.uniform_ratio)));
  finalize(m, payloads, opts, t0);
  return m;
}

// ---------------------------------------------------------------------------
// nls-run
// ---------------------------------------------------------------------------

Manifest cmd_nls_run(const json& config, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  check_schema(config, {{"Q", FieldType::Integer, true},
                        {"alpha", FieldType::Number, true},
                        {"eta", FieldType::Number, true},
                        {"coupling", FieldType::Number, true},
                        {"gauge_invariant", FieldType::Boolean, false},
                        {"dt", FieldType::Number, true},
                        {"T", FieldType::Number, true},
                        {"r_max", FieldType::Integer, true},
                        {"u0", FieldType::Object, true},
                        {"qs", FieldType::Array, false}},
               "nls-run");
  Manifest m;
  m.command = "nls-run";
  m.version = kVersion;
  m.config_echo = config;
  PayloadSet payloads;

  auto tr = tree::Tree::make(config["Q"].get<int>());
  auto grid = nls::RadialGrid::make(tr, config["r_max"].get<int>());
  nls::NlsConfig cfg;
  cfg.alpha = config["alpha"].get<double>();
  cfg.eta = config["eta"].get<double>();
  cfg.coupling = config["coupling"].get<double>();
  cfg.gauge_invariant = config.value("gauge_invariant", true);
  cfg.dt = config["dt"].get<double>();
  cfg.T = config["T"].get<double>();
  cfg.validate();

  const json& u0j = config["u0"];
  check_schema(u0j, {{"type", FieldType::String, true},
                     {"amplitude", FieldType::Number, false},
                     {"width", FieldType::Number, false}},
               "nls-run.u0");
  nls::RadialState u0;
  u0.values = nls::CVector::Zero(grid.r_max + 1);
  std::string type = u0j["type"].get<std::string>();
  double amp = u0j.value("amplitude", 1.0);
  if (type == "delta") {
    u0.values(0) = amp;
  } else if (type == "gaussian") {
    double width = u0j.value("width", 3.0);
    double mass = 0.0;
    for (int r = 0; r <= grid.r_max; ++r) {
      double v = std::exp(-0.5 * double(r) * double(r) / (width * width));
      u0.values(r) = v;
      mass += grid.weights[r] * v * v;
    }
    u0.values *= amp / std::sqrt(mass);
  } else {
    throw ConfigError("nls-run: u0.type must be 'delta' or 'gaussian'");
  }

  std::vector<double> qs{2.0, 4.0};
  if (config.contains("qs")) {
    qs.clear();
    for (const auto& q : config["qs"]) qs.push_back(q.get<double>());
  }
  auto traj = nls::nls_solve(grid, u0, cfg, qs);

  Csv series("t,mass");
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    series.row("%.12g,%.15g", traj.times[i], traj.mass_series[i]);
  payloads.add("mass.csv", series);
  Csv norms("t,norm_q,q");
  for (std::size_t iq = 0; iq < qs.size(); ++iq)
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      norms.row("%.12g,%.12g,%.12g", traj.times[i], traj.lq_series[iq][i],
                qs[iq]);
  payloads.add("norms.csv", norms);

  double m0 = traj.mass_series.front();
  double drift = 0.0;
  for (double v : traj.mass_series)
    drift = std::max(drift, std::fabs(v - m0) / m0);
  if (cfg.gauge_invariant)
    m.checks.emplace_back("mass_conservation", status(drift <= 1e-9));
  else
    m.checks.emplace_back("mass_conservation", "FLAGGED");
  finalize(m, payloads, opts, t0);
  return m;
}

// ---------------------------------------------------------------------------
// regions
// ---------------------------------------------------------------------------

Manifest cmd_regions(const json& config, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  check_schema(config, {{"region", FieldType::String, true},
                        {"n", FieldType::Integer, false},
                        {"alpha", FieldType::Number, false},
                        {"sigma", FieldType::Number, false},
                        {"beta", FieldType::Number, false},
                        {"count", FieldType::Integer, true}},
               "regions");
  Manifest m;
  m.command = "regions";
  m.version = kVersion;
  m.config_echo = config;
  PayloadSet payloads;

  int count = config["count"].get<int>();
  if (count <= 0) throw ConfigError("regions: count must be >= 1");
  std::string region = config["region"].get<std::string>();

  Csv csv("inv_p,inv_q,aux,member");
  long long members = 0;
  for (int i = 0; i < count; ++i) {
    double ip = count == 1 ? 0.0 : 0.5 * double(i) / double(count - 1);
    for (int j = 0; j < count; ++j) {
      double iq = count == 1 ? 0.0 : 0.5 * double(j) / double(count - 1);
      bool member = false;
      double aux = 0.0;
      if (region == "tree") {
        member = estimates::admissible_tree({ip, iq, 0.0});
      } else if (region == "hn_large") {
        aux = config.value("sigma", 0.0);
        member = estimates::admissible_alpha_large(
            config.value("n", 3), config.value("alpha", 1.5), {ip, iq, aux});
      } else if (region == "hn_small") {
        aux = config.value("beta", 0.0);
        member = estimates::admissible_alpha_small(
            config.value("n", 3), config.value("alpha", 0.5), {ip, iq, aux});
      } else {
        throw ConfigError("regions: region must be tree, hn_large or hn_small");
      }
      if (member) ++members;
      csv.row("%.12g,%.12g,%.12g,%d", ip, iq, aux, member ? 1 : 0);
    }
  }
  payloads.add("region.csv", csv);
  m.checks.emplace_back("nonempty_region", status(members > 0));
  finalize(m, payloads, opts, t0);
  return m;
}

int run_command(const std::string& command, const json& config,
                const RunOptions& opts) {
  Manifest m;
  try {
    if (command == "phase-report")
      m = cmd_phase_report(config, opts);
    else if (command == "hn-kernel")
      m = cmd_hn_kernel(config, opts);
    else if (command == "hn-verify")
      m = cmd_hn_verify(config, opts);
    else if (command == "tree-verify")
      m = cmd_tree_verify(config, opts);
    else if (command == "nls-run")
      m = cmd_nls_run(config, opts);
    else if (command == "regions")
      m = cmd_regions(config, opts);
    else
      throw ConfigError("unknown command: " + command);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  }
  for (const auto& [name, st] : m.checks)
    std::printf("%-28s %s\n", name.c_str(), st.c_str());
  return m.all_pass() ? 0 : 2;
}

}  // namespace fracdisp::report
