#include "sasakigeo/runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "sasakigeo/conformal.hpp"
#include "sasakigeo/oracle.hpp"
#include "sasakigeo/sphere.hpp"
#include "sasakigeo/util.hpp"

namespace sasakigeo {

namespace {

using json = nlohmann::ordered_json;

// Unknown keys are rejected so misspelled tolerances cannot silently pass.
void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double require_number(const json& obj, const std::string& key,
                      const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ConfigError(where + " needs numeric \"" + key + "\"");
  return obj[key].get<double>();
}

VectorXd parse_vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty())
    throw ConfigError(where + " must be a non-empty array of numbers");
  VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where + " must hold numbers");
    out(static_cast<int>(i)) = v[i].get<double>();
  }
  return out;
}

ZooSpec parse_manifold(const json& j, const std::string& where) {
  expect_keys(j, {"kind", "dim", "c", "factors", "bump"}, where);
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigError(where + " needs a \"kind\" string");
  std::string kind = j["kind"].get<std::string>();

  if (kind == "euclidean") {
    ZooSpec s = ZooSpec::euclidean(static_cast<int>(require_number(j, "dim", where)));
    return s;
  }
  if (kind == "constant_curvature") {
    int dim = static_cast<int>(require_number(j, "dim", where));
    double c = require_number(j, "c", where);
    return ZooSpec::constant_curvature(dim, c);
  }
  if (kind == "product") {
    if (!j.contains("factors") || !j["factors"].is_array() ||
        j["factors"].size() != 2)
      throw ConfigError(where + " product needs exactly two factors");
    return ZooSpec::product(parse_manifold(j["factors"][0], where + ".factors[0]"),
                            parse_manifold(j["factors"][1], where + ".factors[1]"));
  }
  if (kind == "perturbed") {
    int dim = static_cast<int>(require_number(j, "dim", where));
    BumpSpec b;
    if (j.contains("bump")) {
      expect_keys(j["bump"], {"amplitude", "center", "width"}, where + ".bump");
      if (j["bump"].contains("amplitude"))
        b.amplitude = j["bump"]["amplitude"].get<double>();
      if (j["bump"].contains("width")) b.width = j["bump"]["width"].get<double>();
      if (j["bump"].contains("center")) {
        VectorXd c = parse_vector(j["bump"]["center"], where + ".bump.center");
        b.center.assign(c.data(), c.data() + c.size());
      }
    }
    return ZooSpec::perturbed(dim, b);
  }
  throw ConfigError(where + ": unknown manifold kind \"" + kind + "\"");
}

Phi2Field parse_phi2(const json& j, int dim, const std::string& where) {
  expect_keys(j, {"kind", "value", "coeffs", "amplitude", "wavevector"}, where);
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigError(where + " needs a \"kind\" string");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "constant")
    return Phi2Field::constant(dim, require_number(j, "value", where));
  if (kind == "linear") {
    VectorXd c = parse_vector(j["coeffs"], where + ".coeffs");
    if (c.size() != dim) throw ConfigError(where + ".coeffs dimension mismatch");
    return Phi2Field::linear(c);
  }
  if (kind == "sine") {
    VectorXd k = parse_vector(j["wavevector"], where + ".wavevector");
    if (k.size() != dim)
      throw ConfigError(where + ".wavevector dimension mismatch");
    return Phi2Field::sine(require_number(j, "amplitude", where), k);
  }
  throw ConfigError(where + ": unknown phi2 kind \"" + kind + "\"");
}

std::vector<double> parse_grid(const json& j, const std::string& where) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(where + " must hold numbers");
      out.push_back(v.get<double>());
    }
    if (out.empty()) throw ConfigError(where + " must be non-empty");
    return out;
  }
  expect_keys(j, {"min", "max", "count"}, where);
  double lo = require_number(j, "min", where);
  double hi = require_number(j, "max", where);
  int count = static_cast<int>(require_number(j, "count", where));
  if (count < 1 || hi < lo) throw ConfigError(where + " grid range invalid");
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

struct ParsedConfig {
  ZooSpec manifold;
  double f1 = 1.0;
  double f2 = 1.0;
  bool conformal = false;
  json phi2_json;
  std::optional<double> radius;
  std::uint64_t seed = 42;
  std::string out_path, summary_path, study_path;
  std::string command;
  json command_block;
};

ParsedConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  expect_keys(j, {"manifold", "weights", "radius", "seed", "output", "verify",
                  "scan", "geodesic"},
              "config");

  ParsedConfig cfg;
  if (!j.contains("manifold"))
    throw ConfigError("config needs a \"manifold\" block");
  cfg.manifold = parse_manifold(j["manifold"], "manifold");

  if (!j.contains("weights")) throw ConfigError("config needs \"weights\"");
  expect_keys(j["weights"], {"f1", "f2", "phi2"}, "weights");
  cfg.f1 = require_number(j["weights"], "f1", "weights");
  if (j["weights"].contains("phi2")) {
    if (j["weights"].contains("f2"))
      throw ConfigError("weights: give either f2 or phi2, not both");
    cfg.conformal = true;
    cfg.phi2_json = j["weights"]["phi2"];
  } else {
    cfg.f2 = require_number(j["weights"], "f2", "weights");
  }

  if (j.contains("radius")) {
    if (!j["radius"].is_number() || j["radius"].get<double>() <= 0.0)
      throw ConfigError("radius must be a positive number");
    cfg.radius = j["radius"].get<double>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0)
      throw ConfigError("seed must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output")) {
    expect_keys(j["output"], {"path", "summary_path", "study_path"}, "output");
    if (j["output"].contains("path"))
      cfg.out_path = j["output"]["path"].get<std::string>();
    if (j["output"].contains("summary_path"))
      cfg.summary_path = j["output"]["summary_path"].get<std::string>();
    if (j["output"].contains("study_path"))
      cfg.study_path = j["output"]["study_path"].get<std::string>();
  }

  int commands = 0;
  for (const char* c : {"verify", "scan", "geodesic"})
    if (j.contains(c)) {
      ++commands;
      cfg.command = c;
      cfg.command_block = j[c];
    }
  if (commands != 1)
    throw ConfigError("config must contain exactly one command block "
                      "(verify, scan or geodesic)");
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + path);
  f << content;
}

// --------------------------------------------------------------------------
// verify
// --------------------------------------------------------------------------

struct Record {
  VectorXd x, u;
  std::string quantity;
  double formula = 0.0;
  double oracle = 0.0;
};

double rel_residual(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

SplitTangentVector random_split(Rng& rng, int m) {
  return {rng.uniform_vector(m, -1.0, 1.0), rng.uniform_vector(m, -1.0, 1.0)};
}

RunOutcome run_verify(const ParsedConfig& cfg) {
  expect_keys(cfg.command_block,
              {"samples", "tuples_per_point", "tolerance", "fiber_scale"},
              "verify");
  int samples = 20;
  int tuples = 3;
  double fiber_scale = 1.0;
  if (cfg.command_block.contains("samples"))
    samples = cfg.command_block["samples"].get<int>();
  if (cfg.command_block.contains("tuples_per_point"))
    tuples = cfg.command_block["tuples_per_point"].get<int>();
  if (cfg.command_block.contains("fiber_scale"))
    fiber_scale = cfg.command_block["fiber_scale"].get<double>();
  if (samples < 1 || tuples < 1)
    throw ConfigError("verify needs samples >= 1 and tuples_per_point >= 1");

  auto M = construct_zoo(cfg.manifold);
  const int m = M->dim();

  double tolerance = M->has_analytic_christoffel() ? 1e-5 : 5e-3;
  if (cfg.command_block.contains("tolerance"))
    tolerance = cfg.command_block["tolerance"].get<double>();

  // Deterministic sample preparation, parallel evaluation into fixed slots.
  struct Job {
    TangentBundlePoint P;
    std::vector<std::array<SplitTangentVector, 4>> tuples;
  };
  Rng rng(cfg.seed);
  std::vector<Job> jobs(static_cast<std::size_t>(samples));
  for (auto& job : jobs) {
    VectorXd x(m);
    for (int i = 0; i < m; ++i) {
      double lo = M->domain().lo[i], hi = M->domain().hi[i];
      double pad = 0.05 * (hi - lo);
      x(i) = rng.uniform(lo + pad, hi - pad);
    }
    job.P = {x, fiber_scale * rng.normal_vector(m)};
    for (int t = 0; t < tuples; ++t)
      job.tuples.push_back({random_split(rng, m), random_split(rng, m),
                            random_split(rng, m), random_split(rng, m)});
  }

  std::vector<std::vector<Record>> results(jobs.size());
  bool numeric_failure = false;
  std::string numeric_message;

  if (!cfg.conformal) {
    WeightedSasakiMetric G(M, cfg.f1, cfg.f2);
    InducedChart chart(G);
    std::optional<SphereBundleConfig> sphere;
    if (cfg.radius) sphere.emplace(G, *cfg.radius);

    try {
      parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& job = jobs[i];
        std::vector<Record>& out = results[i];
        SasakiPointData d(G, job.P);
        InducedChart::PointValues pv = chart.evaluate(job.P);
        for (const auto& tup : job.tuples) {
          out.push_back({job.P.x, job.P.u, "curvature4",
                         curvature_RG4(d, tup[0], tup[1], tup[2], tup[3]),
                         InducedChart::curvature4_from(pv, tup[0], tup[1], tup[2],
                                                       tup[3])});
          out.push_back({job.P.x, job.P.u, "ricci", ricci_G(d, tup[0], tup[1]),
                         InducedChart::ricci_from(pv, tup[0], tup[1])});
        }
        out.push_back({job.P.x, job.P.u, "scalar", scalar_G(d), pv.S});
        if (sphere) {
          double r = *cfg.radius;
          VectorXd u_dir = job.P.u;
          double nu = std::sqrt(u_dir.dot(d.g() * u_dir));
          if (nu < 1e-12) {
            u_dir = VectorXd::Unit(m, 0);
            nu = std::sqrt(u_dir.dot(d.g() * u_dir));
          }
          TangentBundlePoint Q{job.P.x, (r / nu) * u_dir};
          SasakiPointData ds(G, Q);
          out.push_back({Q.x, Q.u, "sphere_scalar", scalar_SrM(*sphere, ds),
                         scalar_SrM_trace(*sphere, ds)});
        }
      });
    } catch (const NumericError& e) {
      numeric_failure = true;
      numeric_message = e.what();
    }
  } else {
    if (cfg.manifold.kind != ZooSpec::Kind::Euclidean)
      throw ConfigError("conformal weights require a flat (euclidean) base");
    Phi2Field phi2 = parse_phi2(cfg.phi2_json, m, "weights.phi2");
    ConformalFiberMetric Gc(m, cfg.f1, phi2);
    InducedChart chart(M, cfg.f1,
                       [phi2](const VectorXd& x) {
                         return std::exp(2.0 * phi2.value(x));
                       });
    try {
      parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& job = jobs[i];
        std::vector<Record>& out = results[i];
        InducedChart::PointValues pv = chart.evaluate(job.P);
        for (const auto& tup : job.tuples) {
          SplitTangentVector rg =
              curvature_conformal(Gc, job.P, tup[0], tup[1], tup[2]);
          out.push_back({job.P.x, job.P.u, "curvature4",
                         Gc.pair(job.P.x, rg, tup[3]),
                         InducedChart::curvature4_from(pv, tup[0], tup[1], tup[2],
                                                       tup[3])});
        }
      });
    } catch (const NumericError& e) {
      numeric_failure = true;
      numeric_message = e.what();
    }
  }

  // Ordered assembly.
  json report;
  report["command"] = "verify";
  report["manifold"] = M->label();
  report["seed"] = cfg.seed;
  report["tolerance"] = tolerance;
  report["samples"] = samples;
  report["records"] = json::array();
  std::map<std::string, double> max_residual;
  for (const auto& batch : results)
    for (const Record& r : batch) {
      double rel = rel_residual(r.formula, r.oracle);
      auto [it, inserted] = max_residual.try_emplace(r.quantity, rel);
      if (!inserted) it->second = std::max(it->second, rel);
      json rec;
      rec["x"] = std::vector<double>(r.x.data(), r.x.data() + r.x.size());
      rec["u"] = std::vector<double>(r.u.data(), r.u.data() + r.u.size());
      rec["quantity"] = r.quantity;
      rec["formula"] = r.formula;
      rec["oracle"] = r.oracle;
      rec["abs_residual"] = std::abs(r.formula - r.oracle);
      rec["rel_residual"] = rel;
      report["records"].push_back(rec);
    }

  bool pass = !numeric_failure;
  json max_json;
  for (const auto& [q, v] : max_residual) {
    max_json[q] = v;
    if (v > tolerance) pass = false;
  }
  report["summary"] = {{"max_residual", max_json},
                       {"pass", pass},
                       {"numeric_failure", numeric_failure}};
  if (numeric_failure) report["summary"]["error"] = numeric_message;

  RunOutcome out;
  out.report_json = report.dump(2) + "\n";
  std::ostringstream line;
  line << "verify " << M->label() << " (f1=" << cfg.f1
       << (cfg.conformal ? ", conformal f2" : ", f2=" + format_double(cfg.f2))
       << "): ";
  for (const auto& [q, v] : max_residual)
    line << q << " max_rel=" << format_double(v) << "  ";
  line << "tol=" << format_double(tolerance) << "  "
       << (numeric_failure ? "NUMERIC-FAILURE" : (pass ? "PASS" : "FAIL"))
       << "\n";
  out.summary = line.str();
  out.exit_code = numeric_failure ? kExitNumericFailure
                                  : (pass ? kExitPass : kExitToleranceFailure);
  write_file(cfg.out_path, out.report_json);
  return out;
}

// --------------------------------------------------------------------------
// scan
// --------------------------------------------------------------------------

RunOutcome run_scan(const ParsedConfig& cfg) {
  expect_keys(cfg.command_block, {"f1_grid", "f2_grid", "r_grid", "samples"},
              "scan");
  if (cfg.conformal) throw ConfigError("scan requires constant weights");
  if (!cfg.command_block.contains("f1_grid") ||
      !cfg.command_block.contains("f2_grid") ||
      !cfg.command_block.contains("r_grid"))
    throw ConfigError("scan needs f1_grid, f2_grid and r_grid");
  std::vector<double> f1g = parse_grid(cfg.command_block["f1_grid"], "scan.f1_grid");
  std::vector<double> f2g = parse_grid(cfg.command_block["f2_grid"], "scan.f2_grid");
  std::vector<double> rg = parse_grid(cfg.command_block["r_grid"], "scan.r_grid");
  int samples = 30;
  if (cfg.command_block.contains("samples"))
    samples = cfg.command_block["samples"].get<int>();

  auto M = construct_zoo(cfg.manifold);
  ScanResult scan = scan_positive_scalar(M, f1g, f2g, rg, samples, cfg.seed);

  const int m = scan.dim;
  std::ostringstream csv;
  csv << "f1,f2,r,min_scalar";
  for (int i = 1; i <= m; ++i) csv << ",argmin_x" << i;
  for (int i = 1; i <= m; ++i) csv << ",argmin_u" << i;
  csv << ",positive\n";
  for (const ScanRow& row : scan.rows) {
    csv << format_double(row.f1) << ',' << format_double(row.f2) << ','
        << format_double(row.r) << ',' << format_double(row.min_scalar);
    for (int i = 0; i < m; ++i) csv << ',' << format_double(row.argmin_x(i));
    for (int i = 0; i < m; ++i) csv << ',' << format_double(row.argmin_u(i));
    csv << ',' << (row.positive ? 1 : 0) << '\n';
  }

  auto thresholds_json = [](const std::vector<ScanThreshold>& ths,
                            const char* k1, const char* k2) {
    json arr = json::array();
    for (const ScanThreshold& t : ths) {
      json e;
      e[k1] = t.fixed1;
      e[k2] = t.fixed2;
      e["kind"] = t.kind;
      if (t.kind == "bracket") {
        e["lo"] = t.lo;
        e["hi"] = t.hi;
      }
      arr.push_back(e);
    }
    return arr;
  };

  json summary;
  summary["command"] = "scan";
  summary["manifold"] = M->label();
  summary["dim"] = m;
  summary["seed"] = cfg.seed;
  summary["samples"] = samples;
  summary["r_thresholds"] = thresholds_json(scan.r_thresholds, "f1", "f2");
  summary["f1_thresholds"] = thresholds_json(scan.f1_thresholds, "f2", "r");
  summary["monotone_in_f1"] = scan.monotone_in_f1;
  summary["monotone_in_f2_decrease"] = scan.monotone_in_f2_decrease;
  if (scan.dim2_equal_scalars)
    summary["note"] =
        "dim 2 base: S_rM and TM have identical Ricci and scalar curvature "
        "(fiber correction (n-1)n/(f2 r^2) vanishes for n = 1)";

  RunOutcome out;
  out.csv = csv.str();
  out.summary_json = summary.dump(2) + "\n";
  std::ostringstream line;
  line << "scan " << M->label() << ": " << scan.rows.size() << " cells";
  if (scan.dim2_equal_scalars)
    line << "; dim-2 base, S_rM scalar equals TM scalar";
  for (const ScanThreshold& t : scan.r_thresholds)
    if (t.kind == "bracket")
      line << "; r* in [" << format_double(t.lo) << ", " << format_double(t.hi)
           << "] at f1=" << format_double(t.fixed1)
           << " f2=" << format_double(t.fixed2);
  line << "\n";
  out.summary = line.str();
  write_file(cfg.out_path, out.csv);
  std::string spath = cfg.summary_path.empty()
                          ? (cfg.out_path.empty() ? "" : cfg.out_path + ".summary.json")
                          : cfg.summary_path;
  write_file(spath, out.summary_json);
  return out;
}

// --------------------------------------------------------------------------
// geodesic
// --------------------------------------------------------------------------

std::string trajectory_csv(const ConformalFiberMetric& Gc,
                           const GeodesicTrajectory& traj) {
  const int m = Gc.dim;
  std::ostringstream csv;
  csv << "t";
  for (int i = 1; i <= m; ++i) csv << ",x" << i;
  for (int i = 1; i <= m; ++i) csv << ",u" << i;
  for (int i = 1; i <= m; ++i) csv << ",xdot" << i;
  for (int i = 1; i <= m; ++i) csv << ",udot" << i;
  csv << ",gspeed\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const BundleState& s = traj.states[k];
    csv << format_double(traj.t[k]);
    for (int i = 0; i < m; ++i) csv << ',' << format_double(s.x(i));
    for (int i = 0; i < m; ++i) csv << ',' << format_double(s.u(i));
    for (int i = 0; i < m; ++i) csv << ',' << format_double(s.x_dot(i));
    for (int i = 0; i < m; ++i) csv << ',' << format_double(s.u_dot(i));
    csv << ',' << format_double(g_speed(Gc, s)) << '\n';
  }
  return csv.str();
}

RunOutcome run_geodesic(const ParsedConfig& cfg) {
  expect_keys(cfg.command_block,
              {"x0", "u0", "xdot0", "udot0", "duration", "dt",
               "convergence_study"},
              "geodesic");
  if (cfg.manifold.kind != ZooSpec::Kind::Euclidean)
    throw ConfigError("geodesic integration requires a flat (euclidean) base");
  const int m = cfg.manifold.dim;

  Phi2Field phi2 = cfg.conformal
                       ? parse_phi2(cfg.phi2_json, m, "weights.phi2")
                       : Phi2Field::constant(m, 0.5 * std::log(cfg.f2));
  ConformalFiberMetric Gc(m, cfg.f1, phi2);

  BundleState s0;
  auto get_vec = [&](const char* key) {
    if (!cfg.command_block.contains(key))
      throw ConfigError(std::string("geodesic needs \"") + key + "\"");
    VectorXd v = parse_vector(cfg.command_block[key], std::string("geodesic.") + key);
    if (v.size() != m)
      throw ConfigError(std::string("geodesic.") + key + " dimension mismatch");
    return v;
  };
  s0.x = get_vec("x0");
  s0.u = get_vec("u0");
  s0.x_dot = get_vec("xdot0");
  s0.u_dot = get_vec("udot0");
  double duration = require_number(cfg.command_block, "duration", "geodesic");
  double dt = require_number(cfg.command_block, "dt", "geodesic");
  bool study = cfg.command_block.contains("convergence_study") &&
               cfg.command_block["convergence_study"].get<bool>();

  GeodesicTrajectory traj = integrate_geodesic(Gc, s0, duration, dt);

  RunOutcome out;
  out.csv = trajectory_csv(Gc, traj);
  double v0 = g_speed(Gc, traj.states.front());
  double drift = 0.0;
  for (const BundleState& s : traj.states)
    drift = std::max(drift, std::abs(g_speed(Gc, s) - v0));
  double rel_drift = v0 > 0.0 ? drift / v0 : drift;

  json summary;
  summary["command"] = "geodesic";
  summary["steps"] = traj.states.size() - 1;
  summary["gspeed_initial"] = v0;
  summary["gspeed_max_drift"] = drift;
  summary["gspeed_rel_drift"] = rel_drift;
  summary["diverged"] = traj.diverged;

  if (study && !traj.diverged) {
    // Run the halving study at coarse steps so the truncation error stays
    // above the rounding floor regardless of the production dt.
    double study_dt = std::max(dt, duration / 64.0);
    auto terminal = [&](double step) {
      GeodesicTrajectory t = integrate_geodesic(Gc, s0, duration, step);
      return t.states.back();
    };
    BundleState ref = terminal(study_dt / 16.0);
    auto err = [&](const BundleState& s) {
      double e = 0.0;
      e = std::max(e, (s.x - ref.x).cwiseAbs().maxCoeff());
      e = std::max(e, (s.u - ref.u).cwiseAbs().maxCoeff());
      e = std::max(e, (s.x_dot - ref.x_dot).cwiseAbs().maxCoeff());
      e = std::max(e, (s.u_dot - ref.u_dot).cwiseAbs().maxCoeff());
      return e;
    };
    double e1 = err(terminal(study_dt));
    double e2 = err(terminal(study_dt / 2.0));
    json st;
    st["study_dt"] = study_dt;
    st["error_dt"] = e1;
    st["error_half_dt"] = e2;
    if (e1 > 1e-14 && e2 > 1e-15)
      st["observed_order"] = std::log2(e1 / e2);
    else
      st["observed_order"] = nullptr;  // exact trajectory, order undefined
    summary["convergence_study"] = st;
    write_file(cfg.study_path, json(st).dump(2) + "\n");
  }

  out.summary_json = summary.dump(2) + "\n";
  std::ostringstream line;
  line << "geodesic: " << traj.states.size() - 1 << " steps, G-speed drift "
       << format_double(rel_drift) << (traj.diverged ? "  DIVERGED" : "") << "\n";
  out.summary = line.str();
  out.exit_code = traj.diverged ? kExitNumericFailure : kExitPass;
  write_file(cfg.out_path, out.csv);
  if (!cfg.summary_path.empty()) write_file(cfg.summary_path, out.summary_json);
  return out;
}

} // namespace

RunOutcome run_config(const std::string& config_json_text) {
  ParsedConfig cfg = parse_config(config_json_text);
  if (cfg.command == "verify") return run_verify(cfg);
  if (cfg.command == "scan") return run_scan(cfg);
  return run_geodesic(cfg);
}

// --------------------------------------------------------------------------
// report rendering
// --------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string render_verify_report(const nlohmann::ordered_json& j) {
  std::ostringstream out;
  out << "verify report: " << j.value("manifold", std::string("?")) << "\n";
  double tol = j.value("tolerance", 0.0);
  out << "tolerance " << format_double(tol) << ", samples "
      << j.value("samples", 0) << "\n\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-16s %-24s %-8s\n", "quantity",
                "max_rel_residual", "pass");
  out << buf;
  out << std::string(50, '-') << "\n";
  if (j.contains("summary") && j["summary"].contains("max_residual")) {
    for (auto it = j["summary"]["max_residual"].begin();
         it != j["summary"]["max_residual"].end(); ++it) {
      double v = it.value().get<double>();
      std::snprintf(buf, sizeof(buf), "%-16s %-24s %-8s\n", it.key().c_str(),
                    format_double(v).c_str(), v <= tol ? "yes" : "NO");
      out << buf;
    }
  }
  bool pass = j.contains("summary") && j["summary"].value("pass", false);
  out << "\noverall: " << (pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string render_scan_csv(const std::vector<std::string>& header,
                            std::vector<std::vector<std::string>> rows) {
  // Frontier table sorted by r.
  auto col = [&](const char* name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  int cr = col("r"), cf1 = col("f1"), cf2 = col("f2"), cm = col("min_scalar"),
      cp = col("positive");
  if (cr < 0 || cf1 < 0 || cf2 < 0 || cm < 0 || cp < 0)
    throw ConfigError("scan CSV misses required columns");
  std::sort(rows.begin(), rows.end(),
            [&](const auto& a, const auto& b) {
              double ra = std::stod(a[cr]), rb = std::stod(b[cr]);
              if (ra != rb) return ra < rb;
              if (a[cf1] != b[cf1])
                return std::stod(a[cf1]) < std::stod(b[cf1]);
              return std::stod(a[cf2]) < std::stod(b[cf2]);
            });
  std::ostringstream out;
  out << "scan frontier (sorted by r)\n\n";
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%-12s %-8s %-8s %-24s %-8s\n", "r", "f1",
                "f2", "min_scalar", "positive");
  out << buf;
  out << std::string(64, '-') << "\n";
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-12s %-8s %-8s %-24s %-8s\n",
                  row[cr].c_str(), row[cf1].c_str(), row[cf2].c_str(),
                  row[cm].c_str(), row[cp] == "1" ? "yes" : "no");
    out << buf;
  }
  return out.str();
}

std::string render_trajectory_csv(const std::vector<std::string>& header,
                                  const std::vector<std::vector<std::string>>& rows) {
  int cg = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == "gspeed") cg = static_cast<int>(i);
  std::ostringstream out;
  out << "trajectory: " << rows.size() << " states\n";
  if (cg >= 0 && !rows.empty()) {
    double v0 = std::stod(rows.front()[cg]);
    double drift = 0.0;
    for (const auto& row : rows)
      drift = std::max(drift, std::abs(std::stod(row[cg]) - v0));
    out << "initial G-speed " << format_double(v0) << ", max drift "
        << format_double(drift) << "\n";
  }
  return out.str();
}

} // namespace

std::string render_report(const std::string& input_text) {
  // Sniff: JSON object -> verify report; otherwise CSV.
  std::size_t pos = input_text.find_first_not_of(" \t\r\n");
  if (pos == std::string::npos) return "no data\n";
  if (input_text[pos] == '{') {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(input_text);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("input is not valid JSON: ") + e.what());
    }
    if (j.value("command", std::string()) == "verify")
      return render_verify_report(j);
    return j.dump(2) + "\n";
  }

  std::istringstream in(input_text);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header.empty())
      header = split_csv_line(line);
    else
      rows.push_back(split_csv_line(line));
  }
  if (header.empty() || rows.empty()) return "no data\n";
  if (!header.empty() && header[0] == "f1") return render_scan_csv(header, rows);
  if (!header.empty() && header[0] == "t")
    return render_trajectory_csv(header, rows);
  return "no data\n";
}

} // namespace sasakigeo
