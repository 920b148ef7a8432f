// Acceptance suite: every criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails. Tolerances are fixed here, not
// configurable.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sasakigeo/conformal.hpp"
#include "sasakigeo/oracle.hpp"
#include "sasakigeo/sphere.hpp"
#include "sasakigeo/util.hpp"

using namespace sasakigeo;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

VectorXd chart_point(const ChartedManifold& M, Rng& rng) {
  VectorXd x(M.dim());
  for (int i = 0; i < M.dim(); ++i) {
    double lo = M.domain().lo[i], hi = M.domain().hi[i];
    double pad = 0.08 * (hi - lo);
    x(i) = rng.uniform(lo + pad, hi - pad);
  }
  return x;
}

SplitTangentVector random_split(Rng& rng, int m) {
  return {rng.uniform_vector(m, -1.0, 1.0), rng.uniform_vector(m, -1.0, 1.0)};
}

VectorXd unit_fiber_dir(const MatrixXd& g, Rng& rng) {
  VectorXd dir = rng.normal_vector(static_cast<int>(g.rows()));
  return dir / std::sqrt(dir.dot(g * dir));
}

struct ZooEntry {
  ZooSpec spec;
  bool analytic;
};

std::vector<ZooEntry> acceptance_zoo() {
  return {{ZooSpec::euclidean(3), true},
          {ZooSpec::constant_curvature(2, 1.0), true},
          {ZooSpec::constant_curvature(3, 1.0), true},
          {ZooSpec::constant_curvature(3, -1.0), true},
          {ZooSpec::product(ZooSpec::constant_curvature(2, 1.0),
                            ZooSpec::euclidean(1)),
           true},
          {ZooSpec::perturbed(3, {0.2, {}, 1.0}), false}};
}

// 1. formula vs oracle for curvature_RG4, ricci_G, scalar_G over the zoo and
//    the weight grid.
bool oracle_equivalence(std::string& detail) {
  Rng rng(2024);
  double worst_analytic = 0.0, worst_fd = 0.0;
  for (const ZooEntry& entry : acceptance_zoo()) {
    auto M = construct_zoo(entry.spec);
    const int m = M->dim();
    const double tol = entry.analytic ? 1e-5 : 5e-3;
    for (double f1 : {1.0, 2.0})
      for (double f2 : {1.0, 0.5}) {
        WeightedSasakiMetric G(M, f1, f2);
        InducedChart chart(G);
        for (int s = 0; s < 20; ++s) {
          TangentBundlePoint P{chart_point(*M, rng), rng.normal_vector(m)};
          SasakiPointData d(G, P);
          InducedChart::PointValues pv = chart.evaluate(P);
          double worst = 0.0;
          for (int t = 0; t < 2; ++t) {
            SplitTangentVector X = random_split(rng, m), Y = random_split(rng, m),
                               Z = random_split(rng, m), W = random_split(rng, m);
            worst = std::max(worst,
                             rel_gap(curvature_RG4(d, X, Y, Z, W),
                                     InducedChart::curvature4_from(pv, X, Y, Z, W)));
            worst = std::max(worst, rel_gap(ricci_G(d, X, Y),
                                            InducedChart::ricci_from(pv, X, Y)));
          }
          worst = std::max(worst, rel_gap(scalar_G(d), pv.S));
          if (worst > tol) {
            detail = "residual " + format_double(worst) + " on " + M->label();
            return false;
          }
          (entry.analytic ? worst_analytic : worst_fd) =
              std::max(entry.analytic ? worst_analytic : worst_fd, worst);
        }
      }
  }
  detail = "max residual analytic " + format_double(worst_analytic) +
           ", perturbed " + format_double(worst_fd);
  return true;
}

// 2. block formulas vs the connection-piece assembly.
bool two_path_assembly(std::string& detail) {
  Rng rng(77);
  double worst = 0.0;
  for (const ZooEntry& entry : acceptance_zoo()) {
    auto M = construct_zoo(entry.spec);
    const int m = M->dim();
    WeightedSasakiMetric G(M, 1.0, 0.5);
    for (int s = 0; s < 20; ++s) {
      TangentBundlePoint P{chart_point(*M, rng), rng.normal_vector(m)};
      SasakiPointData d(G, P);
      SplitTangentVector X = random_split(rng, m), Y = random_split(rng, m),
                         Z = random_split(rng, m);
      SplitTangentVector a = curvature_RG(d, X, Y, Z);
      SplitTangentVector b = assemble_RG_from_pieces(d, X, Y, Z);
      double gap = (a - b).max_abs() / std::max(1.0, a.max_abs());
      worst = std::max(worst, gap);
      if (gap > 1e-6) {
        detail = "gap " + format_double(gap) + " on " + M->label();
        return false;
      }
    }
  }
  detail = "max relative gap " + format_double(worst);
  return true;
}

// 3. scalar curvature closed form on space forms.
bool scalar_closed_form(std::string& detail) {
  Rng rng(99);
  double worst = 0.0;
  for (int m : {2, 3})
    for (double c : {1.0, -1.0})
      for (double rho : {0.5, 1.0, 2.0})
        for (double f1 : {1.0, 2.0})
          for (double f2 : {1.0, 0.5}) {
            auto M = construct_zoo(ZooSpec::constant_curvature(m, c));
            WeightedSasakiMetric G(M, f1, f2);
            VectorXd x = chart_point(*M, rng);
            SasakiPointData d(G, {x, rho * unit_fiber_dir(M->metric(x), rng)});
            double expected =
                m * (m - 1) * c / f1 -
                f2 / (4.0 * f1 * f1) * 2.0 * (m - 1) * c * c * rho * rho;
            double gap = rel_gap(scalar_G(d), expected);
            worst = std::max(worst, gap);
            if (gap > 1e-6) {
              detail = "gap " + format_double(gap);
              return false;
            }
          }
  detail = "max relative gap " + format_double(worst);
  return true;
}

// 4. unit tangent bundle of S^2(1): constant sectional curvature 1/4.
bool unit_tangent_bundle_quarter(std::string& detail) {
  Rng rng(123);
  auto M = construct_zoo(ZooSpec::constant_curvature(2, 1.0));
  WeightedSasakiMetric G(M, 1.0, 1.0);
  SphereBundleConfig C(G, 1.0);
  double worst_k = 0.0, worst_s = 0.0;
  for (int s = 0; s < 10; ++s) {
    VectorXd x = chart_point(*M, rng);
    SasakiPointData d(G, {x, unit_fiber_dir(M->metric(x), rng)});
    SplitTangentVector N = normal_vector(C, d);
    for (int t = 0; t < 3; ++t) {
      SplitTangentVector X = random_split(rng, 2);
      X = X - N * d.pair(X, N);
      X = X * (1.0 / std::sqrt(d.pair(X, X)));
      SplitTangentVector Y = random_split(rng, 2);
      Y = Y - N * d.pair(Y, N) - X * d.pair(X, Y);
      Y = Y * (1.0 / std::sqrt(d.pair(Y, Y)));
      worst_k = std::max(worst_k,
                         std::abs(curvature_SrM(C, d, X, Y, Y, X) - 0.25));
    }
    worst_s = std::max(worst_s, std::abs(scalar_SrM(C, d) - 1.5));
  }
  detail = "max |k - 1/4| " + format_double(worst_k) + ", max |S - 3/2| " +
           format_double(worst_s);
  return worst_k <= 1e-5 && worst_s <= 1e-6;
}

// 5. positive-scalar-curvature thresholds on H^3 and S^3.
bool positivity_thresholds(std::string& detail) {
  std::vector<double> rgrid;
  for (int i = 0; i < 19; ++i) rgrid.push_back(0.1 + 0.05 * i);

  auto H3 = construct_zoo(ZooSpec::constant_curvature(3, -1.0));
  ScanResult rscan = scan_positive_scalar(H3, {1.0}, {1.0}, rgrid, 20, 42);
  const ScanThreshold& rth = rscan.r_thresholds.at(0);
  const double r_star = 0.5627;
  bool r_ok = rth.kind == "bracket" && rth.lo <= r_star && r_star <= rth.hi &&
              std::abs(rth.lo - r_star) <= 0.05 && std::abs(rth.hi - r_star) <= 0.05;

  std::vector<double> f1grid;
  for (int i = 0; i <= 20; ++i) f1grid.push_back(2.0 + 0.1 * i);
  ScanResult fscan = scan_positive_scalar(H3, f1grid, {1.0}, {1.0}, 20, 42);
  const ScanThreshold& fth = fscan.f1_thresholds.at(0);
  const double f1_star = 3.158;
  bool f_ok = fth.kind == "bracket" && fth.lo <= f1_star && f1_star <= fth.hi &&
              std::abs(fth.lo - f1_star) <= 0.1 && std::abs(fth.hi - f1_star) <= 0.1;

  auto S3 = construct_zoo(ZooSpec::constant_curvature(3, 1.0));
  ScanResult pscan = scan_positive_scalar(S3, {1.0}, {1.0}, rgrid, 20, 42);
  bool p_ok = pscan.r_thresholds.at(0).kind == "all_positive";

  detail = "r* in [" + format_double(rth.lo) + ", " + format_double(rth.hi) +
           "], f1* in [" + format_double(fth.lo) + ", " + format_double(fth.hi) +
           "], S3 " + pscan.r_thresholds.at(0).kind;
  return r_ok && f_ok && p_ok;
}

// 6. dim-2 base: S_rM and TM carry the same Ricci and scalar curvature.
bool dimension_two_equality(std::string& detail) {
  Rng rng(7);
  auto M = construct_zoo(ZooSpec::constant_curvature(2, 1.0));
  WeightedSasakiMetric G(M, 1.0, 1.0);
  const double r = 0.8;
  SphereBundleConfig C(G, r);
  double worst_scalar = 0.0, worst_ric = 0.0;
  for (int s = 0; s < 20; ++s) {
    VectorXd x = chart_point(*M, rng);
    SasakiPointData d(G, {x, r * unit_fiber_dir(M->metric(x), rng)});
    worst_scalar = std::max(worst_scalar, std::abs(scalar_SrM(C, d) - scalar_G(d)));
    SplitTangentVector N = normal_vector(C, d);
    SplitTangentVector X = random_split(rng, 2);
    X = X - N * d.pair(X, N);
    SplitTangentVector Y = random_split(rng, 2);
    Y = Y - N * d.pair(Y, N);
    worst_ric = std::max(worst_ric,
                         std::abs(ricci_SrM(C, d, X, Y) - ricci_G(d, X, Y)));
  }
  detail = "max scalar gap " + format_double(worst_scalar) + ", max ricci gap " +
           format_double(worst_ric);
  return worst_scalar <= 1e-8 && worst_ric <= 1e-8;
}

// 7. curvature symmetries for both the ambient and the sphere bundle tensors.
bool symmetry_suite(std::string& detail) {
  Rng rng(555);
  double worst = 0.0;

  std::vector<ZooSpec> manifolds{ZooSpec::constant_curvature(3, 1.0),
                                 ZooSpec::constant_curvature(3, -1.0)};
  for (int s = 0; s < 50; ++s) {
    auto M = construct_zoo(manifolds[s % manifolds.size()]);
    WeightedSasakiMetric G(M, 1.0, 0.5);
    TangentBundlePoint P{chart_point(*M, rng), rng.normal_vector(3)};
    SasakiPointData d(G, P);
    SplitTangentVector X = random_split(rng, 3), Y = random_split(rng, 3),
                       Z = random_split(rng, 3), W = random_split(rng, 3);
    double v = curvature_RG4(d, X, Y, Z, W);
    double scale = std::max(1.0, std::abs(v));
    worst = std::max(worst, std::abs(v + curvature_RG4(d, Y, X, Z, W)) / scale);
    worst = std::max(worst, std::abs(v + curvature_RG4(d, X, Y, W, Z)) / scale);
    worst = std::max(worst, std::abs(v - curvature_RG4(d, Z, W, X, Y)) / scale);
    double bianchi = v + curvature_RG4(d, Y, Z, X, W) + curvature_RG4(d, Z, X, Y, W);
    worst = std::max(worst, std::abs(bianchi) / scale);
  }

  const double r = 0.9;
  for (int s = 0; s < 50; ++s) {
    auto M = construct_zoo(manifolds[s % manifolds.size()]);
    WeightedSasakiMetric G(M, 1.0, 0.5);
    SphereBundleConfig C(G, r);
    VectorXd x = chart_point(*M, rng);
    SasakiPointData d(G, {x, r * unit_fiber_dir(M->metric(x), rng)});
    SplitTangentVector N = normal_vector(C, d);
    auto tangent = [&](SplitTangentVector v) {
      return v - N * d.pair(v, N);
    };
    SplitTangentVector X = tangent(random_split(rng, 3)),
                       Y = tangent(random_split(rng, 3)),
                       Z = tangent(random_split(rng, 3)),
                       W = tangent(random_split(rng, 3));
    double v = curvature_SrM(C, d, X, Y, Z, W);
    double scale = std::max(1.0, std::abs(v));
    worst = std::max(worst, std::abs(v + curvature_SrM(C, d, Y, X, Z, W)) / scale);
    worst = std::max(worst, std::abs(v + curvature_SrM(C, d, X, Y, W, Z)) / scale);
    worst = std::max(worst, std::abs(v - curvature_SrM(C, d, Z, W, X, Y)) / scale);
    double bianchi =
        v + curvature_SrM(C, d, Y, Z, X, W) + curvature_SrM(C, d, Z, X, Y, W);
    worst = std::max(worst, std::abs(bianchi) / scale);
  }
  detail = "max symmetry residual " + format_double(worst);
  return worst <= 1e-6;
}

// 8. conformal-fiber suite: oracle match, nonpositive sectional curvature,
//    fiber-plane value, geodesic conservation and order.
bool conformal_suite(std::string& detail) {
  Rng rng(888);
  const int m = 3;
  auto E = construct_zoo(ZooSpec::euclidean(m));
  VectorXd coeffs = VectorXd::Zero(m);
  coeffs(0) = 0.3;
  Phi2Field phi2 = Phi2Field::linear(coeffs);
  ConformalFiberMetric Gc(m, 1.0, phi2);

  // oracle agreement with position-dependent f2
  InducedChart chart(E, 1.0, [phi2](const VectorXd& x) {
    return std::exp(2.0 * phi2.value(x));
  });
  double worst_oracle = 0.0;
  for (int s = 0; s < 20; ++s) {
    TangentBundlePoint P{rng.uniform_vector(m, -1.5, 1.5), rng.normal_vector(m)};
    InducedChart::PointValues pv = chart.evaluate(P);
    SplitTangentVector X = random_split(rng, m), Y = random_split(rng, m),
                       Z = random_split(rng, m), W = random_split(rng, m);
    double formula = Gc.pair(P.x, curvature_conformal(Gc, P, X, Y, Z), W);
    worst_oracle = std::max(
        worst_oracle, rel_gap(formula, InducedChart::curvature4_from(pv, X, Y, Z, W)));
  }
  if (worst_oracle > 1e-5) {
    detail = "oracle residual " + format_double(worst_oracle);
    return false;
  }

  // k(plane) <= 0 on 100 random planes
  for (int s = 0; s < 100; ++s) {
    TangentBundlePoint P{rng.uniform_vector(m, -1.5, 1.5), rng.normal_vector(m)};
    SplitTangentVector X = random_split(rng, m);
    X = X * (1.0 / std::sqrt(Gc.pair(P.x, X, X)));
    SplitTangentVector Y = random_split(rng, m);
    Y = Y - X * Gc.pair(P.x, X, Y);
    Y = Y * (1.0 / std::sqrt(Gc.pair(P.x, Y, Y)));
    if (sectional_conformal(Gc, P, X, Y).k > 1e-12) {
      detail = "positive sectional curvature found";
      return false;
    }
  }

  // fiber-plane value -f2 eps^2 delta at points with f2 = 1 (x1 = 0)
  double worst_fiber = 0.0;
  for (double f1 : {1.0, 2.0}) {
    ConformalFiberMetric Gf(m, f1, phi2);
    for (int s = 0; s < 10; ++s) {
      VectorXd x = rng.uniform_vector(m, -1.5, 1.5);
      x(0) = 0.0;
      TangentBundlePoint P{x, rng.normal_vector(m)};
      SplitTangentVector X = SplitTangentVector::vertical(rng.normal_vector(m));
      X = X * (1.0 / std::sqrt(Gf.pair(x, X, X)));
      SplitTangentVector Y = SplitTangentVector::vertical(rng.normal_vector(m));
      Y = Y - X * Gf.pair(x, X, Y);
      Y = Y * (1.0 / std::sqrt(Gf.pair(x, Y, Y)));
      double eps = Gf.epsilon(x);
      double expected = -Gf.f2(x) * eps * eps * Gf.delta(x);
      worst_fiber = std::max(worst_fiber,
                             std::abs(sectional_conformal(Gf, P, X, Y).k - expected));
    }
  }
  if (worst_fiber > 1e-8) {
    detail = "fiber-plane gap " + format_double(worst_fiber);
    return false;
  }

  // geodesic conservation over T = 5 at dt = 1e-3
  BundleState s0{VectorXd::Zero(m), VectorXd::Unit(m, 1),
                 rng.uniform_vector(m, -0.5, 0.5), rng.uniform_vector(m, -0.8, 0.8)};
  GeodesicTrajectory traj = integrate_geodesic(Gc, s0, 5.0, 1e-3);
  if (traj.diverged) {
    detail = "geodesic diverged";
    return false;
  }
  double v0 = g_speed(Gc, traj.states.front());
  double drift = 0.0;
  for (const BundleState& s : traj.states)
    drift = std::max(drift, std::abs(g_speed(Gc, s) - v0));
  if (drift / v0 >= 1e-6) {
    detail = "G-speed drift " + format_double(drift / v0);
    return false;
  }

  // observed integrator order from a dt-halving study
  auto terminal = [&](double dt) {
    return integrate_geodesic(Gc, s0, 1.0, dt).states.back();
  };
  BundleState ref = terminal(1.0 / 512.0);
  auto err = [&](const BundleState& s) {
    double e = (s.x - ref.x).cwiseAbs().maxCoeff();
    e = std::max(e, (s.u - ref.u).cwiseAbs().maxCoeff());
    e = std::max(e, (s.x_dot - ref.x_dot).cwiseAbs().maxCoeff());
    return std::max(e, (s.u_dot - ref.u_dot).cwiseAbs().maxCoeff());
  };
  double order = std::log2(err(terminal(1.0 / 16.0)) / err(terminal(1.0 / 32.0)));
  detail = "oracle residual " + format_double(worst_oracle) + ", drift " +
           format_double(drift / v0) + ", order " + format_double(order);
  return order >= 3.8;
}

// 9. mean curvature two-path equality and the Einstein-iff-flat witnesses.
bool mean_curvature_and_einstein(std::string& detail) {
  Rng rng(321);
  const double r = 1.2;
  double worst_mean = 0.0;
  for (const ZooEntry& entry : acceptance_zoo()) {
    auto M = construct_zoo(entry.spec);
    WeightedSasakiMetric G(M, 1.0, 2.0);
    SphereBundleConfig C(G, r);
    double n = static_cast<double>(M->dim() - 1);
    double closed = -n / (r * std::sqrt(G.f2));
    for (int s = 0; s < 5; ++s) {
      VectorXd x = chart_point(*M, rng);
      SasakiPointData d(G, {x, r * unit_fiber_dir(M->metric(x), rng)});
      worst_mean = std::max(
          worst_mean, std::abs(mean_curvature_trace(C, d) - closed));
    }
  }
  if (worst_mean > 1e-8) {
    detail = "mean-curvature gap " + format_double(worst_mean);
    return false;
  }

  auto E = construct_zoo(ZooSpec::euclidean(3));
  WeightedSasakiMetric Gf(E, 1.0, 1.0);
  double worst_flat = 0.0;
  for (int s = 0; s < 10; ++s) {
    SasakiPointData d(Gf, {rng.uniform_vector(3, -2.0, 2.0), rng.normal_vector(3)});
    worst_flat = std::max(worst_flat, ricci_G_matrix(d).cwiseAbs().maxCoeff());
  }
  if (worst_flat > 1e-8) {
    detail = "flat base has nonzero Ricci " + format_double(worst_flat);
    return false;
  }

  auto S3 = construct_zoo(ZooSpec::constant_curvature(3, 1.0));
  WeightedSasakiMetric Gs(S3, 1.0, 1.0);
  VectorXd x = chart_point(*S3, rng);
  SasakiPointData d(Gs, {x, unit_fiber_dir(S3->metric(x), rng)});
  MatrixXd ric = ricci_G_matrix(d);
  double tf = (ric - ric.trace() / 6.0 * MatrixXd::Identity(6, 6)).norm();
  detail = "mean gap " + format_double(worst_mean) + ", flat ricci " +
           format_double(worst_flat) + ", trace-free witness " + format_double(tf);
  return tf > 0.1;
}

} // namespace

int main() {
  criterion(1, "oracle equivalence for curvature, Ricci, scalar",
            oracle_equivalence);
  criterion(2, "two-path assembly of R^G", two_path_assembly);
  criterion(3, "scalar curvature closed form on space forms", scalar_closed_form);
  criterion(4, "unit tangent bundle of S^2(1) has curvature 1/4",
            unit_tangent_bundle_quarter);
  criterion(5, "positive scalar curvature thresholds", positivity_thresholds);
  criterion(6, "dim-2 base: S_rM matches TM Ricci and scalar",
            dimension_two_equality);
  criterion(7, "curvature symmetry suite", symmetry_suite);
  criterion(8, "conformal fiber suite", conformal_suite);
  criterion(9, "mean curvature trace and Einstein-iff-flat witnesses",
            mean_curvature_and_einstein);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
