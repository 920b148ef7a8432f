#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "sasakigeo/errors.hpp"
#include "sasakigeo/runner.hpp"

using namespace sasakigeo;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

const char* kFlatVerify = R"({
  "manifold": {"kind": "euclidean", "dim": 3},
  "weights": {"f1": 1.0, "f2": 1.0},
  "verify": {"samples": 4, "tuples_per_point": 2}
})";

const char* kSphereVerify = R"({
  "manifold": {"kind": "constant_curvature", "dim": 2, "c": 1.0},
  "weights": {"f1": 1.0, "f2": 1.0},
  "verify": {"samples": 4, "tuples_per_point": 2}
})";

} // namespace

TEST_CASE("config validation fails closed") {
  CHECK_THROWS_AS(run_config("not json"), ConfigError);
  CHECK_THROWS_AS(run_config("{}"), ConfigError);

  // unknown keys anywhere are rejected
  CHECK_THROWS_AS(run_config(R"({
    "manifold": {"kind": "euclidean", "dim": 3},
    "weights": {"f1": 1.0, "f2": 1.0},
    "verify": {"samples": 4, "tolerence": 1e-5}
  })"),
                  ConfigError);
  CHECK_THROWS_AS(run_config(R"({
    "manifold": {"kind": "euclidean", "dim": 3, "extra": 1},
    "weights": {"f1": 1.0, "f2": 1.0},
    "verify": {}
  })"),
                  ConfigError);

  // exactly one command block
  CHECK_THROWS_AS(run_config(R"({
    "manifold": {"kind": "euclidean", "dim": 3},
    "weights": {"f1": 1.0, "f2": 1.0}
  })"),
                  ConfigError);
  CHECK_THROWS_AS(run_config(R"({
    "manifold": {"kind": "euclidean", "dim": 3},
    "weights": {"f1": 1.0, "f2": 1.0},
    "verify": {},
    "scan": {"f1_grid": [1.0], "f2_grid": [1.0], "r_grid": [1.0]}
  })"),
                  ConfigError);

  // f2 and phi2 cannot both be present
  CHECK_THROWS_AS(run_config(R"({
    "manifold": {"kind": "euclidean", "dim": 2},
    "weights": {"f1": 1.0, "f2": 1.0,
                "phi2": {"kind": "linear", "coeffs": [0.3, 0.0]}},
    "verify": {}
  })"),
                  ConfigError);

  // conformal weights need a flat base
  CHECK_THROWS_AS(run_config(R"({
    "manifold": {"kind": "constant_curvature", "dim": 2, "c": 1.0},
    "weights": {"f1": 1.0, "phi2": {"kind": "linear", "coeffs": [0.3, 0.0]}},
    "verify": {"samples": 2}
  })"),
                  ConfigError);
}

TEST_CASE("verify: flat base passes, corrupted tolerance fails") {
  RunOutcome ok = run_config(kFlatVerify);
  CHECK(ok.exit_code == kExitPass);
  CHECK(ok.report_json.find("\"pass\": true") != std::string::npos);

  // residuals on a curved base cannot beat 1e-30
  std::string corrupted = R"({
    "manifold": {"kind": "constant_curvature", "dim": 2, "c": 1.0},
    "weights": {"f1": 1.0, "f2": 1.0},
    "verify": {"samples": 3, "tuples_per_point": 1, "tolerance": 1e-30}
  })";
  RunOutcome bad = run_config(corrupted);
  CHECK(bad.exit_code == kExitToleranceFailure);
  CHECK(bad.report_json.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("verify: curved base within default tolerance") {
  RunOutcome out = run_config(kSphereVerify);
  CHECK(out.exit_code == kExitPass);
  CHECK(out.summary.find("PASS") != std::string::npos);
}

TEST_CASE("verify with radius adds the sphere two-path quantity") {
  std::string cfg = R"({
    "manifold": {"kind": "constant_curvature", "dim": 2, "c": 1.0},
    "weights": {"f1": 1.0, "f2": 1.0},
    "radius": 1.0,
    "verify": {"samples": 2, "tuples_per_point": 1}
  })";
  RunOutcome out = run_config(cfg);
  CHECK(out.exit_code == kExitPass);
  CHECK(out.report_json.find("sphere_scalar") != std::string::npos);
}

TEST_CASE("outputs are deterministic for a fixed seed") {
  RunOutcome a = run_config(kSphereVerify);
  RunOutcome b = run_config(kSphereVerify);
  CHECK(a.report_json == b.report_json);
  CHECK(a.summary == b.summary);

  std::string seeded = R"({
    "manifold": {"kind": "constant_curvature", "dim": 2, "c": 1.0},
    "weights": {"f1": 1.0, "f2": 1.0},
    "seed": 7,
    "verify": {"samples": 4, "tuples_per_point": 2}
  })";
  RunOutcome c = run_config(seeded);
  CHECK(c.report_json != a.report_json);  // default seed is 42
}

TEST_CASE("worker count does not change the bytes") {
  setenv("SASAKIGEO_THREADS", "1", 1);
  RunOutcome serial = run_config(kSphereVerify);
  setenv("SASAKIGEO_THREADS", "3", 1);
  RunOutcome threaded = run_config(kSphereVerify);
  unsetenv("SASAKIGEO_THREADS");
  CHECK(serial.report_json == threaded.report_json);
}

TEST_CASE("scan run: thresholds land in the summary and files are written") {
  auto dir = std::filesystem::temp_directory_path() / "sasakigeo_test_scan";
  std::filesystem::create_directories(dir);
  auto csv_path = dir / "scan.csv";
  auto sum_path = dir / "scan_summary.json";
  std::string cfg = std::string(R"({
    "manifold": {"kind": "constant_curvature", "dim": 3, "c": -1.0},
    "weights": {"f1": 1.0, "f2": 1.0},
    "output": {"path": ")") +
                    csv_path.string() + R"(", "summary_path": ")" +
                    sum_path.string() + R"("},
    "scan": {"f1_grid": [1.0], "f2_grid": [1.0],
             "r_grid": {"min": 0.1, "max": 1.0, "count": 19},
             "samples": 8}
  })";
  RunOutcome out = run_config(cfg);
  CHECK(out.exit_code == kExitPass);
  CHECK(out.csv.rfind("f1,f2,r,min_scalar", 0) == 0);
  CHECK(out.summary_json.find("\"kind\": \"bracket\"") != std::string::npos);
  CHECK(slurp(csv_path) == out.csv);
  CHECK(slurp(sum_path) == out.summary_json);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scan on a surface notes the TM equality") {
  std::string cfg = R"({
    "manifold": {"kind": "constant_curvature", "dim": 2, "c": 1.0},
    "weights": {"f1": 1.0, "f2": 1.0},
    "scan": {"f1_grid": [1.0], "f2_grid": [1.0], "r_grid": [0.5, 1.0],
             "samples": 4}
  })";
  RunOutcome out = run_config(cfg);
  CHECK(out.exit_code == kExitPass);
  CHECK(out.summary_json.find("identical Ricci and scalar") != std::string::npos);
}

TEST_CASE("geodesic run: conservation, study, divergence exit code") {
  std::string straight = R"({
    "manifold": {"kind": "euclidean", "dim": 2},
    "weights": {"f1": 1.0, "f2": 1.0},
    "geodesic": {"x0": [0, 0], "u0": [1, 0], "xdot0": [0.3, 0.1],
                 "udot0": [0.2, 0.0], "duration": 1.0, "dt": 0.001}
  })";
  RunOutcome out = run_config(straight);
  CHECK(out.exit_code == kExitPass);
  CHECK(out.csv.rfind("t,x1,x2,u1,u2,xdot1,xdot2,udot1,udot2,gspeed", 0) == 0);
  CHECK(out.summary_json.find("\"diverged\": false") != std::string::npos);

  std::string study = R"({
    "manifold": {"kind": "euclidean", "dim": 2},
    "weights": {"f1": 1.0, "phi2": {"kind": "linear", "coeffs": [0.3, 0.0]}},
    "geodesic": {"x0": [0, 0], "u0": [1, 0], "xdot0": [0.3, 0.1],
                 "udot0": [0.6, -0.2], "duration": 1.0, "dt": 0.02,
                 "convergence_study": true}
  })";
  RunOutcome st = run_config(study);
  CHECK(st.exit_code == kExitPass);
  const std::string key = "\"observed_order\": ";
  auto pos = st.summary_json.find(key);
  REQUIRE(pos != std::string::npos);
  double order = std::stod(st.summary_json.substr(pos + key.size()));
  CHECK(order > 3.5);

  std::string blowup = R"({
    "manifold": {"kind": "euclidean", "dim": 2},
    "weights": {"f1": 1.0, "phi2": {"kind": "linear", "coeffs": [60.0, 0.0]}},
    "geodesic": {"x0": [0, 0], "u0": [0, 0], "xdot0": [5.0, 0.0],
                 "udot0": [5.0, 0.0], "duration": 10.0, "dt": 0.1}
  })";
  RunOutcome dv = run_config(blowup);
  CHECK(dv.exit_code == kExitNumericFailure);
  CHECK(dv.csv.find("\n") != std::string::npos);  // partial trajectory present
}

TEST_CASE("report rendering") {
  // verify report -> table
  RunOutcome v = run_config(kSphereVerify);
  std::string table = render_report(v.report_json);
  CHECK(table.find("quantity") != std::string::npos);
  CHECK(table.find("curvature4") != std::string::npos);
  CHECK(table.find("overall: PASS") != std::string::npos);

  // scan CSV -> frontier table sorted by r
  std::string cfg = R"({
    "manifold": {"kind": "constant_curvature", "dim": 3, "c": -1.0},
    "weights": {"f1": 1.0, "f2": 1.0},
    "scan": {"f1_grid": [1.0], "f2_grid": [1.0], "r_grid": [1.0, 0.25, 0.5],
             "samples": 4}
  })";
  RunOutcome s = run_config(cfg);
  std::string frontier = render_report(s.csv);
  CHECK(frontier.find("scan frontier") != std::string::npos);
  CHECK(frontier.find("0.25") < frontier.find("0.5"));

  // trajectory CSV -> drift summary
  std::string geo = R"({
    "manifold": {"kind": "euclidean", "dim": 2},
    "weights": {"f1": 1.0, "f2": 1.0},
    "geodesic": {"x0": [0, 0], "u0": [1, 0], "xdot0": [0.3, 0.1],
                 "udot0": [0.2, 0.0], "duration": 0.5, "dt": 0.01}
  })";
  std::string traj = render_report(run_config(geo).csv);
  CHECK(traj.find("G-speed") != std::string::npos);

  // degenerate inputs
  CHECK(render_report("") == "no data\n");
  CHECK(render_report("f1,f2,r,min_scalar,positive\n") == "no data\n");
}
