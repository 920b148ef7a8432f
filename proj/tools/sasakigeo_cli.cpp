// Command-line front end. All geometry goes through the C API of the shared
// library; this file only parses arguments, reads/writes files and prints.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sasakigeo.h"

namespace {

int fail(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, sgeo_last_error());
  return 2;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::ostringstream ss;
  ss << f.rdbuf();
  out = ss.str();
  return true;
}

int run_config_text(const std::string& config) {
  char* summary = nullptr;
  sgeo_status st = sgeo_run(config.c_str(), &summary);
  if (summary) {
    std::fputs(summary, stdout);
    sgeo_string_free(summary);
  }
  if (st == SGEO_ERR_CONFIG || st == SGEO_ERR_GEOMETRY) {
    std::fprintf(stderr, "error: %s\n", sgeo_last_error());
    return 2;
  }
  return static_cast<int>(st);
}

int run_command(const std::string& config_path, int samples_override,
                double tol_override, bool has_samples, bool has_tol) {
  std::string config;
  if (!read_file(config_path, config)) {
    std::fprintf(stderr, "error: cannot read config file %s\n",
                 config_path.c_str());
    return 2;
  }
  if (has_samples || has_tol) {
    // Overrides merge into the verify block before the run.
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(config);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
      return 2;
    }
    if (!j.contains("verify")) {
      std::fprintf(stderr, "error: --samples/--tol need a verify config\n");
      return 2;
    }
    if (has_samples) j["verify"]["samples"] = samples_override;
    if (has_tol) j["verify"]["tolerance"] = tol_override;
    config = j.dump();
  }
  return run_config_text(config);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted Sasaki metrics on TM and S_rM: curvature formulas "
               "with a finite-difference verification oracle"};
  app.require_subcommand(1);

  std::string config_path;
  int samples = 0;
  double tol = 0.0;

  auto* verify = app.add_subcommand("verify",
                                    "compare closed-form curvature against the "
                                    "coordinate oracle");
  verify->add_option("--config", config_path, "JSON config file")->required();
  auto* opt_samples =
      verify->add_option("--samples", samples, "override sample count");
  auto* opt_tol = verify->add_option("--tol", tol, "override tolerance");

  auto* scan = app.add_subcommand("scan",
                                  "scan (f1, f2, r) for positive scalar "
                                  "curvature of S_rM");
  scan->add_option("--config", config_path, "JSON config file")->required();

  auto* geodesic = app.add_subcommand("geodesic",
                                      "integrate geodesics of the conformal "
                                      "fiber metric on a flat base");
  geodesic->add_option("--config", config_path, "JSON config file")->required();

  std::string input_path;
  auto* report = app.add_subcommand("report",
                                    "render a stored verify/scan output as a "
                                    "table");
  report->add_option("--input", input_path, "verify JSON or scan CSV")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (report->parsed()) {
    std::string text;
    if (!read_file(input_path, text)) {
      std::fprintf(stderr, "error: cannot read input file %s\n",
                   input_path.c_str());
      return 2;
    }
    char* table = nullptr;
    sgeo_status st = sgeo_render_report(text.c_str(), &table);
    if (st != SGEO_OK) return fail("report");
    std::fputs(table, stdout);
    sgeo_string_free(table);
    return 0;
  }

  return run_command(config_path, samples, tol,
                     opt_samples != nullptr && opt_samples->count() > 0,
                     opt_tol != nullptr && opt_tol->count() > 0);
}
