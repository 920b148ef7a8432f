#include "sasakigeo.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>

#include <json.hpp>

#include "sasakigeo/oracle.hpp"
#include "sasakigeo/runner.hpp"
#include "sasakigeo/sphere.hpp"

using namespace sasakigeo;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

sgeo_status map_exception() {
  try {
    throw;
  } catch (const ConfigError& e) {
    set_error(e.what());
    return SGEO_ERR_CONFIG;
  } catch (const NumericError& e) {
    set_error(e.what());
    return SGEO_ERR_NUMERIC;
  } catch (const Error& e) {
    set_error(e.what());
    return SGEO_ERR_GEOMETRY;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SGEO_ERR_GEOMETRY;
  }
}

ZooSpec zoo_from_json_text(const char* text) {
  // Reuse the runner's schema by wrapping into a minimal config and parsing
  // just the manifold block here.
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("manifold spec is not valid JSON: ") + e.what());
  }
  // Minimal strict parse mirroring the runner.
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("manifold spec needs a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  auto num = [&](const nlohmann::ordered_json& o, const char* k) {
    if (!o.contains(k) || !o[k].is_number())
      throw ConfigError(std::string("manifold spec needs numeric \"") + k + "\"");
    return o[k].get<double>();
  };
  std::function<ZooSpec(const nlohmann::ordered_json&)> parse =
      [&](const nlohmann::ordered_json& o) -> ZooSpec {
    std::string k = o.at("kind").get<std::string>();
    if (k == "euclidean") return ZooSpec::euclidean(static_cast<int>(num(o, "dim")));
    if (k == "constant_curvature")
      return ZooSpec::constant_curvature(static_cast<int>(num(o, "dim")),
                                         num(o, "c"));
    if (k == "product") {
      if (!o.contains("factors") || o["factors"].size() != 2)
        throw ConfigError("product needs two factors");
      return ZooSpec::product(parse(o["factors"][0]), parse(o["factors"][1]));
    }
    if (k == "perturbed") {
      BumpSpec b;
      if (o.contains("bump")) {
        const auto& ob = o["bump"];
        if (ob.contains("amplitude")) b.amplitude = ob["amplitude"].get<double>();
        if (ob.contains("width")) b.width = ob["width"].get<double>();
        if (ob.contains("center"))
          b.center = ob["center"].get<std::vector<double>>();
      }
      return ZooSpec::perturbed(static_cast<int>(num(o, "dim")), b);
    }
    throw ConfigError("unknown manifold kind \"" + k + "\"");
  };
  return parse(j);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

} // namespace

struct sgeo_manifold {
  std::shared_ptr<const ChartedManifold> m;
};

struct sgeo_metric {
  WeightedSasakiMetric g;
};

extern "C" {

const char* sgeo_version(void) { return "0.1.0"; }

const char* sgeo_last_error(void) { return g_last_error.c_str(); }

sgeo_status sgeo_manifold_create(const char* spec_json, sgeo_manifold** out) {
  if (!spec_json || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    auto man = construct_zoo(zoo_from_json_text(spec_json));
    *out = new sgeo_manifold{std::move(man)};
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

void sgeo_manifold_free(sgeo_manifold* m) { delete m; }

int sgeo_manifold_dim(const sgeo_manifold* m) { return m ? m->m->dim() : 0; }

sgeo_status sgeo_manifold_scalar(const sgeo_manifold* m, const double* x,
                                 double* out) {
  if (!m || !x || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    Eigen::Map<const VectorXd> xv(x, m->m->dim());
    *out = m->m->ricci_and_scalar(xv).second;
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

sgeo_status sgeo_metric_create(const sgeo_manifold* m, double f1, double f2,
                               sgeo_metric** out) {
  if (!m || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    *out = new sgeo_metric{WeightedSasakiMetric(m->m, f1, f2)};
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

void sgeo_metric_free(sgeo_metric* g) { delete g; }

namespace {

TangentBundlePoint read_point(const sgeo_metric* g, const double* x,
                              const double* u) {
  const int m = g->g.base->dim();
  return {Eigen::Map<const VectorXd>(x, m), Eigen::Map<const VectorXd>(u, m)};
}

SplitTangentVector read_split(const sgeo_metric* g, const double* v) {
  const int m = g->g.base->dim();
  return {Eigen::Map<const VectorXd>(v, m), Eigen::Map<const VectorXd>(v + m, m)};
}

} // namespace

sgeo_status sgeo_metric_curvature4(const sgeo_metric* g, const double* x,
                                   const double* u, const double* X,
                                   const double* Y, const double* Z,
                                   const double* W, double* out) {
  if (!g || !x || !u || !X || !Y || !Z || !W || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    SasakiPointData d(g->g, read_point(g, x, u));
    *out = curvature_RG4(d, read_split(g, X), read_split(g, Y), read_split(g, Z),
                         read_split(g, W));
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

sgeo_status sgeo_metric_ricci(const sgeo_metric* g, const double* x,
                              const double* u, const double* X, const double* Y,
                              double* out) {
  if (!g || !x || !u || !X || !Y || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    SasakiPointData d(g->g, read_point(g, x, u));
    *out = ricci_G(d, read_split(g, X), read_split(g, Y));
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

sgeo_status sgeo_metric_scalar(const sgeo_metric* g, const double* x,
                               const double* u, double* out) {
  if (!g || !x || !u || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    SasakiPointData d(g->g, read_point(g, x, u));
    *out = scalar_G(d);
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

sgeo_status sgeo_metric_oracle_curvature4(const sgeo_metric* g, const double* x,
                                          const double* u, const double* X,
                                          const double* Y, const double* Z,
                                          const double* W, double* out) {
  if (!g || !x || !u || !X || !Y || !Z || !W || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    InducedChart chart(g->g);
    *out = chart.curvature4(read_point(g, x, u), read_split(g, X),
                            read_split(g, Y), read_split(g, Z), read_split(g, W));
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

sgeo_status sgeo_sphere_scalar(const sgeo_metric* g, double r, const double* x,
                               const double* u, double* out) {
  if (!g || !x || !u || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    SphereBundleConfig C(g->g, r);
    *out = scalar_SrM(C, read_point(g, x, u));
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

sgeo_status sgeo_sphere_curvature4(const sgeo_metric* g, double r,
                                   const double* x, const double* u,
                                   const double* X, const double* Y,
                                   const double* Z, const double* W,
                                   double* out) {
  if (!g || !x || !u || !X || !Y || !Z || !W || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    SphereBundleConfig C(g->g, r);
    SasakiPointData d(g->g, read_point(g, x, u));
    *out = curvature_SrM(C, d, read_split(g, X), read_split(g, Y),
                         read_split(g, Z), read_split(g, W));
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

sgeo_status sgeo_sphere_mean_curvature(const sgeo_metric* g, double r,
                                       const double* x, const double* u,
                                       double* out) {
  if (!g || !x || !u || !out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    SphereBundleConfig C(g->g, r);
    *out = mean_curvature(C, read_point(g, x, u));
    return SGEO_OK;
  } catch (...) {
    return map_exception();
  }
}

sgeo_status sgeo_run(const char* config_json, char** summary_out) {
  if (!config_json || !summary_out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  // Runs keep to the CLI exit-code contract: geometry problems in a
  // configured run are configuration errors.
  try {
    RunOutcome outcome = run_config(config_json);
    *summary_out = dup_string(outcome.summary);
    set_error("");
    return static_cast<sgeo_status>(outcome.exit_code);
  } catch (const NumericError& e) {
    set_error(e.what());
    *summary_out = nullptr;
    return SGEO_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    *summary_out = nullptr;
    return SGEO_ERR_CONFIG;
  }
}

sgeo_status sgeo_render_report(const char* input_text, char** table_out) {
  if (!input_text || !table_out) {
    set_error("null argument");
    return SGEO_ERR_CONFIG;
  }
  try {
    *table_out = dup_string(render_report(input_text));
    set_error("");
    return SGEO_OK;
  } catch (...) {
    *table_out = nullptr;
    return map_exception();
  }
}

void sgeo_string_free(char* s) { std::free(s); }

} // extern "C"
