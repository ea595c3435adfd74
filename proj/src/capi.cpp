// Copyright 2026 The subcarnot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subcarnot.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "subcarnot/io.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
int guarded(F&& f) {
  using namespace subcarnot;
  try {
    return f();
  } catch (const ValidationError& e) {
    g_last_error = e.what();
    return SC_ERR_VALIDATION;
  } catch (const UsageError& e) {
    g_last_error = e.what();
    return SC_ERR_USAGE;
  } catch (const ParseError& e) {
    g_last_error = e.what();
    return SC_ERR_PARSE;
  } catch (const UnsupportedError& e) {
    g_last_error = e.what();
    return SC_ERR_UNSUPPORTED;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SC_ERR_INTERNAL;
  }
}

}  // namespace

struct sc_algebra {
  subcarnot::AlgebraPtr ptr;
};

struct sc_grid {
  subcarnot::ControlGrid grid;
};

extern "C" {

const char* sc_last_error(void) { return g_last_error.c_str(); }

void sc_string_free(char* s) { std::free(s); }

int sc_algebra_heisenberg(int m, sc_algebra** out) {
  return guarded([&] {
    *out = new sc_algebra{subcarnot::heisenberg(m)};
    return SC_OK;
  });
}

int sc_algebra_engel(sc_algebra** out) {
  return guarded([&] {
    *out = new sc_algebra{subcarnot::engel()};
    return SC_OK;
  });
}

int sc_algebra_free_carnot(int k, int step, sc_algebra** out) {
  return guarded([&] {
    *out = new sc_algebra{subcarnot::free_carnot(k, step)};
    return SC_OK;
  });
}

int sc_algebra_parse(const char* spec_text, sc_algebra** out) {
  return guarded([&] {
    if (!spec_text || !out) throw subcarnot::UsageError("sc_algebra_parse: null argument");
    *out = new sc_algebra{subcarnot::custom(subcarnot::parse_algebra_spec(spec_text))};
    return SC_OK;
  });
}

int sc_algebra_validate_text(const char* spec_text, char** report_json) {
  return guarded([&] {
    if (!spec_text) throw subcarnot::UsageError("sc_algebra_validate_text: null argument");
    const auto spec = subcarnot::parse_algebra_spec(spec_text);
    const auto a = subcarnot::from_spec_unchecked(spec);
    const auto report = a->validate();
    if (report_json) *report_json = dup_string(subcarnot::validation_to_json(report).dump(2));
    if (!report.all_pass()) {
      g_last_error = report.summary();
      return static_cast<int>(SC_ERR_VALIDATION);
    }
    return static_cast<int>(SC_OK);
  });
}

void sc_algebra_free(sc_algebra* a) { delete a; }

int sc_algebra_info(const sc_algebra* a, char** json_out) {
  return guarded([&] {
    if (!a || !json_out) throw subcarnot::UsageError("sc_algebra_info: null argument");
    auto j = subcarnot::algebra_to_json(*a->ptr);
    j["validation"] = subcarnot::validation_to_json(a->ptr->validate());
    *json_out = dup_string(j.dump(2));
    return SC_OK;
  });
}

int sc_algebra_dim(const sc_algebra* a) { return a ? a->ptr->dim() : -1; }

int sc_algebra_layer_dim(const sc_algebra* a, int layer) {
  return a ? a->ptr->layer_dim(layer) : -1;
}

int sc_grid_from_csv(const sc_algebra* a, const char* csv_text, sc_grid** out) {
  return guarded([&] {
    if (!a || !csv_text || !out) throw subcarnot::UsageError("sc_grid_from_csv: null argument");
    const auto csv = subcarnot::read_curve_csv(csv_text);
    if (csv.samples.rows() != a->ptr->layer_dim(1))
      throw subcarnot::ParseError("curve csv: expected " +
                                  std::to_string(a->ptr->layer_dim(1)) + " coordinate columns");
    *out = new sc_grid{subcarnot::grid_from_nodes(a->ptr, csv.samples)};
    return SC_OK;
  });
}

int sc_grid_line(const sc_algebra* a, const double* v, int len, int N, sc_grid** out) {
  return guarded([&] {
    if (!a || !v || !out) throw subcarnot::UsageError("sc_grid_line: null argument");
    if (len != a->ptr->layer_dim(1))
      throw subcarnot::UsageError("sc_grid_line: direction must have length n1");
    subcarnot::Mat u(len, N);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < len; ++i) u(i, j) = v[i];
    *out = new sc_grid{subcarnot::make_grid(a->ptr, std::move(u))};
    return SC_OK;
  });
}

void sc_grid_free(sc_grid* g) { delete g; }

int sc_grid_segments(const sc_grid* g) { return g ? g->grid.segments() : -1; }

int sc_lift_csv(const sc_grid* g, char** csv_out) {
  return guarded([&] {
    if (!g || !csv_out) throw subcarnot::UsageError("sc_lift_csv: null argument");
    *csv_out = dup_string(subcarnot::write_path_csv(subcarnot::lift(g->grid)));
    return SC_OK;
  });
}

int sc_endpoint_report(const sc_grid* g, char** json_out) {
  return guarded([&] {
    if (!g || !json_out) throw subcarnot::UsageError("sc_endpoint_report: null argument");
    const auto jet = subcarnot::endpoint_jacobian(g->grid);
    *json_out = dup_string(subcarnot::jet_to_json(jet).dump(2));
    return SC_OK;
  });
}

int sc_classify(const sc_grid* g, char** report_json, char** chain_json) {
  return guarded([&] {
    if (!g) throw subcarnot::UsageError("sc_classify: null argument");
    auto [rep, chain] = subcarnot::classify_curve(g->grid.algebra, g->grid);
    if (report_json) *report_json = dup_string(subcarnot::report_to_json(rep).dump(2));
    if (chain_json) *chain_json = dup_string(subcarnot::chain_to_json(chain).dump(2));
    return SC_OK;
  });
}

int sc_solve(const sc_algebra* a, const double* target, int len, int N, uint32_t seed,
             double tol, char** json_out, char** curve_csv) {
  return guarded([&] {
    if (!a || !target) throw subcarnot::UsageError("sc_solve: null argument");
    if (len != a->ptr->dim()) throw subcarnot::UsageError("sc_solve: target must have length n");
    subcarnot::Vec xi(len);
    for (int i = 0; i < len; ++i) xi(i) = target[i];
    subcarnot::SolveOptions opts;
    if (N > 0) opts.N = N;
    if (tol > 0.0) opts.constraint_tol = tol;
    opts.seed = seed;
    const auto res = subcarnot::solve_geodesic(a->ptr, xi, opts);
    if (json_out) *json_out = dup_string(subcarnot::solve_to_json(res).dump(2));
    if (curve_csv) *curve_csv = dup_string(subcarnot::write_curve_csv(res.grid.gamma1_nodes()));
    if (res.status != subcarnot::SolveStatus::converged) {
      g_last_error = "solver did not converge; best iterate reported";
      return static_cast<int>(SC_ERR_INTERNAL);
    }
    return static_cast<int>(SC_OK);
  });
}

int sc_flow(const sc_algebra* a, const double* lambda0, int len, double T, int steps,
            char** csv_out) {
  return guarded([&] {
    if (!a || !lambda0) throw subcarnot::UsageError("sc_flow: null argument");
    if (len != a->ptr->dim()) throw subcarnot::UsageError("sc_flow: lambda0 must have length n");
    subcarnot::Vec lam(len);
    for (int i = 0; i < len; ++i) lam(i) = lambda0[i];
    const auto fr = subcarnot::hamiltonian_flow(
        a->ptr, subcarnot::GroupPoint::identity(a->ptr), lam, T, steps);
    std::string csv = "t";
    const int n = a->ptr->dim();
    for (int i = 0; i < n; ++i) csv += ",x" + std::to_string(i + 1);
    for (int i = 0; i < n; ++i) csv += ",l" + std::to_string(i + 1);
    csv += ",H\n";
    char buf[64];
    for (int j = 0; j <= steps; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", T * j / steps);
      csv += buf;
      for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), ",%.17g", fr.states(i, j));
        csv += buf;
      }
      for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), ",%.17g", fr.covectors(i, j));
        csv += buf;
      }
      std::snprintf(buf, sizeof(buf), ",%.17g\n", fr.hamiltonian(j));
      csv += buf;
    }
    if (csv_out) *csv_out = dup_string(csv);
    return SC_OK;
  });
}

}  // extern "C"
