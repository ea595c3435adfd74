/* Copyright 2026 The subcarnot authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C surface of the subcarnot library: opaque handles, integer error codes,
 * JSON/CSV string outputs. Strings returned through char** are heap
 * allocated; release them with sc_string_free. On any nonzero return,
 * sc_last_error() describes the failure (thread local).
 */

#ifndef SUBCARNOT_H
#define SUBCARNOT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sc_algebra sc_algebra;
typedef struct sc_grid sc_grid;

enum {
  SC_OK = 0,
  SC_ERR_USAGE = 1,
  SC_ERR_PARSE = 2,
  SC_ERR_VALIDATION = 3,
  SC_ERR_UNSUPPORTED = 4,
  SC_ERR_INTERNAL = 5
};

const char* sc_last_error(void);
void sc_string_free(char* s);

/* --- algebras --------------------------------------------------------- */
int sc_algebra_heisenberg(int m, sc_algebra** out);
int sc_algebra_engel(sc_algebra** out);
int sc_algebra_free_carnot(int k, int step, sc_algebra** out);
/* Parses and validates a spec document (see the io format). */
int sc_algebra_parse(const char* spec_text, sc_algebra** out);
/* Always produces a validation report (JSON), even for invalid specs;
 * returns SC_ERR_VALIDATION when any axiom fails. */
int sc_algebra_validate_text(const char* spec_text, char** report_json);
void sc_algebra_free(sc_algebra* a);
int sc_algebra_info(const sc_algebra* a, char** json_out);
int sc_algebra_dim(const sc_algebra* a);
int sc_algebra_layer_dim(const sc_algebra* a, int layer);

/* --- curves ----------------------------------------------------------- */
/* CSV with header t,x1..x{n1}; nodes on a uniform grid. */
int sc_grid_from_csv(const sc_algebra* a, const char* csv_text, sc_grid** out);
/* The line t -> t*v on N segments; v has length n1. */
int sc_grid_line(const sc_algebra* a, const double* v, int len, int N, sc_grid** out);
void sc_grid_free(sc_grid* g);
int sc_grid_segments(const sc_grid* g);

/* --- operations ------------------------------------------------------- */
/* Horizontal lift; CSV with all layer columns. */
int sc_lift_csv(const sc_grid* g, char** csv_out);
/* End-point jet summary (value, singular values, coranks). */
int sc_endpoint_report(const sc_grid* g, char** json_out);
/* Extremal report + reduction chain for a curve based at the identity. */
int sc_classify(const sc_grid* g, char** report_json, char** chain_json);
/* Geodesic to target (length n); emits a result JSON and the curve CSV.
 * tol <= 0 selects the default constraint tolerance. */
int sc_solve(const sc_algebra* a, const double* target, int len, int N, uint32_t seed,
             double tol, char** json_out, char** curve_csv);
/* Normal Hamiltonian flow trajectory: t, coordinates, covector, H. */
int sc_flow(const sc_algebra* a, const double* lambda0, int len, double T, int steps,
            char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* SUBCARNOT_H */
