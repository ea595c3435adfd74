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

// Command-line surface over the C API. Exit codes: 0 success, 1 check
// failure (validation/classification/solve), 2 malformed input.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "subcarnot.h"

namespace {

struct ScString {
  char* s = nullptr;
  ~ScString() { sc_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

struct AlgebraHandle {
  sc_algebra* a = nullptr;
  ~AlgebraHandle() { sc_algebra_free(a); }
};

struct GridHandle {
  sc_grid* g = nullptr;
  ~GridHandle() { sc_grid_free(g); }
};

[[noreturn]] void die(int code, const std::string& msg) {
  std::cerr << "subcarnot: " << msg << std::endl;
  std::exit(code);
}

int exit_code_for(int rc) {
  switch (rc) {
    case SC_OK:
      return 0;
    case SC_ERR_VALIDATION:
    case SC_ERR_INTERNAL:
      return 1;
    default:
      return 2;
  }
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(2, "cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) die(2, "cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      die(2, "bad number '" + cell + "' in vector argument");
    }
  }
  if (out.empty()) die(2, "empty vector argument");
  return out;
}

struct CommonOpts {
  std::string std_name;
  std::string spec_path;
  int m = 1;
  int k = 2;
  int step = 3;
  std::string curve;
  int N = 256;
  double tol = 0.0;
  std::uint32_t seed = 0;
  std::string out_dir = ".";
};

void add_algebra_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--std", o.std_name, "standard algebra: heisenberg | engel | free");
  cmd->add_option("--spec", o.spec_path, "algebra spec file");
  cmd->add_option("--m", o.m, "heisenberg parameter");
  cmd->add_option("--k", o.k, "free algebra generators");
  cmd->add_option("--step", o.step, "free algebra step");
}

AlgebraHandle make_algebra(const CommonOpts& o) {
  AlgebraHandle h;
  int rc = SC_ERR_USAGE;
  if (!o.spec_path.empty()) {
    rc = sc_algebra_parse(read_file_or_die(o.spec_path).c_str(), &h.a);
  } else if (o.std_name == "heisenberg") {
    rc = sc_algebra_heisenberg(o.m, &h.a);
  } else if (o.std_name == "engel") {
    rc = sc_algebra_engel(&h.a);
  } else if (o.std_name == "free") {
    rc = sc_algebra_free_carnot(o.k, o.step, &h.a);
  } else {
    die(2, "need --std {heisenberg|engel|free} or --spec <file>");
  }
  if (rc != SC_OK) die(exit_code_for(rc) == 0 ? 2 : exit_code_for(rc), sc_last_error());
  return h;
}

GridHandle make_curve(const AlgebraHandle& a, const CommonOpts& o) {
  if (o.curve.empty()) die(2, "need --curve <file|line:v1,v2,...>");
  GridHandle g;
  int rc;
  if (o.curve.rfind("line:", 0) == 0) {
    const auto v = parse_vector(o.curve.substr(5));
    rc = sc_grid_line(a.a, v.data(), static_cast<int>(v.size()), o.N, &g.g);
  } else {
    rc = sc_grid_from_csv(a.a, read_file_or_die(o.curve).c_str(), &g.g);
  }
  if (rc != SC_OK) die(2, sc_last_error());
  return g;
}

std::string artifact_path(const CommonOpts& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  return (std::filesystem::path(o.out_dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for sub-Riemannian geodesics on Carnot groups of step <= 3"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string target_str, lambda_str;
  double T = 1.0;

  auto* c_algebra = app.add_subcommand("algebra", "construct or validate an algebra");
  add_algebra_flags(c_algebra, o);
  c_algebra->add_option("--out", o.out_dir, "artifact directory");

  auto* c_lift = app.add_subcommand("lift", "horizontally lift a first-layer curve");
  add_algebra_flags(c_lift, o);
  c_lift->add_option("--curve", o.curve, "curve CSV file or line:<v>");
  c_lift->add_option("--N", o.N, "grid segments for line: curves");
  c_lift->add_option("--out", o.out_dir, "artifact directory");

  auto* c_endpoint = app.add_subcommand("endpoint", "end-point jet summary of a curve");
  add_algebra_flags(c_endpoint, o);
  c_endpoint->add_option("--curve", o.curve, "curve CSV file or line:<v>");
  c_endpoint->add_option("--N", o.N, "grid segments for line: curves");
  c_endpoint->add_option("--out", o.out_dir, "artifact directory");

  auto* c_geodesic = app.add_subcommand("geodesic", "solve the constrained geodesic problem");
  add_algebra_flags(c_geodesic, o);
  c_geodesic->add_option("--target", target_str, "target point, comma-separated coordinates")
      ->required();
  c_geodesic->add_option("--N", o.N, "grid segments");
  c_geodesic->add_option("--tol", o.tol, "constraint tolerance");
  c_geodesic->add_option("--seed", o.seed, "multistart seed");
  c_geodesic->add_option("--out", o.out_dir, "artifact directory");

  auto* c_classify = app.add_subcommand("classify", "run the extremal classification pipeline");
  add_algebra_flags(c_classify, o);
  c_classify->add_option("--curve", o.curve, "curve CSV file or line:<v>");
  c_classify->add_option("--N", o.N, "grid segments for line: curves");
  c_classify->add_option("--out", o.out_dir, "artifact directory");

  auto* c_flow = app.add_subcommand("flow", "integrate the normal Hamiltonian flow");
  add_algebra_flags(c_flow, o);
  c_flow->add_option("--lambda0", lambda_str, "initial covector, comma-separated")->required();
  c_flow->add_option("--T", T, "flow time");
  c_flow->add_option("--N", o.N, "integration steps");
  c_flow->add_option("--out", o.out_dir, "artifact directory");

  CLI11_PARSE(app, argc, argv);

  if (c_algebra->parsed()) {
    if (!o.spec_path.empty()) {
      ScString report;
      const int rc = sc_algebra_validate_text(read_file_or_die(o.spec_path).c_str(), &report.s);
      if (rc != SC_OK && rc != SC_ERR_VALIDATION) die(2, sc_last_error());
      std::cout << report.str() << std::endl;
      write_atomic(artifact_path(o, "algebra.json"), report.str());
      return rc == SC_OK ? 0 : 1;
    }
    AlgebraHandle a = make_algebra(o);
    ScString info;
    if (sc_algebra_info(a.a, &info.s) != SC_OK) die(2, sc_last_error());
    std::cout << info.str() << std::endl;
    write_atomic(artifact_path(o, "algebra.json"), info.str());
    return 0;
  }

  if (c_lift->parsed()) {
    AlgebraHandle a = make_algebra(o);
    GridHandle g = make_curve(a, o);
    ScString csv;
    if (sc_lift_csv(g.g, &csv.s) != SC_OK) die(2, sc_last_error());
    write_atomic(artifact_path(o, "lifted.csv"), csv.str());
    std::cout << artifact_path(o, "lifted.csv") << std::endl;
    return 0;
  }

  if (c_endpoint->parsed()) {
    AlgebraHandle a = make_algebra(o);
    GridHandle g = make_curve(a, o);
    ScString json;
    if (sc_endpoint_report(g.g, &json.s) != SC_OK) die(2, sc_last_error());
    std::cout << json.str() << std::endl;
    write_atomic(artifact_path(o, "endpoint.json"), json.str());
    return 0;
  }

  if (c_geodesic->parsed()) {
    AlgebraHandle a = make_algebra(o);
    const auto target = parse_vector(target_str);
    ScString json, csv;
    const int rc = sc_solve(a.a, target.data(), static_cast<int>(target.size()), o.N, o.seed,
                            o.tol, &json.s, &csv.s);
    if (rc != SC_OK && rc != SC_ERR_INTERNAL) die(2, sc_last_error());
    std::cout << json.str() << std::endl;
    write_atomic(artifact_path(o, "geodesic.json"), json.str());
    write_atomic(artifact_path(o, "geodesic.csv"), csv.str());
    return rc == SC_OK ? 0 : 1;
  }

  if (c_classify->parsed()) {
    AlgebraHandle a = make_algebra(o);
    GridHandle g = make_curve(a, o);
    ScString report, chain;
    if (sc_classify(g.g, &report.s, &chain.s) != SC_OK) die(2, sc_last_error());
    const std::string combined =
        "{\n\"report\": " + report.str() + ",\n\"chain\": " + chain.str() + "\n}\n";
    std::cout << combined << std::endl;
    write_atomic(artifact_path(o, "classify.json"), combined);
    // verdict drives the exit code
    return chain.str().find("\"verdict\": \"normal\"") != std::string::npos ? 0 : 1;
  }

  if (c_flow->parsed()) {
    AlgebraHandle a = make_algebra(o);
    const auto lam = parse_vector(lambda_str);
    ScString csv;
    if (sc_flow(a.a, lam.data(), static_cast<int>(lam.size()), T, o.N, &csv.s) != SC_OK)
      die(2, sc_last_error());
    write_atomic(artifact_path(o, "flow.csv"), csv.str());
    std::cout << artifact_path(o, "flow.csv") << std::endl;
    return 0;
  }

  return 2;
}
