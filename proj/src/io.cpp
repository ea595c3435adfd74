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

#include "subcarnot/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace subcarnot {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Coeff parse_coeff(const std::string& tok) {
  try {
    return Coeff(Rational::parse(tok));
  } catch (const ParseError&) {
    // fall back to plain double for exotic notations (e.g. exponents)
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw;
    return Coeff(v);
  }
}

std::vector<double> json_vec(const Vec& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

AlgebraSpec parse_algebra_spec(const std::string& text) {
  AlgebraSpec spec;
  bool saw_step = false, saw_dims = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto fail = [&](const std::string& why) {
      throw ParseError("algebra spec line " + std::to_string(lineno) + ": " + why);
    };
    if (key == "step") {
      if (!(ls >> spec.step)) fail("expected an integer step");
      saw_step = true;
    } else if (key == "layer_dims") {
      int d;
      while (ls >> d) spec.layer_dims.push_back(d);
      if (spec.layer_dims.empty()) fail("expected at least one layer dimension");
      saw_dims = true;
    } else if (key == "labels") {
      std::string lab;
      while (ls >> lab) spec.labels.push_back(lab);
    } else if (key == "bracket") {
      std::string rest;
      std::getline(ls, rest);
      rest = trim(rest);
      // [i,j] -> {k: c, k2: c2}
      const auto arrow = rest.find("->");
      if (arrow == std::string::npos) fail("expected '->'");
      std::string lhs = trim(rest.substr(0, arrow));
      std::string rhs = trim(rest.substr(arrow + 2));
      if (lhs.size() < 2 || lhs.front() != '[' || lhs.back() != ']') fail("expected [i,j]");
      if (rhs.size() < 2 || rhs.front() != '{' || rhs.back() != '}') fail("expected {k: coeff}");
      BracketEntry entry;
      {
        std::istringstream ij(lhs.substr(1, lhs.size() - 2));
        char comma = 0;
        if (!(ij >> entry.i >> comma >> entry.j) || comma != ',') fail("bad index pair");
        entry.i -= 1;
        entry.j -= 1;
      }
      std::string body = rhs.substr(1, rhs.size() - 2);
      std::istringstream terms(body);
      std::string term;
      while (std::getline(terms, term, ',')) {
        term = trim(term);
        if (term.empty()) continue;
        const auto colon = term.find(':');
        if (colon == std::string::npos) fail("expected 'k: coeff'");
        int k = 0;
        try {
          k = std::stoi(trim(term.substr(0, colon)));
        } catch (const std::exception&) {
          fail("bad basis index in term");
        }
        try {
          entry.terms.emplace_back(k - 1, parse_coeff(trim(term.substr(colon + 1))));
        } catch (const std::exception&) {
          fail("bad coefficient '" + trim(term.substr(colon + 1)) + "'");
        }
      }
      if (entry.terms.empty()) fail("bracket entry with no terms");
      spec.brackets.push_back(std::move(entry));
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!saw_step) throw ParseError("algebra spec: missing 'step'");
  if (!saw_dims) throw ParseError("algebra spec: missing 'layer_dims'");
  if (spec.step < 1) throw ParseError("algebra spec: step must be >= 1");
  if (static_cast<int>(spec.layer_dims.size()) != spec.step)
    throw ParseError("algebra spec: layer_dims must list one dimension per layer");
  int n = 0;
  for (int d : spec.layer_dims) {
    if (d < 1) throw ParseError("algebra spec: layer dimensions must be positive");
    n += d;
  }
  for (const auto& e : spec.brackets)
    for (const auto& [k, c] : e.terms) {
      (void)c;
      if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n || k < 0 || k >= n)
        throw ParseError("algebra spec: basis index out of range");
    }
  if (!spec.labels.empty() && static_cast<int>(spec.labels.size()) != n)
    throw ParseError("algebra spec: labels must cover all basis elements");
  return spec;
}

std::string format_algebra_spec(const AlgebraSpec& spec) {
  std::ostringstream out;
  out << "step " << spec.step << "\n";
  out << "layer_dims";
  for (int d : spec.layer_dims) out << ' ' << d;
  out << "\n";
  for (const auto& e : spec.brackets) {
    out << "bracket [" << e.i + 1 << "," << e.j + 1 << "] -> {";
    bool first = true;
    for (const auto& [k, c] : e.terms) {
      if (!first) out << ", ";
      first = false;
      out << k + 1 << ": " << (c.exact ? c.rat.str() : fmt17(c.val));
    }
    out << "}\n";
  }
  if (!spec.labels.empty()) {
    out << "labels";
    for (const auto& l : spec.labels) out << ' ' << l;
    out << "\n";
  }
  return out.str();
}

CurveCsv read_curve_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("curve csv: empty input");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(trim(cell));
  }
  if (header.empty() || header[0] != "t") throw ParseError("curve csv: first column must be 't'");
  const int k = static_cast<int>(header.size()) - 1;
  if (k < 1) throw ParseError("curve csv: need at least one coordinate column");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream rs(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(rs, cell, ',')) {
      try {
        row.push_back(std::stod(trim(cell)));
      } catch (const std::exception&) {
        throw ParseError("curve csv line " + std::to_string(lineno) + ": bad number '" +
                         trim(cell) + "'");
      }
    }
    if (static_cast<int>(row.size()) != k + 1)
      throw ParseError("curve csv line " + std::to_string(lineno) + ": expected " +
                       std::to_string(k + 1) + " cells");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ParseError("curve csv: need at least two rows");
  CurveCsv csv;
  const int m = static_cast<int>(rows.size());
  csv.t.resize(m);
  csv.samples.resize(k, m);
  for (int r = 0; r < m; ++r) {
    csv.t(r) = rows[r][0];
    for (int c = 0; c < k; ++c) csv.samples(c, r) = rows[r][c + 1];
    if (r > 0 && csv.t(r) <= csv.t(r - 1))
      throw ParseError("curve csv: t column must be strictly increasing");
  }
  return csv;
}

std::string write_curve_csv(const Mat& samples) {
  std::ostringstream out;
  out << "t";
  for (int c = 0; c < samples.rows(); ++c) out << ",x" << c + 1;
  out << "\n";
  const int N = static_cast<int>(samples.cols()) - 1;
  for (int j = 0; j <= N; ++j) {
    out << fmt17(static_cast<double>(j) / N);
    for (int c = 0; c < samples.rows(); ++c) out << ',' << fmt17(samples(c, j));
    out << "\n";
  }
  return out.str();
}

std::string write_path_csv(const HorizontalPath& path) {
  const auto& a = *path.grid.algebra;
  std::ostringstream out;
  out << "t";
  for (int i = 0; i < a.dim(); ++i) out << ",x" << i + 1;
  out << "\n";
  const int N = path.grid.segments();
  for (int j = 0; j <= N; ++j) {
    out << fmt17(static_cast<double>(j) / N);
    for (int i = 0; i < a.dim(); ++i) out << ',' << fmt17(path.nodes(i, j));
    out << "\n";
  }
  return out.str();
}

Json validation_to_json(const ValidationReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"axiom", e.axiom},
                       {"pass", e.pass},
                       {"worst_violation", e.worst_violation},
                       {"where", e.where},
                       {"detail", e.detail}});
  }
  return Json{{"pass", report.all_pass()}, {"axioms", entries}};
}

Json algebra_to_json(const GradedAlgebra& a) {
  Json j{{"step", a.step()}, {"dim", a.dim()}};
  std::vector<int> dims;
  for (int i = 1; i <= a.num_layers(); ++i) dims.push_back(a.layer_dim(i));
  j["layer_dims"] = dims;
  if (!a.name().empty()) j["name"] = a.name();
  if (!a.labels().empty()) j["labels"] = a.labels();
  return j;
}

Json jet_to_json(const EndpointJet& jet) {
  const CorankInfo ci = corank(jet);
  return Json{{"value", json_vec(jet.value)},
              {"singular_values", json_vec(jet.singular_values)},
              {"rank", ci.rank},
              {"corank", ci.corank},
              {"corank_augmented", ci.corank_augmented},
              {"kernel_dim", ci.kernel_dim},
              {"near_singular", jet.near_singular},
              {"dofs", jet.dofs()}};
}

Json report_to_json(const ExtremalReport& rep) {
  Json abn = Json::array();
  for (const auto& v : rep.abnormal_basis) abn.push_back(json_vec(v));
  return Json{{"corank", rep.corank},
              {"corank_augmented", rep.corank_augmented},
              {"singular", rep.singular},
              {"abnormal_basis", abn},
              {"normal_multiplier", json_vec(rep.normal_multiplier)},
              {"normal_residual", rep.normal_residual},
              {"goh", {{"pass", rep.goh_pass}, {"violation", rep.goh_violation}}},
              {"legendre",
               {{"pass", rep.legendre_pass},
                {"sign", rep.legendre_sign},
                {"min_eig_profile", json_vec(rep.legendre_profile)}}},
              {"morse_index", rep.morse},
              {"notes", rep.notes}};
}

Json chain_to_json(const ReductionChain& chain) {
  Json stages = Json::array();
  for (const auto& s : chain.stages) {
    Json w = Json::array();
    for (int c = 0; c < s.W.cols(); ++c) w.push_back(json_vec(s.W.col(c)));
    stages.push_back({{"layer_dims", s.layer_dims},
                      {"W", w},
                      {"dim_W", static_cast<int>(s.W.cols())},
                      {"corank", s.corank},
                      {"note", s.note}});
  }
  return Json{{"stages", stages},
              {"terminal", chain.terminal},
              {"verdict", chain.verdict},
              {"multiplier", json_vec(chain.multiplier)},
              {"certificate_residual", chain.certificate_residual}};
}

Json solve_to_json(const SolveResult& res) {
  return Json{{"energy", res.energy},
              {"endpoint_residual", res.endpoint_residual},
              {"multiplier", json_vec(res.multiplier)},
              {"stationarity", res.stationarity},
              {"status", res.status == SolveStatus::converged ? "converged" : "failed"},
              {"N", res.grid.segments()}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace subcarnot
