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

#ifndef SUBCARNOT_IO_HPP
#define SUBCARNOT_IO_HPP

#include <json.hpp>
#include <string>

#include "subcarnot/classify.hpp"
#include "subcarnot/solver.hpp"

namespace subcarnot {

using Json = nlohmann::json;

/// Algebra spec text format. Line-oriented, '#' comments:
///   step 3
///   layer_dims 2 1 1
///   bracket [1,2] -> {3: 1}
///   bracket [1,3] -> {4: 1/2, 5: -0.25}
///   labels e1 e2 e3 e4
/// Indices are 1-based global basis indices; coefficients are rationals
/// "p/q" or decimals.
AlgebraSpec parse_algebra_spec(const std::string& text);
std::string format_algebra_spec(const AlgebraSpec& spec);

/// Curve CSV: header "t,x1,...,xk", one row per node, uniform t grid.
struct CurveCsv {
  Vec t;
  Mat samples;  // k x rows
};
CurveCsv read_curve_csv(const std::string& text);

/// First-layer node samples with a uniform t column on [0,1].
std::string write_curve_csv(const Mat& samples);
/// All layers of a lifted path, columns labelled by the algebra's layers.
std::string write_path_csv(const HorizontalPath& path);

Json validation_to_json(const ValidationReport& report);
Json algebra_to_json(const GradedAlgebra& a);
Json jet_to_json(const EndpointJet& jet);
Json report_to_json(const ExtremalReport& rep);
Json chain_to_json(const ReductionChain& chain);
Json solve_to_json(const SolveResult& res);

std::string read_file(const std::string& path);           // throws ParseError if unreadable
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace subcarnot

#endif  // SUBCARNOT_IO_HPP
