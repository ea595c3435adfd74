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

#ifndef SUBCARNOT_ALGEBRA_HPP
#define SUBCARNOT_ALGEBRA_HPP

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subcarnot/errors.hpp"
#include "subcarnot/rational.hpp"

namespace subcarnot {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// One bracket coefficient: exact rational when available, double otherwise.
struct Coeff {
  bool exact = true;
  Rational rat;
  double val = 0.0;

  Coeff() = default;
  Coeff(Rational r) : exact(true), rat(r), val(r.to_double()) {}  // NOLINT
  Coeff(double d) : exact(false), val(d) {}                       // NOLINT
};

/// A bracket table entry [e_i, e_j] = sum_k terms[k] * e_k, 0-based indices.
struct BracketEntry {
  int i = 0;
  int j = 0;
  std::vector<std::pair<int, Coeff>> terms;
};

/// Raw description of a graded algebra, as read from a spec file or produced
/// by a constructor. Entries with only one orientation given imply the other
/// by antisymmetry; entries given in both orientations are kept verbatim so
/// that validate() can detect inconsistent input.
struct AlgebraSpec {
  int step = 1;
  std::vector<int> layer_dims;
  std::vector<BracketEntry> brackets;
  std::vector<std::string> labels;  // optional, size n when present
};

struct AxiomResult {
  std::string axiom;  // "antisymmetry" | "jacobi" | "grading" | "generation"
  bool pass = true;
  double worst_violation = 0.0;
  std::array<int, 3> where = {0, 0, 0};  // offending indices, 1-based; layer in [0]
  std::string detail;
};

struct ValidationReport {
  std::vector<AxiomResult> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  std::string summary() const;
};

/// Thrown by checked constructors when the given spec fails validation.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, ValidationReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class GradedAlgebra;
using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

/// A graded (Carnot) Lie algebra of step <= 3, held by structure constants.
/// Immutable after construction; all member functions are const and
/// thread-safe.
class GradedAlgebra {
 public:
  explicit GradedAlgebra(AlgebraSpec spec);

  int step() const { return spec_.step; }
  int dim() const { return n_; }
  int num_layers() const { return static_cast<int>(spec_.layer_dims.size()); }
  /// layer index is 1-based; layer_dim(i) = 0 for i > step.
  int layer_dim(int layer) const {
    return (layer >= 1 && layer <= num_layers()) ? spec_.layer_dims[layer - 1] : 0;
  }
  int layer_offset(int layer) const { return offsets_[layer - 1]; }
  /// 1-based layer of a 0-based basis index.
  int layer_of(int basis_index) const { return layer_of_[basis_index]; }
  const std::vector<std::string>& labels() const { return spec_.labels; }
  const AlgebraSpec& spec() const { return spec_; }
  bool exact() const { return exact_; }

  /// [x, y] for coordinate vectors of length n.
  Vec bracket(const Vec& x, const Vec& y) const;
  /// ad(e)^m (f); m = 0 returns f.
  Vec iterated_bracket(const Vec& e, const Vec& f, int m) const;
  /// Matrix A with A*x = [y, x].
  Mat ad_matrix(const Vec& y) const;
  /// Structure constant c[i][j][k] ([e_i,e_j] = sum_k c e_k), 0-based.
  double c(int i, int j, int k) const;
  /// Sparse terms of [e_i, e_j] (0-based), antisymmetry-implied when only the
  /// opposite orientation was specified.
  const std::vector<std::pair<int, double>>& basis_bracket(int i, int j) const {
    return pair_terms_[static_cast<std::size_t>(i) * n_ + j];
  }

  /// Zero-padded projection onto layer i (result has length n).
  Vec project_layer(const Vec& x, int layer) const;
  /// The coordinate block of layer i, as a dense copy of length n_i.
  Vec layer_block(const Vec& x, int layer) const;

  ValidationReport validate() const;

  std::string name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  AlgebraSpec spec_;
  int n_ = 0;
  std::vector<int> offsets_;   // per layer, 0-based start
  std::vector<int> layer_of_;  // per basis index
  bool exact_ = true;
  std::string name_;
  // pair_terms_[i*n+j]: resolved double terms of [e_i, e_j].
  std::vector<std::vector<std::pair<int, double>>> pair_terms_;
  // exact mirror, only filled when exact_ is true
  std::vector<std::vector<std::pair<int, Rational>>> pair_terms_exact_;

  friend AlgebraPtr from_spec_unchecked(AlgebraSpec spec);
};

/// Heisenberg algebra H^m: layers [2m, 1], [e_i, f_i] = g.
AlgebraPtr heisenberg(int m);
/// Engel algebra: layers [2, 1, 1], [e1,e2]=e3, [e1,e3]=e4.
AlgebraPtr engel();
/// Free Carnot algebra on k generators, step r <= 3 (Witt dimensions).
AlgebraPtr free_carnot(int k, int r);
/// Custom algebra; throws ValidationError if the spec fails any axiom.
AlgebraPtr custom(AlgebraSpec spec);
/// Builds without validating (used to produce validation reports for bad
/// input).
AlgebraPtr from_spec_unchecked(AlgebraSpec spec);

/// Element of the algebra in basis coordinates.
struct AlgebraVector {
  AlgebraPtr algebra;
  Vec coords;
};

/// Element of the dual, acting by the standard pairing.
struct Covector {
  AlgebraPtr algebra;
  Vec coords;

  double pair(const Vec& x) const { return coords.dot(x); }
};

AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y);
AlgebraVector iterated_bracket(const AlgebraVector& e, const AlgebraVector& f, int m);

struct GeneratedSubalgebra {
  AlgebraPtr algebra;
  Mat embedding;  // n_parent x n_sub, orthonormal columns, block per layer
};

/// Carnot subalgebra generated by first-layer vectors W (Example-style
/// construction W^1 = span W, W^i = [W^1, W^{i-1}]).
GeneratedSubalgebra subalgebra_generated(const AlgebraPtr& a, const std::vector<Vec>& W);

}  // namespace subcarnot

#endif  // SUBCARNOT_ALGEBRA_HPP
