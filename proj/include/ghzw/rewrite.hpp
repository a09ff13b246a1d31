// Copyright 2026 The ghzw Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzw/diagram.hpp"
#include "ghzw/eval.hpp"
#include "ghzw/tensor.hpp"

namespace ghzw {

class RewriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named equation between two diagrams with matching boundary arities.
/// Applying the rule left-to-right multiplies the denotation by `scalar`:
/// eval(rhs) == scalar * eval(lhs) on the canonical pair.
struct RewriteRule {
  std::string name;
  Diagram lhs;
  Diagram rhs;
  cplx scalar = cplx(1.0, 0.0);
  bool bidirectional = true;
};

/// Swaps the two sides of a bidirectional rule and inverts its scalar.
RewriteRule reversed(const RewriteRule& rule);

/// The built-in catalog. Every rule is semantically validated against the
/// canonical pair the first time the catalog is requested; a failed check
/// aborts with RewriteError since it would mean the catalog itself is wrong.
const std::vector<RewriteRule>& builtin_rules();

/// Looks up a catalog rule by name.
const RewriteRule& builtin_rule(const std::string& name);

/// An occurrence of a rule's left side inside a host diagram.
///
/// `node_map` sends pattern node ids to host node ids, `wire_map` sends
/// pattern wire indices to host wire indices. Both refer to the host diagram
/// the match was found in; applying the rule to a different or modified host
/// fails with a stale-embedding error.
struct Embedding {
  std::map<int, int> node_map;
  std::vector<int> wire_map;
};

/// Enumerates all embeddings of `rule.lhs` in `host`, in a deterministic
/// order. Matching is exact on node kinds and port order; symmetric uses of
/// mult/comult are covered by the comm/cocomm rules rather than by the
/// matcher.
std::vector<Embedding> find_matches(const RewriteRule& rule, const Diagram& host);

/// Replaces the matched occurrence of `rule.lhs` by `rule.rhs`, preserving
/// the host boundary. Throws RewriteError if the embedding does not fit the
/// host ("stale embedding") or if the splice would produce an ill-formed
/// diagram.
Diagram apply(const RewriteRule& rule, const Diagram& host, const Embedding& embedding);

enum class AlgebraKind { scfa, acfa, cfa };

std::string algebra_kind_name(AlgebraKind kind);
AlgebraKind algebra_kind_from_name(const std::string& name);

/// Normal form of one connected component of a single-algebra diagram.
///
/// spider(n, m) covers every commutative-Frobenius component; `loops` is
/// meaningful only under AlgebraKind::cfa, where loops cannot be erased.
/// The acfa-only variants record the collapse of looped components:
/// acfa_loop_product denotes (1/dim)^inverse_dim_power *
/// lolli^(tensor lollis_out) . cololli^(tensor colollis_in), acfa_zero the
/// zero map, and scalar a closed component's numeric value.
struct NormalForm {
  enum class Variant { spider, acfa_zero, acfa_loop_product, scalar };

  Variant variant = Variant::spider;
  int n = 0;
  int m = 0;
  int loops = 0;
  int lollis_out = 0;
  int colollis_in = 0;
  int inverse_dim_power = 0;
  cplx value = cplx(0.0, 0.0);

  static NormalForm spider(int n, int m, int loops = 0);
  static NormalForm zero(int n, int m);
  static NormalForm loop_product(int lollis_out, int colollis_in, int inverse_dim_power);
  static NormalForm closed_scalar(cplx value);

  bool operator==(const NormalForm& other) const;
  std::string str() const;
};

/// Result of normalizing a single-algebra diagram: one normal form per
/// connected component (in split_components order) and a canonical diagram
/// with the same boundary that evaluates to the same tensor.
struct NormalizeResult {
  std::vector<NormalForm> components;
  Diagram canonical;
};

/// Rewrites a diagram whose generators all belong to one algebra to normal
/// form. Ticks, variables, and mixed-algebra diagrams are rejected. `kind`
/// selects which structural laws may be used: scfa erases loops, acfa
/// collapses them, and cfa merely counts them.
NormalizeResult normalize_single(const Diagram& d, AlgebraKind kind);

/// Decides semantic equality of two single-algebra diagrams over the same
/// algebra by comparing canonical forms component-by-component. Under
/// AlgebraKind::cfa the comparison is descriptor-level, i.e. equality that
/// holds for every commutative Frobenius algebra.
bool decide_equal(const Diagram& a, const Diagram& b, AlgebraKind kind,
                  const Tolerance& tol = Tolerance{});

enum class DiagramMix { ghz_only, w_only, mixed };

/// Draws a pseudo-random well-formed diagram over the canonical pair.
/// ghz_only / w_only restrict to a single algebra without ticks, which makes
/// the output suitable for normalize_single; mixed adds ticks and both
/// algebras. The same seed always yields the same diagram.
Diagram random_diagram(std::uint64_t seed, int max_nodes, DiagramMix mix,
                       bool require_connected = false);

struct SoundnessReport {
  int trials = 0;
  int applications = 0;
  double max_residual = 0.0;
  bool pass = false;
};

/// Applies random catalog rules (both directions) at random sites of random
/// diagrams and checks that the evaluation changes exactly by the declared
/// scalar. Trials where no rule matches are counted but contribute no
/// application.
SoundnessReport soundness_harness(std::uint64_t seed, int trials,
                                  DiagramMix mix = DiagramMix::mixed,
                                  const Tolerance& tol = Tolerance{});

}  // namespace ghzw
