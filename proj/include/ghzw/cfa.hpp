// Copyright 2026 The ghzw-calculus Authors
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
#include <string>
#include <vector>

#include "ghzw/eval.hpp"
#include "ghzw/tensor.hpp"

namespace ghzw {

struct CfaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Commutative Frobenius algebra presented by its four structure tensors.
struct CFA {
  std::string name;
  int dim = 2;
  Tensor mult;    // 2 -> 1
  Tensor unit;    // 0 -> 1
  Tensor comult;  // 1 -> 2
  Tensor counit;  // 1 -> 0
};

// The canonical special pair: mult copies through the computational basis,
// unit is |0> + |1>.
CFA ghz_algebra();

// The canonical anti-special pair: mult is |1><11| + |0><01| + |0><10|,
// unit is |1>.
CFA w_algebra();

// Structure maps readable off a CFA without further choices.
struct DerivedData {
  Tensor cap;      // 2 -> 0, counit . mult
  Tensor cup;      // 0 -> 2, comult . unit
  Tensor lolli;    // 0 -> 1, partial trace of comult
  Tensor cololli;  // 1 -> 0, partial trace of mult
  cplx circle;     // closed loop, equals dim
  std::vector<Tensor> copiable_points;
};

DerivedData derive(const CFA& c, const Tolerance& tol = {},
                   std::uint64_t seed = 1);

// Evaluator bridge.
AlgebraSemantics semantics_of(const CFA& c);
// Table holding "ghz" and "w" with their canonical tensors.
SemanticsTable canonical_semantics();

struct AxiomCheck {
  std::string axiom;
  double residual = 0.0;
  bool pass = false;
};

struct CfaReport {
  std::vector<AxiomCheck> checks;
  double max_residual = 0.0;
  bool pass = false;
};

// Residual per axiom: (co)associativity, left/right (co)unit, the two
// Frobenius identities against comult . mult, commutativity and
// cocommutativity.  Passes iff every residual stays below tol.abs_eps.
CfaReport check_cfa(const CFA& c, const Tolerance& tol = {});

// mult . comult = id within tol.
bool check_special(const CFA& c, const Tolerance& tol = {});

// dim * (mult . comult) = lolli . cololli within tol, and the loop trace
// Tr(mult . comult) vanishes.
bool check_antispecial(const CFA& c, const Tolerance& tol = {});

// The unique connected n -> m tree built from left combs of mults under
// left combs of comults; n = 0 closes with unit, m = 0 with counit.
Tensor spider(const CFA& c, int n, int m);

// Partial trace of the last subsystem of m taken with the algebra's cap and
// cup; agrees with standard_partial_trace on the same legs for every CFA.
Tensor cfa_partial_trace(const CFA& c, const Tensor& m);

// All nonzero x with comult . x = x (x) x, for dim 2.  Found as
// eigenvectors of left multiplication by a seeded generic element, then
// rescaled so the copy equation holds exactly.  A special algebra must
// yield two independent points; fewer is reported as an error.
std::vector<Tensor> copiable_points(const CFA& c, const Tolerance& tol = {},
                                    std::uint64_t seed = 1);

struct FrobeniusStateData {
  Tensor psi;  // 0 -> 3
  Tensor phi;  // 2 -> 0
  Tensor xi;   // 1 -> 0
};

// (spider(c,0,3), cap, counit).
FrobeniusStateData state_from_cfa(const CFA& c);

// Rebuild a CFA from a tripartite state and a distinguished effect.  The
// pairing (xi (x) 1 (x) 1) . psi must be invertible; its compact partner
// supplies the contractions defining mult and comult, eps = xi, and the
// unit closes the pairing with eps.
CFA cfa_from_state(const Tensor& psi, const Tensor& xi,
                   const Tolerance& tol = {});

enum class CfaClass { ghz, w };
std::string cfa_class_name(CfaClass c);

struct GhzNormalizeResult {
  Tensor L;     // 1 -> 1, invertible
  cplx lambda;  // psi = lambda * (L (x) L (x) L) |ghz3>
  double residual = 0.0;
};

// Symmetric GHZ-class states: recovers the two cubing directions through
// the kernel of the 2 x 3 catalecticant of the associated binary cubic.
GhzNormalizeResult ghz_normalize(const Tensor& psi, const Tolerance& tol = {});

// Symmetric W-class states: the catalecticant kernel has a double root u;
// the companion direction v is the least-squares solution of
// psi = lambda (|uuv> + |uvu> + |vuu>), and L maps |0>,|1> to u,v.
GhzNormalizeResult w_uniform_normalize(const Tensor& psi,
                                       const Tolerance& tol = {});

struct WNormalizeResult {
  Tensor L1, L2, L3;  // (L1 (x) L2 (x) L3) spider(c,0,3) is prop. to |w3>
  cplx lambda;        // the proportionality scalar
  double residual = 0.0;
};

// W-class algebras: builds the three local maps of the constructive
// classification from the loop state, its orthocomplement and the
// coefficients of comult in that basis.
WNormalizeResult w_normalize(const CFA& c, const Tolerance& tol = {});

struct ClassifyCfaResult {
  CfaClass cls = CfaClass::ghz;
  Tensor witness;   // 1 -> 1 local map, old cap against new cup
  CFA normal_form;  // passes check_special or check_antispecial
};

// Classifies spider(c,0,3), rebuilds the algebra from that state with the
// class-appropriate effect, and returns the witnessing local map.
ClassifyCfaResult classify_cfa(const CFA& c, const Tolerance& tol = {});

// Completes an associative unital pair on C^2 to a full CFA by locating
// either its two idempotent characters or its nilpotent direction and
// transporting the matching canonical algebra.
CFA extend_to_cfa(const Tensor& mult, const Tensor& unit,
                  const Tolerance& tol = {});

// Simultaneous basis change by an invertible single-leg map: mult becomes
// L . mult . (Linv (x) Linv) and the rest transforms accordingly.  All CFA
// axioms and both loop properties are preserved.
CFA conjugate_cfa(const CFA& c, const Tensor& L, const Tensor& Linv);

}  // namespace ghzw
