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
#include <map>
#include <string>
#include <vector>

#include "ghzw/cfa.hpp"
#include "ghzw/diagram.hpp"
#include "ghzw/eval.hpp"

namespace ghzw {

struct PairError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A special algebra (the white structure), an anti-special one (the black
// structure) and the mediating tick map.
struct GhzwPair {
  CFA scfa;
  CFA acfa;
  Tensor tick;  // 1 -> 1, involutive
};

// tick := (cap_black (x) 1) . (1 (x) cup_white).
Tensor make_tick(const CFA& scfa, const CFA& acfa);

// The standard pair on qubits; its tick is exactly NOT.
GhzwPair canonical_pair();

// Transport every structure map and the tick through L simultaneously.
GhzwPair conjugate_pair(const GhzwPair& p, const Tensor& L, const Tensor& Linv);

struct PairCheck {
  std::string law;
  double residual = 0.0;
  bool pass = false;
};

struct PairCheckReport {
  std::vector<PairCheck> checks;
  double max_residual = 0.0;
  bool pass = false;
};

// Compatibility laws: the two loop properties, tick involution, white
// counit tick-invariance, the copy laws for the black unit, the loop state
// and the ticked black unit, the three unit scalars, and independence of
// the black unit from the loop state.  The independence check reports the
// distance from linear dependence, so there a small residual means failure.
PairCheckReport pair_check(const GhzwPair& pair, const Tolerance& tol = {});

// Anti-special partners of a special algebra, built over its two copiable
// points.  The two results differ by the point permutation, i.e. by tick
// conjugation.
struct PartnerResult {
  CFA acfa;
  CFA acfa_alt;
};
PartnerResult partner_from_scfa(const CFA& scfa, const Tolerance& tol = {});

// The unique special partner of an anti-special algebra, built over the
// basis {lolli / circle, unit}.
CFA partner_from_acfa(const CFA& acfa, const Tolerance& tol = {});

// Leg-wise transpose against the algebra's cap and cup, without reversing
// leg order: (f.g)^T = g^T.f^T, (f(x)g)^T = f^T(x)g^T and (f^T)^T = f.
Tensor dot_transpose(const CFA& c, const Tensor& f);

// Evaluator table exposing both structures under their CFA names plus the
// pair's tick.
SemanticsTable pair_semantics(const GhzwPair& pair);

// The multiplexor diagram on branch_wires wires per branch (branch_wires =
// N - 1 >= 1): inputs are the first-branch wires then the second-branch
// wires, outputs are the control wire followed by the data wires.
Diagram qmux_diagram(int branch_wires);

struct QmuxCertificate {
  Tensor output;                   // evaluated multiplexor on psi (x) phi
  Tensor target;                   // <1..1|phi>|0 psi> + <1..1|psi>|1 phi>
  std::vector<Tensor> local_maps;  // per output leg; witnesses equivalence
  double residual = 0.0;
  bool pass = false;
};

// Evaluates the multiplexor on two (N-1)-qubit states with nonvanishing
// all-ones amplitudes and certifies local equivalence of the result to the
// selection formula.
QmuxCertificate qmux_check(const Tensor& psi, const Tensor& phi,
                           const Tolerance& tol = {}, std::uint64_t seed = 1);

// Permuted triangular factorization of a 2 x 2 matrix together with the
// single-qubit vectors realizing each factor as a one-multiplication
// diagram cell.
struct PLDU {
  Tensor p;  // identity or NOT
  Tensor l;  // unit lower triangular
  Tensor d;  // diagonal
  Tensor u;  // unit upper triangular
  Tensor xi;   // state (l21, 1): l as a ticked black cell
  Tensor phi;  // state (d11, d22): d as a white cell
  Tensor psi;  // state (u12, 1): u as a black cell
  bool swapped = false;  // p = NOT
  Diagram diagram;       // the full realization, evaluates back to the input

  Tensor reconstruct() const;  // p . l . d . u
};

// Column-pivot Gaussian factorization: p = identity when a11 != 0, NOT when
// only a21 != 0; a zero first column is absorbed into d11 = 0.
PLDU pldu_decompose(const Tensor& a);

// Binds named symbolic state/effect nodes to concrete amplitude vectors and
// evaluates.  Unbound names raise PairError.
Tensor synthesize(const Diagram& d,
                  const std::map<std::string, std::vector<cplx>>& bindings,
                  const SemanticsTable& table);
Tensor synthesize(const std::string& dsl_text,
                  const std::map<std::string, std::vector<cplx>>& bindings,
                  const SemanticsTable& table);

}  // namespace ghzw
