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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghzw/tensor.hpp"

namespace ghzw {

struct SloccError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SloccKind {
  zero,
  qubit,
  product,
  bell,
  bisep,  // exactly one separable qubit; position is 1-based
  ghz,
  w,
  pair_node,  // unordered children from a rank-2 spanning space
};

// Label tree produced by the recursive classifier.  Leaves cover one to
// three qubits; inner nodes hold the labels of the spanning vectors of the
// first qubit's right singular space as an unordered set of one or two.
struct SloccLabel {
  SloccKind kind = SloccKind::zero;
  int position = 0;
  std::vector<SloccLabel> children;

  static SloccLabel leaf(SloccKind k) { return {k, 0, {}}; }
  static SloccLabel bisep(int pos) { return {SloccKind::bisep, pos, {}}; }
  static SloccLabel node(std::vector<SloccLabel> kids) {
    return {SloccKind::pair_node, 0, std::move(kids)};
  }

  bool operator==(const SloccLabel& other) const;
  std::string str() const;
};

// True when the state is invariant under every leg permutation.
bool is_symmetric_state(const Tensor& psi, const Tolerance& tol = {});

// Compact partner of a two-qubit state: the effect phi with
// (phi (x) 1)(1 (x) psi) = id, present iff the 2x2 reshape is invertible.
std::optional<Tensor> bipartite_maximal(const Tensor& psi,
                                        const Tolerance& tol = {});

struct MaximalityWitness {
  Tensor xi;   // 1 -> 0
  Tensor phi;  // 2 -> 0
};

// Per-leg witnesses that the contraction of psi with some effect is a
// maximal two-qubit state.  det of the contracted reshape is a quadratic
// form in the effect; a witness exists iff the form is not identically
// zero.  Empty when any leg fails.
std::optional<std::array<MaximalityWitness, 3>> strong_maximal(
    const Tensor& psi, const Tolerance& tol = {});

// Effect phi gluing two copies of a symmetric state into a symmetric
// state on 2N-2 legs.  The symmetry constraints are linear in phi; the
// solution comes from the nullspace of the stacked transposition
// constraints, picking the vector with the largest glued norm.  Empty if
// every nullspace vector glues to zero.
std::optional<Tensor> strong_symmetric(const Tensor& psi,
                                       const Tolerance& tol = {});

// Glue of two copies of psi across one leg pair: the 0 -> 2N-2 state
// (1...1 (x) phi (x) 1...1)(psi (x) psi).
Tensor glue_pair(const Tensor& psi, const Tensor& phi);

// Searches for a single effect xi whose rebuilt algebra passes the full
// axiom check, certifying both maximality and inductive symmetry with the
// same compact partner phi.  Candidates come from the classification of
// psi, then from seeded random effects.
std::optional<MaximalityWitness> is_frobenius_state(const Tensor& psi,
                                                    const Tolerance& tol = {},
                                                    std::uint64_t seed = 1);

// Cayley hyperdeterminant of a three-qubit state (degree four in the
// eight amplitudes); zero exactly on the closure of the W class.
cplx hyperdeterminant(const Tensor& psi);

// Leaf classification of a three-qubit state from the single-qubit
// reduced ranks and the hyperdeterminant.
SloccLabel tripartite_classify(const Tensor& psi, const Tolerance& tol = {});

// Finds invertible L with psi = lambda * L^(x)N phi for symmetric states.
// Closed forms handle N = 3 against canonical targets; otherwise a seeded
// multi-start Gauss-Newton search runs, and a result is returned only when
// its residual passes the tolerance.
std::optional<std::pair<Tensor, cplx>> uniform_L_solve(
    const Tensor& psi, const Tensor& phi, const Tolerance& tol = {},
    std::uint64_t seed = 1);

// Recursive superclass label: two qubits split product/bell, three use
// tripartite_classify, and larger states recurse on the spanning vectors
// of the first qubit's right singular space.
SloccLabel superclass_label(const Tensor& psi, const Tolerance& tol = {});

}  // namespace ghzw
