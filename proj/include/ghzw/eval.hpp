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

#include <map>
#include <string>

#include "ghzw/diagram.hpp"
#include "ghzw/tensor.hpp"

namespace ghzw {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Concrete tensors for one algebra's generators.
struct AlgebraSemantics {
  Tensor mult;    // 2 -> 1
  Tensor unit;    // 0 -> 1
  Tensor comult;  // 1 -> 2
  Tensor counit;  // 1 -> 0
  Tensor cap;     // 2 -> 0, counit . mult
  Tensor cup;     // 0 -> 2, comult . unit

  const Tensor& of(GenOp op) const;
};

struct SemanticsTable {
  std::map<std::string, AlgebraSemantics> algebras;
  Tensor tick = Tensor::identity();

  const AlgebraSemantics& algebra(const std::string& name) const;
};

// Tensor semantics of a diagram: contracts nodes in topological order.
// Throws EvalError for unknown algebras and symbolic variable nodes.
Tensor evaluate(const Diagram& d, const SemanticsTable& table);

}  // namespace ghzw
