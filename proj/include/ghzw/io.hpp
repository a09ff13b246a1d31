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

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzw/cfa.hpp"
#include "ghzw/diagram.hpp"
#include "ghzw/pair.hpp"
#include "ghzw/rewrite.hpp"
#include "ghzw/tensor.hpp"

namespace ghzw {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor files: {"in": n, "out": m, "dim": d, "entries": [[re, im], ...]}
// with entries in the documented output-major layout.
std::string tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const std::string& text);

// State files: {"n": N, "amplitudes": [[re, im] x 2^N]}, big-endian qubit
// order (qubit 1 is the most significant bit of the amplitude index).
std::string state_to_json(const Tensor& state);
Tensor state_from_json(const std::string& text);

// CFA files: {"name", "dim", "mult", "unit", "comult", "counit"} with the
// four structure maps as Tensor records.
std::string cfa_to_json(const CFA& c);
CFA cfa_from_json(const std::string& text);

// Pair files bundle the two CFA records plus an optional explicit tick.
// Without one, the tick is reconstructed with make_tick.
std::string pair_to_json(const GhzwPair& p);
GhzwPair pair_from_json(const std::string& text);

// Rule catalog export: name, both sides in the diagram schema, scalar as
// [re, im], and the bidirectional flag.
std::string rules_to_json(const std::vector<RewriteRule>& rules);

// Reads a .diag payload, accepting either DSL text or diagram JSON.
// JSON is assumed when the first non-space byte is '{'.
Diagram diagram_from_text(const std::string& text,
                          const std::set<std::string>& algebras = {"ghz", "w"});

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ghzw
