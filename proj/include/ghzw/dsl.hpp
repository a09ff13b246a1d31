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

#include <set>
#include <string>

#include "ghzw/diagram.hpp"

namespace ghzw {

// Raised with a "line:col: message" payload.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// S-expression diagram language:
//
//   expr := atom | "(seq" expr expr+ ")" | "(par" expr expr+ ")"
//   atom := "id" | "tick" | "swap"
//         | "(mult" ALG ")" | "(comult" ALG ")"
//         | "(unit" ALG ")" | "(counit" ALG ")"
//         | "(cap" ALG ")" | "(cup" ALG ")"
//         | "(state" NAME [complex-list] ")"
//         | "(effect" NAME [complex-list] ")"
//
// ALG is "ghz", "w", or a registered custom name.  A complex-list is a
// whitespace-separated run of literals like 1, -2.5, 3+4i, -i, 0.5-0.25i;
// its length must be a power of two and fixes the variable's leg count.
// A state/effect without a list stays symbolic with one leg.
Diagram parse_dsl(const std::string& text,
                  const std::set<std::string>& algebras = {"ghz", "w"});

// Parses one complex literal (used by the DSL and the CLI).
cplx parse_complex(const std::string& token);

}  // namespace ghzw
