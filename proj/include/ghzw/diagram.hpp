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
#include <optional>
#include <string>
#include <vector>

#include "ghzw/tensor.hpp"

namespace ghzw {

struct DiagramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GenOp { mult, comult, unit, counit, cap, cup };

const char* gen_op_name(GenOp op);
std::optional<GenOp> gen_op_from_name(const std::string& s);

// A single diagram node.  Generator nodes carry the algebra they belong to;
// variable state/effect nodes carry a name and, when concrete, an amplitude
// vector of length dim^legs.
struct NodeKind {
  enum class Tag { generator, tick, variable_state, variable_effect };
  Tag tag = Tag::tick;
  std::string algebra;  // generator nodes
  GenOp op = GenOp::mult;
  std::string name;  // variable nodes
  int legs = 1;      // variable nodes: number of boundary-facing legs
  std::optional<std::vector<cplx>> vec;

  static NodeKind generator(std::string algebra, GenOp op);
  static NodeKind tick();
  static NodeKind state(std::string name, std::optional<std::vector<cplx>> vec,
                        int legs = 1);
  static NodeKind effect(std::string name, std::optional<std::vector<cplx>> vec,
                         int legs = 1);

  int in_ports() const;
  int out_ports() const;
  bool same_kind(const NodeKind& other) const;
};

// Wire endpoints.  node_out ports and boundary input slots are the
// output-like (source) ends; node_in ports and boundary output slots are the
// input-like (target) ends.
struct Endpoint {
  enum class Tag { node_out, node_in, boundary_in, boundary_out };
  Tag tag = Tag::node_out;
  int node = 0;  // node id, or slot index for boundary endpoints
  int port = 0;

  static Endpoint node_out(int node, int port) { return {Tag::node_out, node, port}; }
  static Endpoint node_in(int node, int port) { return {Tag::node_in, node, port}; }
  static Endpoint boundary_in(int slot) { return {Tag::boundary_in, slot, 0}; }
  static Endpoint boundary_out(int slot) { return {Tag::boundary_out, slot, 0}; }

  bool operator==(const Endpoint&) const = default;
  auto operator<=>(const Endpoint&) const = default;
};

struct Wire {
  Endpoint src;  // output-like
  Endpoint dst;  // input-like
  bool operator==(const Wire&) const = default;
};

// Open port graph of generator nodes.  Node ids are indices into nodes.
// Every node port and boundary slot is used by exactly one wire; the
// node-level graph is acyclic (feedback is expressed with cap/cup nodes).
struct Diagram {
  std::vector<NodeKind> nodes;
  std::vector<Wire> wires;
  int n_inputs = 0;
  int n_outputs = 0;

  int add_node(NodeKind kind);

  // Throws DiagramError when an invariant is broken (port reuse, dangling
  // endpoint, cyclic node graph, bad slot counts).
  void validate() const;
};

// Empty diagram (semantically the scalar 1).
Diagram empty_diagram();
// n parallel identity wires.
Diagram identity_diagram(int n = 1);
Diagram swap_diagram();
Diagram tick_diagram();
Diagram generator_diagram(const std::string& algebra, GenOp op);
Diagram state_diagram(const std::string& name,
                      std::optional<std::vector<cplx>> vec, int legs = 1);
Diagram effect_diagram(const std::string& name,
                       std::optional<std::vector<cplx>> vec, int legs = 1);

// Sequential gluing: f runs first, f's outputs plug into g's inputs.
Diagram compose_seq(const Diagram& f, const Diagram& g);
// Side-by-side juxtaposition; f's boundary slots come first.
Diagram compose_par(const Diagram& f, const Diagram& g);

// Connected components, boundary slots treated as vertices.  Slot orders in
// each piece follow the original diagram.
struct ComponentView {
  Diagram diagram;
  std::vector<int> input_slots;   // original boundary input slots, ascending
  std::vector<int> output_slots;  // original boundary output slots, ascending
};
std::vector<ComponentView> split_components(const Diagram& d);
std::vector<Diagram> components(const Diagram& d);
bool is_connected(const Diagram& d);

// Cycle rank E - V + 1 of each connected component's underlying undirected
// multigraph (boundary slots and tick nodes are vertices), in
// split_components order.
std::vector<int> loop_count(const Diagram& d);

// Normal-form bookkeeping for single-algebra diagrams (Thm cfa-nf shape).
struct CanonicalDescriptor {
  int n_inputs = 0;
  int m_outputs = 0;
  int loops = 0;
  std::string algebra;
  bool operator==(const CanonicalDescriptor&) const = default;
};

// Boundary-preserving, kind-preserving, port-order-respecting isomorphism
// test (backtracking; diagrams are small).
bool iso_check(const Diagram& a, const Diagram& b);

// Serialization (schema version 1) and Graphviz export.
std::string to_json(const Diagram& d);
Diagram from_json(const std::string& text);
std::string to_dot(const Diagram& d);

}  // namespace ghzw
