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

#include "ghzw/diagram.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace ghzw {

const char* gen_op_name(GenOp op) {
  switch (op) {
    case GenOp::mult: return "mult";
    case GenOp::comult: return "comult";
    case GenOp::unit: return "unit";
    case GenOp::counit: return "counit";
    case GenOp::cap: return "cap";
    case GenOp::cup: return "cup";
  }
  return "?";
}

std::optional<GenOp> gen_op_from_name(const std::string& s) {
  if (s == "mult") return GenOp::mult;
  if (s == "comult") return GenOp::comult;
  if (s == "unit") return GenOp::unit;
  if (s == "counit") return GenOp::counit;
  if (s == "cap") return GenOp::cap;
  if (s == "cup") return GenOp::cup;
  return std::nullopt;
}

NodeKind NodeKind::generator(std::string algebra, GenOp op) {
  NodeKind k;
  k.tag = Tag::generator;
  k.algebra = std::move(algebra);
  k.op = op;
  return k;
}

NodeKind NodeKind::tick() {
  NodeKind k;
  k.tag = Tag::tick;
  return k;
}

NodeKind NodeKind::state(std::string name, std::optional<std::vector<cplx>> vec,
                         int legs) {
  NodeKind k;
  k.tag = Tag::variable_state;
  k.name = std::move(name);
  k.vec = std::move(vec);
  k.legs = legs;
  return k;
}

NodeKind NodeKind::effect(std::string name,
                          std::optional<std::vector<cplx>> vec, int legs) {
  NodeKind k = state(std::move(name), std::move(vec), legs);
  k.tag = Tag::variable_effect;
  return k;
}

int NodeKind::in_ports() const {
  switch (tag) {
    case Tag::generator:
      switch (op) {
        case GenOp::mult: return 2;
        case GenOp::comult: return 1;
        case GenOp::unit: return 0;
        case GenOp::counit: return 1;
        case GenOp::cap: return 2;
        case GenOp::cup: return 0;
      }
      return 0;
    case Tag::tick: return 1;
    case Tag::variable_state: return 0;
    case Tag::variable_effect: return legs;
  }
  return 0;
}

int NodeKind::out_ports() const {
  switch (tag) {
    case Tag::generator:
      switch (op) {
        case GenOp::mult: return 1;
        case GenOp::comult: return 2;
        case GenOp::unit: return 1;
        case GenOp::counit: return 0;
        case GenOp::cap: return 0;
        case GenOp::cup: return 2;
      }
      return 0;
    case Tag::tick: return 1;
    case Tag::variable_state: return legs;
    case Tag::variable_effect: return 0;
  }
  return 0;
}

bool NodeKind::same_kind(const NodeKind& other) const {
  if (tag != other.tag) return false;
  switch (tag) {
    case Tag::generator:
      return algebra == other.algebra && op == other.op;
    case Tag::tick:
      return true;
    case Tag::variable_state:
    case Tag::variable_effect: {
      if (name != other.name || legs != other.legs) return false;
      if (vec.has_value() != other.vec.has_value()) return false;
      if (!vec) return true;
      if (vec->size() != other.vec->size()) return false;
      for (size_t i = 0; i < vec->size(); ++i) {
        if (std::abs((*vec)[i] - (*other.vec)[i]) > 1e-12) return false;
      }
      return true;
    }
  }
  return false;
}

int Diagram::add_node(NodeKind kind) {
  nodes.push_back(std::move(kind));
  return static_cast<int>(nodes.size()) - 1;
}

namespace {

bool output_like(Endpoint::Tag t) {
  return t == Endpoint::Tag::node_out || t == Endpoint::Tag::boundary_in;
}

}  // namespace

void Diagram::validate() const {
  std::set<Endpoint> used;
  auto use = [&](const Endpoint& e, bool want_output_like) {
    if (output_like(e.tag) != want_output_like) {
      throw DiagramError("wire direction violated");
    }
    switch (e.tag) {
      case Endpoint::Tag::node_out:
      case Endpoint::Tag::node_in: {
        if (e.node < 0 || e.node >= static_cast<int>(nodes.size())) {
          throw DiagramError("dangling wire endpoint: bad node id");
        }
        const int ports = e.tag == Endpoint::Tag::node_out
                              ? nodes[e.node].out_ports()
                              : nodes[e.node].in_ports();
        if (e.port < 0 || e.port >= ports) {
          throw DiagramError("dangling wire endpoint: bad port");
        }
        break;
      }
      case Endpoint::Tag::boundary_in:
        if (e.node < 0 || e.node >= n_inputs) {
          throw DiagramError("dangling wire endpoint: bad input slot");
        }
        break;
      case Endpoint::Tag::boundary_out:
        if (e.node < 0 || e.node >= n_outputs) {
          throw DiagramError("dangling wire endpoint: bad output slot");
        }
        break;
    }
    if (!used.insert(e).second) throw DiagramError("port used twice");
  };
  for (const Wire& w : wires) {
    use(w.src, true);
    use(w.dst, false);
  }
  // Every port must be covered.
  size_t expect = static_cast<size_t>(n_inputs) + n_outputs;
  for (const NodeKind& k : nodes) expect += k.in_ports() + k.out_ports();
  if (used.size() != expect) throw DiagramError("unwired port");

  // Node-level acyclicity (Kahn).
  const int n = static_cast<int>(nodes.size());
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (const Wire& w : wires) {
    if (w.src.tag == Endpoint::Tag::node_out &&
        w.dst.tag == Endpoint::Tag::node_in) {
      succ[w.src.node].push_back(w.dst.node);
      ++indeg[w.dst.node];
    }
  }
  std::deque<int> q;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) q.push_back(i);
  int seen = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    ++seen;
    for (int s : succ[v])
      if (--indeg[s] == 0) q.push_back(s);
  }
  if (seen != n) throw DiagramError("cyclic node graph (use cap/cup nodes)");
}

Diagram empty_diagram() { return Diagram{}; }

Diagram identity_diagram(int n) {
  Diagram d;
  d.n_inputs = d.n_outputs = n;
  for (int i = 0; i < n; ++i) {
    d.wires.push_back({Endpoint::boundary_in(i), Endpoint::boundary_out(i)});
  }
  return d;
}

Diagram swap_diagram() {
  Diagram d;
  d.n_inputs = d.n_outputs = 2;
  d.wires.push_back({Endpoint::boundary_in(0), Endpoint::boundary_out(1)});
  d.wires.push_back({Endpoint::boundary_in(1), Endpoint::boundary_out(0)});
  return d;
}

namespace {

Diagram single_node_diagram(NodeKind kind) {
  Diagram d;
  int id = d.add_node(std::move(kind));
  d.n_inputs = d.nodes[id].in_ports();
  d.n_outputs = d.nodes[id].out_ports();
  for (int i = 0; i < d.n_inputs; ++i) {
    d.wires.push_back({Endpoint::boundary_in(i), Endpoint::node_in(id, i)});
  }
  for (int i = 0; i < d.n_outputs; ++i) {
    d.wires.push_back({Endpoint::node_out(id, i), Endpoint::boundary_out(i)});
  }
  return d;
}

}  // namespace

Diagram tick_diagram() { return single_node_diagram(NodeKind::tick()); }

Diagram generator_diagram(const std::string& algebra, GenOp op) {
  return single_node_diagram(NodeKind::generator(algebra, op));
}

Diagram state_diagram(const std::string& name,
                      std::optional<std::vector<cplx>> vec, int legs) {
  return single_node_diagram(NodeKind::state(name, std::move(vec), legs));
}

Diagram effect_diagram(const std::string& name,
                       std::optional<std::vector<cplx>> vec, int legs) {
  return single_node_diagram(NodeKind::effect(name, std::move(vec), legs));
}

namespace {

Endpoint shift_endpoint(const Endpoint& e, int node_offset, int in_offset,
                        int out_offset) {
  Endpoint r = e;
  switch (e.tag) {
    case Endpoint::Tag::node_out:
    case Endpoint::Tag::node_in: r.node += node_offset; break;
    case Endpoint::Tag::boundary_in: r.node += in_offset; break;
    case Endpoint::Tag::boundary_out: r.node += out_offset; break;
  }
  return r;
}

}  // namespace

Diagram compose_seq(const Diagram& f, const Diagram& g) {
  if (f.n_outputs != g.n_inputs) {
    throw DiagramError("compose_seq: arity mismatch (" +
                       std::to_string(f.n_outputs) + " outputs vs " +
                       std::to_string(g.n_inputs) + " inputs)");
  }
  Diagram r;
  r.nodes = f.nodes;
  r.nodes.insert(r.nodes.end(), g.nodes.begin(), g.nodes.end());
  r.n_inputs = f.n_inputs;
  r.n_outputs = g.n_outputs;
  const int off = static_cast<int>(f.nodes.size());

  // Sources feeding f's boundary outputs, and targets fed by g's boundary
  // inputs, indexed by glue slot.
  std::vector<Endpoint> into(f.n_outputs), outof(g.n_inputs);
  for (const Wire& w : f.wires) {
    if (w.dst.tag == Endpoint::Tag::boundary_out) into[w.dst.node] = w.src;
  }
  for (const Wire& w : g.wires) {
    if (w.src.tag == Endpoint::Tag::boundary_in) {
      outof[w.src.node] = shift_endpoint(w.dst, off, 0, 0);
    }
  }
  for (const Wire& w : f.wires) {
    if (w.dst.tag == Endpoint::Tag::boundary_out) continue;
    r.wires.push_back(w);
  }
  for (const Wire& w : g.wires) {
    if (w.src.tag == Endpoint::Tag::boundary_in) continue;
    r.wires.push_back({shift_endpoint(w.src, off, 0, 0),
                       shift_endpoint(w.dst, off, 0, 0)});
  }
  for (int i = 0; i < f.n_outputs; ++i) {
    r.wires.push_back({into[i], outof[i]});
  }
  return r;
}

Diagram compose_par(const Diagram& f, const Diagram& g) {
  Diagram r;
  r.nodes = f.nodes;
  r.nodes.insert(r.nodes.end(), g.nodes.begin(), g.nodes.end());
  r.n_inputs = f.n_inputs + g.n_inputs;
  r.n_outputs = f.n_outputs + g.n_outputs;
  const int off = static_cast<int>(f.nodes.size());
  r.wires = f.wires;
  for (const Wire& w : g.wires) {
    r.wires.push_back({shift_endpoint(w.src, off, f.n_inputs, f.n_outputs),
                       shift_endpoint(w.dst, off, f.n_inputs, f.n_outputs)});
  }
  return r;
}

namespace {

// Vertex numbering for the undirected view: nodes, then input slots, then
// output slots.
struct VertexIds {
  int n_nodes, n_in;
  int of(const Endpoint& e) const {
    switch (e.tag) {
      case Endpoint::Tag::node_out:
      case Endpoint::Tag::node_in: return e.node;
      case Endpoint::Tag::boundary_in: return n_nodes + e.node;
      case Endpoint::Tag::boundary_out: return n_nodes + n_in + e.node;
    }
    return 0;
  }
  int total(int n_out) const { return n_nodes + n_in + n_out; }
};

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::vector<ComponentView> split_components(const Diagram& d) {
  VertexIds ids{static_cast<int>(d.nodes.size()), d.n_inputs};
  const int total = ids.total(d.n_outputs);
  UnionFind uf(total);
  for (const Wire& w : d.wires) uf.unite(ids.of(w.src), ids.of(w.dst));

  // Stable component order: by smallest vertex id.
  std::map<int, int> root_to_comp;
  std::vector<int> comp_of(total);
  for (int v = 0; v < total; ++v) {
    int root = uf.find(v);
    comp_of[v] = root_to_comp
                     .try_emplace(root, static_cast<int>(root_to_comp.size()))
                     .first->second;
  }
  const int k = static_cast<int>(root_to_comp.size());
  std::vector<ComponentView> out(k);
  std::vector<std::map<int, int>> node_map(k);
  for (int n = 0; n < ids.n_nodes; ++n) {
    int c = comp_of[n];
    node_map[c][n] = out[c].diagram.add_node(d.nodes[n]);
  }
  std::vector<std::map<int, int>> in_map(k), out_map(k);
  for (int s = 0; s < d.n_inputs; ++s) {
    int c = comp_of[ids.n_nodes + s];
    in_map[c][s] = out[c].diagram.n_inputs++;
    out[c].input_slots.push_back(s);
  }
  for (int s = 0; s < d.n_outputs; ++s) {
    int c = comp_of[ids.n_nodes + ids.n_in + s];
    out_map[c][s] = out[c].diagram.n_outputs++;
    out[c].output_slots.push_back(s);
  }
  auto remap = [&](const Endpoint& e, int c) {
    Endpoint r = e;
    switch (e.tag) {
      case Endpoint::Tag::node_out:
      case Endpoint::Tag::node_in: r.node = node_map[c][e.node]; break;
      case Endpoint::Tag::boundary_in: r.node = in_map[c][e.node]; break;
      case Endpoint::Tag::boundary_out: r.node = out_map[c][e.node]; break;
    }
    return r;
  };
  for (const Wire& w : d.wires) {
    int c = comp_of[ids.of(w.src)];
    out[c].diagram.wires.push_back({remap(w.src, c), remap(w.dst, c)});
  }
  return out;
}

std::vector<Diagram> components(const Diagram& d) {
  std::vector<Diagram> out;
  for (auto& c : split_components(d)) out.push_back(std::move(c.diagram));
  return out;
}

bool is_connected(const Diagram& d) { return split_components(d).size() <= 1; }

std::vector<int> loop_count(const Diagram& d) {
  std::vector<int> out;
  for (const ComponentView& c : split_components(d)) {
    const int v = static_cast<int>(c.diagram.nodes.size()) +
                  c.diagram.n_inputs + c.diagram.n_outputs;
    const int e = static_cast<int>(c.diagram.wires.size());
    out.push_back(e - v + 1);
  }
  return out;
}

namespace {

// Port-order-respecting backtracking isomorphism.
struct IsoSearch {
  const Diagram& a;
  const Diagram& b;
  std::vector<std::vector<Endpoint>> a_in, a_out, b_in, b_out;  // port -> peer
  std::vector<int> map_ab;  // a node -> b node or -1
  std::vector<bool> used_b;

  explicit IsoSearch(const Diagram& a_, const Diagram& b_) : a(a_), b(b_) {}

  static void index_ports(const Diagram& d,
                          std::vector<std::vector<Endpoint>>& in,
                          std::vector<std::vector<Endpoint>>& out) {
    in.resize(d.nodes.size());
    out.resize(d.nodes.size());
    for (size_t i = 0; i < d.nodes.size(); ++i) {
      in[i].resize(d.nodes[i].in_ports());
      out[i].resize(d.nodes[i].out_ports());
    }
    for (const Wire& w : d.wires) {
      if (w.src.tag == Endpoint::Tag::node_out) out[w.src.node][w.src.port] = w.dst;
      if (w.dst.tag == Endpoint::Tag::node_in) in[w.dst.node][w.dst.port] = w.src;
    }
  }

  // Checks endpoint ea in a corresponds to eb in b under the (partial) map;
  // unmapped node pairs are tentatively compatible.
  bool endpoint_ok(const Endpoint& ea, const Endpoint& eb) const {
    if (ea.tag != eb.tag) return false;
    switch (ea.tag) {
      case Endpoint::Tag::boundary_in:
      case Endpoint::Tag::boundary_out:
        return ea.node == eb.node;
      case Endpoint::Tag::node_out:
      case Endpoint::Tag::node_in:
        if (ea.port != eb.port) return false;
        if (map_ab[ea.node] == -1) {
          return !used_b[eb.node] &&
                 a.nodes[ea.node].same_kind(b.nodes[eb.node]);
        }
        return map_ab[ea.node] == eb.node;
    }
    return false;
  }

  bool node_compatible(int na, int nb) const {
    if (!a.nodes[na].same_kind(b.nodes[nb])) return false;
    for (size_t p = 0; p < a_in[na].size(); ++p) {
      if (!endpoint_ok(a_in[na][p], b_in[nb][p])) return false;
    }
    for (size_t p = 0; p < a_out[na].size(); ++p) {
      if (!endpoint_ok(a_out[na][p], b_out[nb][p])) return false;
    }
    return true;
  }

  bool extend(size_t next) {
    if (next == a.nodes.size()) return true;
    for (size_t nb = 0; nb < b.nodes.size(); ++nb) {
      if (used_b[nb]) continue;
      if (!node_compatible(static_cast<int>(next), static_cast<int>(nb))) continue;
      map_ab[next] = static_cast<int>(nb);
      used_b[nb] = true;
      if (extend(next + 1)) return true;
      map_ab[next] = -1;
      used_b[nb] = false;
    }
    return false;
  }

  bool run() {
    if (a.nodes.size() != b.nodes.size()) return false;
    index_ports(a, a_in, a_out);
    index_ports(b, b_in, b_out);
    map_ab.assign(a.nodes.size(), -1);
    used_b.assign(b.nodes.size(), false);
    if (!extend(0)) return false;
    // With all nodes mapped, endpoint_ok is exact; re-verify every wire's
    // pairing including boundary-to-boundary wires.
    for (const Wire& wa : a.wires) {
      bool found = false;
      for (const Wire& wb : b.wires) {
        if (endpoint_ok(wa.src, wb.src) && endpoint_ok(wa.dst, wb.dst)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }
};

}  // namespace

bool iso_check(const Diagram& a, const Diagram& b) {
  if (a.n_inputs != b.n_inputs || a.n_outputs != b.n_outputs) return false;
  if (a.wires.size() != b.wires.size()) return false;
  IsoSearch s(a, b);
  return s.run();
}

std::string to_dot(const Diagram& d) {
  std::ostringstream os;
  os << "digraph diagram {\n  rankdir=TB;\n";
  for (int i = 0; i < d.n_inputs; ++i) {
    os << "  in" << i << " [shape=none,label=\"in " << i << "\"];\n";
  }
  for (int i = 0; i < d.n_outputs; ++i) {
    os << "  out" << i << " [shape=none,label=\"out " << i << "\"];\n";
  }
  // Tick nodes are rendered as labels on the wire that passes through them.
  std::vector<bool> is_tick(d.nodes.size(), false);
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    const NodeKind& k = d.nodes[i];
    if (k.tag == NodeKind::Tag::tick) {
      is_tick[i] = true;
      continue;
    }
    os << "  n" << i << " [";
    switch (k.tag) {
      case NodeKind::Tag::generator: {
        const bool ghz_like = k.algebra == "ghz";
        os << "shape=circle,style=filled,fillcolor="
           << (ghz_like ? "\"white\"" : "\"black\"")
           << ",fontcolor=" << (ghz_like ? "\"black\"" : "\"white\"")
           << ",label=\"" << gen_op_name(k.op) << "\\n" << k.algebra << "\"";
        break;
      }
      case NodeKind::Tag::variable_state:
        os << "shape=triangle,label=\"" << k.name << "\"";
        break;
      case NodeKind::Tag::variable_effect:
        os << "shape=invtriangle,label=\"" << k.name << "\"";
        break;
      case NodeKind::Tag::tick: break;
    }
    os << "];\n";
  }
  // Collapse maximal tick chains into single labeled edges.
  std::vector<Endpoint> tick_in(d.nodes.size()), tick_out(d.nodes.size());
  for (const Wire& w : d.wires) {
    if (w.dst.tag == Endpoint::Tag::node_in && is_tick[w.dst.node]) {
      tick_in[w.dst.node] = w.src;
    }
    if (w.src.tag == Endpoint::Tag::node_out && is_tick[w.src.node]) {
      tick_out[w.src.node] = w.dst;
    }
  }
  auto vertex_name = [&](const Endpoint& e) {
    std::ostringstream v;
    switch (e.tag) {
      case Endpoint::Tag::node_out:
      case Endpoint::Tag::node_in: v << "n" << e.node; break;
      case Endpoint::Tag::boundary_in: v << "in" << e.node; break;
      case Endpoint::Tag::boundary_out: v << "out" << e.node; break;
    }
    return v.str();
  };
  for (const Wire& w : d.wires) {
    // Start edges only at non-tick sources; walk through tick chains.
    if (w.src.tag == Endpoint::Tag::node_out && is_tick[w.src.node]) continue;
    Endpoint dst = w.dst;
    int ticks = 0;
    while (dst.tag == Endpoint::Tag::node_in && is_tick[dst.node]) {
      ++ticks;
      dst = tick_out[dst.node];
    }
    os << "  " << vertex_name(w.src) << " -> " << vertex_name(dst);
    if (ticks == 1) os << " [label=\"tick\"]";
    else if (ticks > 1) os << " [label=\"tick x" << ticks << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ghzw
