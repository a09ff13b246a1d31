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

#include "ghzw/eval.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace ghzw {

const Tensor& AlgebraSemantics::of(GenOp op) const {
  switch (op) {
    case GenOp::mult: return mult;
    case GenOp::comult: return comult;
    case GenOp::unit: return unit;
    case GenOp::counit: return counit;
    case GenOp::cap: return cap;
    case GenOp::cup: return cup;
  }
  throw EvalError("unknown generator op");
}

const AlgebraSemantics& SemanticsTable::algebra(const std::string& name) const {
  auto it = algebras.find(name);
  if (it == algebras.end()) throw EvalError("unknown algebra: " + name);
  return it->second;
}

namespace {

// compose(kron(identity(keep), t), run) without materializing the square
// identity factor, which would cost dim^(2 keep); t acts on the trailing
// out legs of run.
Tensor apply_to_tail(const Tensor& run, int keep, const Tensor& t) {
  Tensor out(run.in_arity(), keep + t.out_arity(), run.dim());
  std::int64_t kept = 1;
  for (int i = 0; i < keep; ++i) kept *= run.dim();
  const std::int64_t tin = t.cols(), tout = t.rows(), cols = run.cols();
  for (std::int64_t i = 0; i < tout; ++i) {
    for (std::int64_t j = 0; j < tin; ++j) {
      const cplx w = t.at(i, j);
      if (w == cplx(0.0, 0.0)) continue;
      for (std::int64_t a = 0; a < kept; ++a) {
        const cplx* src = &run.at(a * tin + j, 0);
        cplx* dst = &out.at(a * tout + i, 0);
        for (std::int64_t c = 0; c < cols; ++c) dst[c] += w * src[c];
      }
    }
  }
  return out;
}

Tensor node_tensor(const NodeKind& k, const SemanticsTable& table, int dim) {
  switch (k.tag) {
    case NodeKind::Tag::generator:
      return table.algebra(k.algebra).of(k.op);
    case NodeKind::Tag::tick:
      return table.tick;
    case NodeKind::Tag::variable_state: {
      if (!k.vec) throw EvalError("symbolic state '" + k.name + "' has no value");
      return Tensor::state(k.legs, *k.vec, dim);
    }
    case NodeKind::Tag::variable_effect: {
      if (!k.vec) throw EvalError("symbolic effect '" + k.name + "' has no value");
      Tensor t(k.legs, 0, dim);
      if (t.size() != static_cast<std::int64_t>(k.vec->size())) {
        throw EvalError("effect '" + k.name + "' has wrong vector length");
      }
      t.entries() = *k.vec;
      return t;
    }
  }
  throw EvalError("unknown node kind");
}

}  // namespace

Tensor evaluate(const Diagram& d, const SemanticsTable& table) {
  d.validate();
  const int dim = table.tick.dim();

  // Wire ids; find each wire's producing endpoint consumer-side lookup.
  const int n_nodes = static_cast<int>(d.nodes.size());
  // wire index by consumer endpoint
  std::map<Endpoint, int> by_src, by_dst;
  for (size_t i = 0; i < d.wires.size(); ++i) {
    by_src[d.wires[i].src] = static_cast<int>(i);
    by_dst[d.wires[i].dst] = static_cast<int>(i);
  }

  // Topological order over nodes.
  std::vector<int> indeg(n_nodes, 0);
  std::vector<std::vector<int>> succ(n_nodes);
  for (const Wire& w : d.wires) {
    if (w.src.tag == Endpoint::Tag::node_out &&
        w.dst.tag == Endpoint::Tag::node_in) {
      succ[w.src.node].push_back(w.dst.node);
      ++indeg[w.dst.node];
    }
  }
  std::deque<int> q;
  for (int i = 0; i < n_nodes; ++i)
    if (indeg[i] == 0) q.push_back(i);
  std::vector<int> order;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    order.push_back(v);
    for (int s : succ[v])
      if (--indeg[s] == 0) q.push_back(s);
  }

  // Running tensor: in legs are the diagram's boundary inputs (in order),
  // out legs are the currently open wires, tracked in `open`.
  Tensor run = Tensor::scalar(1.0, dim);
  std::vector<int> open;

  for (int slot = 0; slot < d.n_inputs; ++slot) {
    run = kron(run, Tensor::identity(1, dim));
    open.push_back(by_src.at(Endpoint::boundary_in(slot)));
  }

  auto consume_and_emit = [&](const Tensor& t, const std::vector<int>& in_wires,
                              const std::vector<int>& out_wires) {
    // Permute open legs so in_wires sit at the end, in order.
    const int keep = static_cast<int>(open.size() - in_wires.size());
    std::vector<int> perm(open.size());
    std::vector<bool> consumed(open.size(), false);
    for (size_t j = 0; j < in_wires.size(); ++j) {
      auto it = std::find(open.begin(), open.end(), in_wires[j]);
      const int pos = static_cast<int>(it - open.begin());
      perm[pos] = keep + static_cast<int>(j);
      consumed[pos] = true;
    }
    int next = 0;
    std::vector<int> new_open;
    for (size_t p = 0; p < open.size(); ++p) {
      if (consumed[p]) continue;
      perm[p] = next++;
      new_open.push_back(open[p]);
    }
    // perm scatters old position -> new position; swap_legs gathers.
    std::vector<int> gather(open.size());
    for (size_t p = 0; p < open.size(); ++p) gather[perm[p]] = static_cast<int>(p);
    std::vector<int> id_in(run.in_arity());
    std::iota(id_in.begin(), id_in.end(), 0);
    run = swap_legs(run, id_in, gather);
    run = apply_to_tail(run, keep, t);
    open = new_open;
    open.insert(open.end(), out_wires.begin(), out_wires.end());
  };

  for (int v : order) {
    const NodeKind& k = d.nodes[v];
    std::vector<int> in_wires, out_wires;
    for (int p = 0; p < k.in_ports(); ++p) {
      in_wires.push_back(by_dst.at(Endpoint::node_in(v, p)));
    }
    for (int p = 0; p < k.out_ports(); ++p) {
      out_wires.push_back(by_src.at(Endpoint::node_out(v, p)));
    }
    consume_and_emit(node_tensor(k, table, dim), in_wires, out_wires);
  }

  // Route open wires to boundary outputs.
  std::vector<int> gather(open.size());
  std::vector<int> id_in(run.in_arity());
  std::iota(id_in.begin(), id_in.end(), 0);
  for (size_t p = 0; p < open.size(); ++p) {
    const Endpoint dst = d.wires[open[p]].dst;
    if (dst.tag != Endpoint::Tag::boundary_out) {
      throw EvalError("internal: unconsumed non-boundary wire");
    }
    gather[dst.node] = static_cast<int>(p);
  }
  return swap_legs(run, id_in, gather);
}

}  // namespace ghzw
