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

#include "ghzw/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "ghzw/cfa.hpp"

namespace ghzw {

namespace {

Diagram gen(const std::string& alg, GenOp op) { return generator_diagram(alg, op); }

// Right partial trace of comult drawn with the algebra's own cap and cup.
// The snake law contracts them away, so this evaluates to Tr_R(comult).
Diagram lolli_diagram(const std::string& alg) {
  Diagram d;
  d.n_inputs = 0;
  d.n_outputs = 1;
  int cu = d.add_node(NodeKind::generator(alg, GenOp::cup));
  int de = d.add_node(NodeKind::generator(alg, GenOp::comult));
  int ca = d.add_node(NodeKind::generator(alg, GenOp::cap));
  d.wires.push_back({Endpoint::node_out(cu, 0), Endpoint::node_in(de, 0)});
  d.wires.push_back({Endpoint::node_out(de, 0), Endpoint::boundary_out(0)});
  d.wires.push_back({Endpoint::node_out(de, 1), Endpoint::node_in(ca, 0)});
  d.wires.push_back({Endpoint::node_out(cu, 1), Endpoint::node_in(ca, 1)});
  return d;
}

Diagram cololli_diagram(const std::string& alg) {
  Diagram d;
  d.n_inputs = 1;
  d.n_outputs = 0;
  int cu = d.add_node(NodeKind::generator(alg, GenOp::cup));
  int mu = d.add_node(NodeKind::generator(alg, GenOp::mult));
  int ca = d.add_node(NodeKind::generator(alg, GenOp::cap));
  d.wires.push_back({Endpoint::node_out(cu, 0), Endpoint::node_in(mu, 0)});
  d.wires.push_back({Endpoint::boundary_in(0), Endpoint::node_in(mu, 1)});
  d.wires.push_back({Endpoint::node_out(mu, 0), Endpoint::node_in(ca, 0)});
  d.wires.push_back({Endpoint::node_out(cu, 1), Endpoint::node_in(ca, 1)});
  return d;
}

std::vector<RewriteRule> build_catalog() {
  std::vector<RewriteRule> rules;
  auto add = [&rules](std::string name, Diagram lhs, Diagram rhs,
                      cplx scalar = cplx(1.0, 0.0)) {
    rules.push_back({std::move(name), std::move(lhs), std::move(rhs), scalar, true});
  };

  const Diagram id1 = identity_diagram(1);
  for (const char* a : {"ghz", "w"}) {
    const std::string alg(a);
    const Diagram mu = gen(alg, GenOp::mult);
    const Diagram de = gen(alg, GenOp::comult);
    const Diagram un = gen(alg, GenOp::unit);
    const Diagram co = gen(alg, GenOp::counit);
    add("assoc." + alg, compose_seq(compose_par(mu, id1), mu),
        compose_seq(compose_par(id1, mu), mu));
    add("coassoc." + alg, compose_seq(de, compose_par(de, id1)),
        compose_seq(de, compose_par(id1, de)));
    add("unit_l." + alg, compose_seq(compose_par(un, id1), mu), id1);
    add("unit_r." + alg, compose_seq(compose_par(id1, un), mu), id1);
    add("counit_l." + alg, compose_seq(de, compose_par(co, id1)), id1);
    add("counit_r." + alg, compose_seq(de, compose_par(id1, co)), id1);
    add("frobenius." + alg,
        compose_seq(compose_par(id1, de), compose_par(mu, id1)),
        compose_seq(mu, de));
    add("comm." + alg, compose_seq(swap_diagram(), mu), mu);
    add("cocomm." + alg, compose_seq(de, swap_diagram()), de);
  }

  add("special", compose_seq(gen("ghz", GenOp::comult), gen("ghz", GenOp::mult)), id1);
  add("antispecial", compose_seq(gen("w", GenOp::comult), gen("w", GenOp::mult)),
      compose_seq(cololli_diagram("w"), lolli_diagram("w")), cplx(2.0, 0.0));
  add("tick_invol", compose_seq(tick_diagram(), tick_diagram()), id1);
  add("tick_counit", compose_seq(tick_diagram(), gen("ghz", GenOp::counit)),
      gen("ghz", GenOp::counit));
  add("copy_unit", compose_seq(gen("w", GenOp::unit), gen("ghz", GenOp::comult)),
      compose_par(gen("w", GenOp::unit), gen("w", GenOp::unit)));
  add("copy_lolli", compose_seq(lolli_diagram("w"), gen("ghz", GenOp::comult)),
      compose_par(lolli_diagram("w"), lolli_diagram("w")), cplx(2.0, 0.0));
  const Diagram ticked_unit = compose_seq(gen("w", GenOp::unit), tick_diagram());
  add("tick_unit_copy", compose_seq(ticked_unit, gen("w", GenOp::comult)),
      compose_par(ticked_unit, ticked_unit));
  add("scalar_one_a", compose_seq(ticked_unit, gen("w", GenOp::counit)),
      empty_diagram());
  add("scalar_one_b",
      compose_seq(compose_seq(gen("ghz", GenOp::unit), tick_diagram()),
                  gen("w", GenOp::counit)),
      empty_diagram());
  add("scalar_one_c", compose_seq(gen("ghz", GenOp::unit), gen("w", GenOp::counit)),
      empty_diagram());

  const SemanticsTable sem = canonical_semantics();
  for (const RewriteRule& r : rules) {
    if (r.lhs.n_inputs != r.rhs.n_inputs || r.lhs.n_outputs != r.rhs.n_outputs) {
      throw RewriteError("catalog rule '" + r.name + "' has mismatched boundaries");
    }
    const Tensor lv = evaluate(r.lhs, sem);
    const Tensor rv = evaluate(r.rhs, sem);
    const Tensor want = r.scalar * lv;
    const double resid = distance(rv, want);
    const double floor = 1e-9 * std::max(1.0, std::max(rv.norm(), want.norm()));
    if (resid > floor) {
      std::ostringstream os;
      os << "catalog rule '" << r.name << "' fails its semantic check, residual "
         << resid;
      throw RewriteError(os.str());
    }
  }
  return rules;
}

bool endpoint_on_node_set(const Endpoint& e, const std::vector<char>& matched) {
  if (e.tag == Endpoint::Tag::node_out || e.tag == Endpoint::Tag::node_in) {
    return matched[static_cast<std::size_t>(e.node)] != 0;
  }
  return false;
}

// Per-host lookup tables from an endpoint to the index of the unique wire
// using it. Well-formedness guarantees uniqueness.
struct WireIndex {
  std::map<Endpoint, int> by_src;
  std::map<Endpoint, int> by_dst;

  explicit WireIndex(const Diagram& d) {
    for (std::size_t i = 0; i < d.wires.size(); ++i) {
      by_src.emplace(d.wires[i].src, static_cast<int>(i));
      by_dst.emplace(d.wires[i].dst, static_cast<int>(i));
    }
  }
};

class Matcher {
 public:
  Matcher(const Diagram& pat, const Diagram& host)
      : pat_(pat), host_(host), index_(host),
        node_map_(pat.nodes.size(), -1),
        host_used_(host.nodes.size(), 0) {}

  std::vector<Embedding> run() {
    results_.clear();
    assign_nodes(0);
    return results_;
  }

 private:
  void assign_nodes(std::size_t k) {
    if (k == pat_.nodes.size()) {
      match_wires();
      return;
    }
    for (std::size_t h = 0; h < host_.nodes.size(); ++h) {
      if (host_used_[h]) continue;
      if (!pat_.nodes[k].same_kind(host_.nodes[h])) continue;
      node_map_[k] = static_cast<int>(h);
      host_used_[h] = 1;
      assign_nodes(k + 1);
      node_map_[k] = -1;
      host_used_[h] = 0;
    }
  }

  // Maps a pattern endpoint through node_map_; boundary endpoints have no
  // fixed image and return nullopt.
  std::optional<Endpoint> image(const Endpoint& e) const {
    switch (e.tag) {
      case Endpoint::Tag::node_out:
        return Endpoint::node_out(node_map_[static_cast<std::size_t>(e.node)], e.port);
      case Endpoint::Tag::node_in:
        return Endpoint::node_in(node_map_[static_cast<std::size_t>(e.node)], e.port);
      default:
        return std::nullopt;
    }
  }

  void match_wires() {
    std::vector<int> wire_map(pat_.wires.size(), -1);
    std::set<int> claimed;
    std::vector<std::size_t> floating;

    for (std::size_t i = 0; i < pat_.wires.size(); ++i) {
      const Wire& w = pat_.wires[i];
      const std::optional<Endpoint> src = image(w.src);
      const std::optional<Endpoint> dst = image(w.dst);
      if (!src && !dst) {
        floating.push_back(i);
        continue;
      }
      int hw = -1;
      if (src) {
        auto it = index_.by_src.find(*src);
        if (it == index_.by_src.end()) return;
        hw = it->second;
        if (dst) {
          if (!(host_.wires[static_cast<std::size_t>(hw)].dst == *dst)) return;
        } else if (endpoint_on_node_set(host_.wires[static_cast<std::size_t>(hw)].dst,
                                        host_used_)) {
          // The pattern treats this end as boundary, so the host side must
          // stay after the matched nodes are deleted.
          return;
        }
      } else {
        auto it = index_.by_dst.find(*dst);
        if (it == index_.by_dst.end()) return;
        hw = it->second;
        if (endpoint_on_node_set(host_.wires[static_cast<std::size_t>(hw)].src,
                                 host_used_)) {
          return;
        }
      }
      if (!claimed.insert(hw).second) return;
      wire_map[i] = hw;
    }

    assign_floating(floating, 0, wire_map, claimed);
  }

  // Pattern wires that run boundary-to-boundary can land on any host wire
  // that is unclaimed and clear of the matched nodes.
  void assign_floating(const std::vector<std::size_t>& floating, std::size_t k,
                       std::vector<int>& wire_map, std::set<int>& claimed) {
    if (k == floating.size()) {
      Embedding e;
      for (std::size_t p = 0; p < node_map_.size(); ++p) {
        e.node_map[static_cast<int>(p)] = node_map_[p];
      }
      e.wire_map = wire_map;
      results_.push_back(std::move(e));
      return;
    }
    for (std::size_t hw = 0; hw < host_.wires.size(); ++hw) {
      const int hwi = static_cast<int>(hw);
      if (claimed.count(hwi)) continue;
      if (endpoint_on_node_set(host_.wires[hw].src, host_used_) ||
          endpoint_on_node_set(host_.wires[hw].dst, host_used_)) {
        continue;
      }
      claimed.insert(hwi);
      wire_map[floating[k]] = hwi;
      assign_floating(floating, k + 1, wire_map, claimed);
      wire_map[floating[k]] = -1;
      claimed.erase(hwi);
    }
  }

  const Diagram& pat_;
  const Diagram& host_;
  WireIndex index_;
  std::vector<int> node_map_;
  std::vector<char> host_used_;
  std::vector<Embedding> results_;
};

}  // namespace

RewriteRule reversed(const RewriteRule& rule) {
  if (!rule.bidirectional) {
    throw RewriteError("rule '" + rule.name + "' is not bidirectional");
  }
  if (std::abs(rule.scalar) == 0.0) {
    throw RewriteError("rule '" + rule.name + "' has a non-invertible scalar");
  }
  return RewriteRule{rule.name + ".rev", rule.rhs, rule.lhs,
                     cplx(1.0, 0.0) / rule.scalar, true};
}

const std::vector<RewriteRule>& builtin_rules() {
  static const std::vector<RewriteRule> catalog = build_catalog();
  return catalog;
}

const RewriteRule& builtin_rule(const std::string& name) {
  for (const RewriteRule& r : builtin_rules()) {
    if (r.name == name) return r;
  }
  throw RewriteError("no built-in rule named '" + name + "'");
}

std::vector<Embedding> find_matches(const RewriteRule& rule, const Diagram& host) {
  rule.lhs.validate();
  host.validate();
  Matcher m(rule.lhs, host);
  return m.run();
}

Diagram apply(const RewriteRule& rule, const Diagram& host, const Embedding& embedding) {
  const Diagram& lhs = rule.lhs;
  const Diagram& rhs = rule.rhs;
  if (lhs.n_inputs != rhs.n_inputs || lhs.n_outputs != rhs.n_outputs) {
    throw RewriteError("rule '" + rule.name + "' has mismatched boundaries");
  }

  const std::size_t pn = lhs.nodes.size();
  const std::size_t pw = lhs.wires.size();
  std::vector<int> node_map(pn, -1);
  std::vector<char> matched(host.nodes.size(), 0);
  if (embedding.node_map.size() != pn || embedding.wire_map.size() != pw) {
    throw RewriteError("stale embedding: shape does not match the rule");
  }
  for (const auto& [p, h] : embedding.node_map) {
    if (p < 0 || static_cast<std::size_t>(p) >= pn || h < 0 ||
        static_cast<std::size_t>(h) >= host.nodes.size() ||
        matched[static_cast<std::size_t>(h)] ||
        !lhs.nodes[static_cast<std::size_t>(p)].same_kind(
            host.nodes[static_cast<std::size_t>(h)])) {
      throw RewriteError("stale embedding: node map does not fit this diagram");
    }
    node_map[static_cast<std::size_t>(p)] = h;
    matched[static_cast<std::size_t>(h)] = 1;
  }

  auto mapped = [&node_map](const Endpoint& e) -> std::optional<Endpoint> {
    if (e.tag == Endpoint::Tag::node_out) {
      return Endpoint::node_out(node_map[static_cast<std::size_t>(e.node)], e.port);
    }
    if (e.tag == Endpoint::Tag::node_in) {
      return Endpoint::node_in(node_map[static_cast<std::size_t>(e.node)], e.port);
    }
    return std::nullopt;
  };

  std::set<int> claimed;
  std::vector<Endpoint> in_bind(static_cast<std::size_t>(lhs.n_inputs));
  std::vector<Endpoint> out_bind(static_cast<std::size_t>(lhs.n_outputs));
  for (std::size_t i = 0; i < pw; ++i) {
    const int hwi = embedding.wire_map[i];
    if (hwi < 0 || static_cast<std::size_t>(hwi) >= host.wires.size() ||
        !claimed.insert(hwi).second) {
      throw RewriteError("stale embedding: wire map does not fit this diagram");
    }
    const Wire& p = lhs.wires[i];
    const Wire& h = host.wires[static_cast<std::size_t>(hwi)];
    const std::optional<Endpoint> src = mapped(p.src);
    const std::optional<Endpoint> dst = mapped(p.dst);
    if (src && !(h.src == *src)) throw RewriteError("stale embedding: wire moved");
    if (dst && !(h.dst == *dst)) throw RewriteError("stale embedding: wire moved");
    if (!src && endpoint_on_node_set(h.src, matched)) {
      throw RewriteError("stale embedding: boundary wire starts inside the match");
    }
    if (!dst && endpoint_on_node_set(h.dst, matched)) {
      throw RewriteError("stale embedding: boundary wire ends inside the match");
    }
    if (p.src.tag == Endpoint::Tag::boundary_in) {
      in_bind[static_cast<std::size_t>(p.src.node)] = h.src;
    }
    if (p.dst.tag == Endpoint::Tag::boundary_out) {
      out_bind[static_cast<std::size_t>(p.dst.node)] = h.dst;
    }
  }

  Diagram nd;
  nd.n_inputs = host.n_inputs;
  nd.n_outputs = host.n_outputs;
  std::vector<int> host_remap(host.nodes.size(), -1);
  for (std::size_t h = 0; h < host.nodes.size(); ++h) {
    if (!matched[h]) host_remap[h] = nd.add_node(host.nodes[h]);
  }
  std::vector<int> rhs_remap(rhs.nodes.size(), -1);
  for (std::size_t q = 0; q < rhs.nodes.size(); ++q) {
    rhs_remap[q] = nd.add_node(rhs.nodes[q]);
  }

  auto remap_host = [&host_remap](const Endpoint& e) {
    if (e.tag == Endpoint::Tag::node_out) {
      return Endpoint::node_out(host_remap[static_cast<std::size_t>(e.node)], e.port);
    }
    if (e.tag == Endpoint::Tag::node_in) {
      return Endpoint::node_in(host_remap[static_cast<std::size_t>(e.node)], e.port);
    }
    return e;
  };

  for (std::size_t j = 0; j < host.wires.size(); ++j) {
    if (claimed.count(static_cast<int>(j))) continue;
    nd.wires.push_back(
        {remap_host(host.wires[j].src), remap_host(host.wires[j].dst)});
  }
  for (const Wire& w : rhs.wires) {
    Endpoint src, dst;
    if (w.src.tag == Endpoint::Tag::boundary_in) {
      src = remap_host(in_bind[static_cast<std::size_t>(w.src.node)]);
    } else {
      src = Endpoint::node_out(rhs_remap[static_cast<std::size_t>(w.src.node)],
                               w.src.port);
    }
    if (w.dst.tag == Endpoint::Tag::boundary_out) {
      dst = remap_host(out_bind[static_cast<std::size_t>(w.dst.node)]);
    } else {
      dst = Endpoint::node_in(rhs_remap[static_cast<std::size_t>(w.dst.node)],
                              w.dst.port);
    }
    nd.wires.push_back({src, dst});
  }

  try {
    nd.validate();
  } catch (const std::exception& e) {
    throw RewriteError(std::string("rewrite produced an ill-formed diagram: ") +
                       e.what());
  }
  return nd;
}

std::string algebra_kind_name(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::scfa: return "scfa";
    case AlgebraKind::acfa: return "acfa";
    case AlgebraKind::cfa: return "cfa";
  }
  return "cfa";
}

AlgebraKind algebra_kind_from_name(const std::string& name) {
  if (name == "scfa") return AlgebraKind::scfa;
  if (name == "acfa") return AlgebraKind::acfa;
  if (name == "cfa") return AlgebraKind::cfa;
  throw RewriteError("unknown algebra kind '" + name + "'");
}

NormalForm NormalForm::spider(int n, int m, int loops) {
  NormalForm nf;
  nf.variant = Variant::spider;
  nf.n = n;
  nf.m = m;
  nf.loops = loops;
  return nf;
}

NormalForm NormalForm::zero(int n, int m) {
  NormalForm nf;
  nf.variant = Variant::acfa_zero;
  nf.n = n;
  nf.m = m;
  return nf;
}

NormalForm NormalForm::loop_product(int lollis_out, int colollis_in,
                                    int inverse_dim_power) {
  NormalForm nf;
  nf.variant = Variant::acfa_loop_product;
  nf.lollis_out = lollis_out;
  nf.colollis_in = colollis_in;
  nf.inverse_dim_power = inverse_dim_power;
  nf.n = colollis_in;
  nf.m = lollis_out;
  return nf;
}

NormalForm NormalForm::closed_scalar(cplx value) {
  NormalForm nf;
  nf.variant = Variant::scalar;
  nf.value = value;
  return nf;
}

bool NormalForm::operator==(const NormalForm& other) const {
  return variant == other.variant && n == other.n && m == other.m &&
         loops == other.loops && lollis_out == other.lollis_out &&
         colollis_in == other.colollis_in &&
         inverse_dim_power == other.inverse_dim_power && value == other.value;
}

std::string NormalForm::str() const {
  std::ostringstream os;
  switch (variant) {
    case Variant::spider:
      os << "spider(" << n << "," << m << ")";
      if (loops > 0) os << "+" << loops << "loop";
      break;
    case Variant::acfa_zero:
      os << "zero(" << n << "," << m << ")";
      break;
    case Variant::acfa_loop_product:
      os << "loop-product(lollis=" << lollis_out << ",colollis=" << colollis_in
         << ",inv_dim_pow=" << inverse_dim_power << ")";
      break;
    case Variant::scalar:
      os << "scalar(" << value.real();
      if (value.imag() != 0.0) os << (value.imag() < 0 ? "" : "+") << value.imag() << "i";
      os << ")";
      break;
  }
  return os.str();
}

namespace {

// Appends a left-comb spider (with optional explicit comult-mult loops in
// the middle) wired to the given original boundary slots.
void append_spider_piece(Diagram& nd, const std::string& alg,
                         const std::vector<int>& in_slots,
                         const std::vector<int>& out_slots, int loops) {
  const std::size_t n = in_slots.size();
  const std::size_t m = out_slots.size();
  Endpoint spine;
  if (n == 0) {
    const int u = nd.add_node(NodeKind::generator(alg, GenOp::unit));
    spine = Endpoint::node_out(u, 0);
  } else {
    spine = Endpoint::boundary_in(in_slots[0]);
    for (std::size_t k = 1; k < n; ++k) {
      const int mu = nd.add_node(NodeKind::generator(alg, GenOp::mult));
      nd.wires.push_back({spine, Endpoint::node_in(mu, 0)});
      nd.wires.push_back({Endpoint::boundary_in(in_slots[k]), Endpoint::node_in(mu, 1)});
      spine = Endpoint::node_out(mu, 0);
    }
  }
  for (int l = 0; l < loops; ++l) {
    const int de = nd.add_node(NodeKind::generator(alg, GenOp::comult));
    const int mu = nd.add_node(NodeKind::generator(alg, GenOp::mult));
    nd.wires.push_back({spine, Endpoint::node_in(de, 0)});
    nd.wires.push_back({Endpoint::node_out(de, 0), Endpoint::node_in(mu, 0)});
    nd.wires.push_back({Endpoint::node_out(de, 1), Endpoint::node_in(mu, 1)});
    spine = Endpoint::node_out(mu, 0);
  }
  if (m == 0) {
    const int c = nd.add_node(NodeKind::generator(alg, GenOp::counit));
    nd.wires.push_back({spine, Endpoint::node_in(c, 0)});
  } else {
    Endpoint cur = spine;
    for (std::size_t i = m - 1; i >= 1; --i) {
      const int de = nd.add_node(NodeKind::generator(alg, GenOp::comult));
      nd.wires.push_back({cur, Endpoint::node_in(de, 0)});
      nd.wires.push_back({Endpoint::node_out(de, 1), Endpoint::boundary_out(out_slots[i])});
      cur = Endpoint::node_out(de, 0);
    }
    nd.wires.push_back({cur, Endpoint::boundary_out(out_slots[0])});
  }
}

void append_scalar_piece(Diagram& nd, cplx value) {
  nd.add_node(NodeKind::state("scale", std::vector<cplx>{value}, 0));
}

void append_lolli_piece(Diagram& nd, const std::string& alg, int out_slot) {
  const int cu = nd.add_node(NodeKind::generator(alg, GenOp::cup));
  const int de = nd.add_node(NodeKind::generator(alg, GenOp::comult));
  const int ca = nd.add_node(NodeKind::generator(alg, GenOp::cap));
  nd.wires.push_back({Endpoint::node_out(cu, 0), Endpoint::node_in(de, 0)});
  nd.wires.push_back({Endpoint::node_out(de, 0), Endpoint::boundary_out(out_slot)});
  nd.wires.push_back({Endpoint::node_out(de, 1), Endpoint::node_in(ca, 0)});
  nd.wires.push_back({Endpoint::node_out(cu, 1), Endpoint::node_in(ca, 1)});
}

void append_cololli_piece(Diagram& nd, const std::string& alg, int in_slot) {
  const int cu = nd.add_node(NodeKind::generator(alg, GenOp::cup));
  const int mu = nd.add_node(NodeKind::generator(alg, GenOp::mult));
  const int ca = nd.add_node(NodeKind::generator(alg, GenOp::cap));
  nd.wires.push_back({Endpoint::node_out(cu, 0), Endpoint::node_in(mu, 0)});
  nd.wires.push_back({Endpoint::boundary_in(in_slot), Endpoint::node_in(mu, 1)});
  nd.wires.push_back({Endpoint::node_out(mu, 0), Endpoint::node_in(ca, 0)});
  nd.wires.push_back({Endpoint::node_out(cu, 1), Endpoint::node_in(ca, 1)});
}

std::string single_algebra_of(const Diagram& d, const char* who) {
  std::string alg;
  for (const NodeKind& k : d.nodes) {
    if (k.tag == NodeKind::Tag::tick) {
      throw RewriteError(std::string(who) + ": tick nodes are not allowed");
    }
    if (k.tag != NodeKind::Tag::generator) {
      throw RewriteError(std::string(who) + ": variable nodes are not allowed");
    }
    if (alg.empty()) {
      alg = k.algebra;
    } else if (alg != k.algebra) {
      throw RewriteError(std::string(who) + ": mixed-algebra diagram");
    }
  }
  return alg;
}

}  // namespace

NormalizeResult normalize_single(const Diagram& d, AlgebraKind kind) {
  d.validate();
  const std::string alg = single_algebra_of(d, "normalize_single");

  const std::vector<ComponentView> comps = split_components(d);
  const std::vector<int> loops = loop_count(d);

  NormalizeResult res;
  res.canonical.n_inputs = d.n_inputs;
  res.canonical.n_outputs = d.n_outputs;

  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::vector<int>& ins = comps[i].input_slots;
    const std::vector<int>& outs = comps[i].output_slots;
    const int n = static_cast<int>(ins.size());
    const int m = static_cast<int>(outs.size());
    const int l = loops[i];

    switch (kind) {
      case AlgebraKind::scfa:
        res.components.push_back(NormalForm::spider(n, m));
        append_spider_piece(res.canonical, alg, ins, outs, 0);
        break;
      case AlgebraKind::cfa:
        res.components.push_back(NormalForm::spider(n, m, l));
        append_spider_piece(res.canonical, alg, ins, outs, l);
        break;
      case AlgebraKind::acfa:
        if (l == 0) {
          res.components.push_back(NormalForm::spider(n, m));
          append_spider_piece(res.canonical, alg, ins, outs, 0);
        } else if (l == 1 && n + m == 0) {
          res.components.push_back(NormalForm::closed_scalar(cplx(2.0, 0.0)));
          append_scalar_piece(res.canonical, cplx(2.0, 0.0));
        } else if (l == 1) {
          res.components.push_back(NormalForm::loop_product(m, n, n + m - 1));
          append_scalar_piece(res.canonical, cplx(std::pow(2.0, 1 - n - m), 0.0));
          for (int s : outs) append_lolli_piece(res.canonical, alg, s);
          for (int s : ins) append_cololli_piece(res.canonical, alg, s);
        } else {
          res.components.push_back(NormalForm::zero(n, m));
          append_scalar_piece(res.canonical, cplx(0.0, 0.0));
          append_spider_piece(res.canonical, alg, ins, outs, 0);
        }
        break;
    }
  }

  res.canonical.validate();
  return res;
}

bool decide_equal(const Diagram& a, const Diagram& b, AlgebraKind kind,
                  const Tolerance& tol) {
  if (a.n_inputs != b.n_inputs || a.n_outputs != b.n_outputs) return false;
  const std::string alg_a = single_algebra_of(a, "decide_equal");
  const std::string alg_b = single_algebra_of(b, "decide_equal");
  if (!alg_a.empty() && !alg_b.empty() && alg_a != alg_b) {
    throw RewriteError("decide_equal: diagrams use different algebras");
  }

  const NormalizeResult na = normalize_single(a, kind);
  const NormalizeResult nb = normalize_single(b, kind);
  const std::vector<ComponentView> ca = split_components(a);
  const std::vector<ComponentView> cb = split_components(b);

  if (kind == AlgebraKind::acfa) {
    auto is_zero = [&tol](const std::vector<NormalForm>& nfs) {
      for (const NormalForm& nf : nfs) {
        if (nf.variant == NormalForm::Variant::acfa_zero) return true;
        if (nf.variant == NormalForm::Variant::spider && nf.n == 0 && nf.m == 0) {
          // A closed loop-free component evaluates to counit(unit) = 0.
          return true;
        }
        if (nf.variant == NormalForm::Variant::scalar &&
            std::abs(nf.value) <= tol.abs_eps) {
          return true;
        }
      }
      return false;
    };
    const bool za = is_zero(na.components);
    const bool zb = is_zero(nb.components);
    if (za || zb) return za == zb;
  }

  struct OpenComp {
    std::vector<int> ins;
    std::vector<int> outs;
    NormalForm nf;
  };
  auto collect = [](const std::vector<ComponentView>& views,
                    const std::vector<NormalForm>& nfs) {
    std::vector<OpenComp> open;
    std::vector<std::string> closed;
    for (std::size_t i = 0; i < views.size(); ++i) {
      if (views[i].input_slots.empty() && views[i].output_slots.empty()) {
        closed.push_back(nfs[i].str());
      } else {
        open.push_back({views[i].input_slots, views[i].output_slots, nfs[i]});
      }
    }
    std::sort(open.begin(), open.end(), [](const OpenComp& x, const OpenComp& y) {
      return std::tie(x.ins, x.outs) < std::tie(y.ins, y.outs);
    });
    std::sort(closed.begin(), closed.end());
    return std::pair(std::move(open), std::move(closed));
  };

  auto [open_a, closed_a] = collect(ca, na.components);
  auto [open_b, closed_b] = collect(cb, nb.components);
  if (open_a.size() != open_b.size()) return false;
  for (std::size_t i = 0; i < open_a.size(); ++i) {
    if (open_a[i].ins != open_b[i].ins || open_a[i].outs != open_b[i].outs ||
        !(open_a[i].nf == open_b[i].nf)) {
      return false;
    }
  }
  return closed_a == closed_b;
}

Diagram random_diagram(std::uint64_t seed, int max_nodes, DiagramMix mix,
                       bool require_connected) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> algebras;
  bool ticks = false;
  switch (mix) {
    case DiagramMix::ghz_only: algebras = {"ghz"}; break;
    case DiagramMix::w_only: algebras = {"w"}; break;
    case DiagramMix::mixed: algebras = {"ghz", "w"}; ticks = true; break;
  }

  for (int attempt = 0; attempt < 500; ++attempt) {
    Diagram d;
    const int n_in = static_cast<int>(rng() % 3);
    d.n_inputs = n_in;
    std::vector<Endpoint> open;
    for (int i = 0; i < n_in; ++i) open.push_back(Endpoint::boundary_in(i));

    const int target = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_nodes));
    while (static_cast<int>(d.nodes.size()) < target) {
      NodeKind kind = NodeKind::generator(algebras[rng() % algebras.size()], GenOp::mult);
      const int roll = static_cast<int>(rng() % (ticks ? 7 : 6));
      switch (roll) {
        case 0: kind.op = GenOp::mult; break;
        case 1: kind.op = GenOp::comult; break;
        case 2: kind.op = GenOp::unit; break;
        case 3: kind.op = GenOp::counit; break;
        case 4: kind.op = GenOp::cap; break;
        case 5: kind.op = GenOp::cup; break;
        default: kind = NodeKind::tick(); break;
      }
      const int need = kind.in_ports();
      if (need > static_cast<int>(open.size())) {
        kind = NodeKind::generator(algebras[rng() % algebras.size()],
                                   rng() % 2 == 0 ? GenOp::unit : GenOp::cup);
      }
      const int id = d.add_node(kind);
      for (int p = 0; p < d.nodes[static_cast<std::size_t>(id)].in_ports(); ++p) {
        const std::size_t pick = rng() % open.size();
        d.wires.push_back({open[pick], Endpoint::node_in(id, p)});
        open[pick] = open.back();
        open.pop_back();
      }
      for (int p = 0; p < d.nodes[static_cast<std::size_t>(id)].out_ports(); ++p) {
        open.push_back(Endpoint::node_out(id, p));
      }
    }

    d.n_outputs = static_cast<int>(open.size());
    for (std::size_t j = 0; j < open.size(); ++j) {
      d.wires.push_back({open[j], Endpoint::boundary_out(static_cast<int>(j))});
    }
    d.validate();
    if (!require_connected || is_connected(d)) return d;
  }
  throw RewriteError("random_diagram: no connected sample found for this seed");
}

SoundnessReport soundness_harness(std::uint64_t seed, int trials, DiagramMix mix,
                                  const Tolerance& tol) {
  const SemanticsTable sem = canonical_semantics();
  const std::vector<RewriteRule>& catalog = builtin_rules();
  std::vector<RewriteRule> reversed_rules;
  reversed_rules.reserve(catalog.size());
  for (const RewriteRule& r : catalog) reversed_rules.push_back(reversed(r));
  std::mt19937_64 rng(seed);

  SoundnessReport report;
  report.trials = trials;
  report.pass = true;

  for (int t = 0; t < trials; ++t) {
    const Diagram d = random_diagram(rng(), 10, mix);

    std::vector<std::pair<const RewriteRule*, Embedding>> sites;
    for (const std::vector<RewriteRule>* rules :
         {&catalog, static_cast<const std::vector<RewriteRule>*>(&reversed_rules)}) {
      for (const RewriteRule& r : *rules) {
        for (Embedding& e : find_matches(r, d)) {
          sites.emplace_back(&r, std::move(e));
        }
      }
    }
    if (sites.empty()) continue;

    const auto& [rule, emb] = sites[rng() % sites.size()];
    Diagram after;
    try {
      after = apply(*rule, d, emb);
    } catch (const RewriteError&) {
      // The splice would need a feedback wire the diagram form cannot
      // express; skip the site.
      continue;
    }

    const Tensor before_val = evaluate(d, sem);
    const Tensor after_val = evaluate(after, sem);
    const Tensor want = rule->scalar * before_val;
    const double resid = distance(after_val, want);
    const double floor =
        tol.abs_eps + tol.rel_eps * std::max(1.0, std::max(after_val.norm(), want.norm()));
    report.max_residual = std::max(report.max_residual, resid);
    if (resid > floor) report.pass = false;
    ++report.applications;
  }

  if (trials > 0 && report.applications == 0) report.pass = false;
  return report;
}

}  // namespace ghzw
