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

#include "ghzw/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ghzw/dsl.hpp"

namespace ghzw {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json complex_to_json(const cplx& z) {
  return ordered_json::array({z.real(), z.imag()});
}

cplx complex_from_json(const ordered_json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw IoError(std::string(where) + ": complex entries must be [re, im] pairs");
  }
  return cplx(j[0].get<double>(), j[1].get<double>());
}

ordered_json tensor_record(const Tensor& t) {
  ordered_json j;
  j["in"] = t.in_arity();
  j["out"] = t.out_arity();
  j["dim"] = t.dim();
  ordered_json entries = ordered_json::array();
  for (const cplx& z : t.entries()) entries.push_back(complex_to_json(z));
  j["entries"] = std::move(entries);
  return j;
}

Tensor tensor_from_record(const ordered_json& j, const char* where) {
  if (!j.is_object() || !j.contains("in") || !j.contains("out") ||
      !j.contains("entries")) {
    throw IoError(std::string(where) + ": expected {in, out, dim, entries}");
  }
  const int in = j["in"].get<int>();
  const int out = j["out"].get<int>();
  const int dim = j.value("dim", 2);
  if (in < 0 || out < 0 || dim < 2) {
    throw IoError(std::string(where) + ": bad tensor shape");
  }
  Tensor t(in, out, dim);
  const ordered_json& entries = j["entries"];
  if (!entries.is_array() || entries.size() != t.entries().size()) {
    std::ostringstream os;
    os << where << ": expected " << t.entries().size() << " entries, got "
       << (entries.is_array() ? entries.size() : 0);
    throw IoError(os.str());
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    t.entries()[i] = complex_from_json(entries[i], where);
  }
  return t;
}

ordered_json endpoint_record(const Endpoint& e) {
  switch (e.tag) {
    case Endpoint::Tag::node_out:
      return ordered_json::array({"out", e.node, e.port});
    case Endpoint::Tag::node_in:
      return ordered_json::array({"in", e.node, e.port});
    case Endpoint::Tag::boundary_in:
      return ordered_json::array({"bin", e.node});
    case Endpoint::Tag::boundary_out:
      return ordered_json::array({"bout", e.node});
  }
  throw IoError("endpoint_record: unreachable");
}

Endpoint endpoint_from_record(const ordered_json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_string()) {
    throw DiagramError("diagram JSON: endpoints are [tag, ...] arrays");
  }
  const std::string tag = j[0].get<std::string>();
  if (tag == "out" || tag == "in") {
    if (j.size() != 3) throw DiagramError("diagram JSON: node endpoints need [tag, node, port]");
    const int node = j[1].get<int>();
    const int port = j[2].get<int>();
    return tag == "out" ? Endpoint::node_out(node, port) : Endpoint::node_in(node, port);
  }
  if (tag == "bin" || tag == "bout") {
    if (j.size() != 2) throw DiagramError("diagram JSON: boundary endpoints need [tag, slot]");
    const int slot = j[1].get<int>();
    return tag == "bin" ? Endpoint::boundary_in(slot) : Endpoint::boundary_out(slot);
  }
  throw DiagramError("diagram JSON: unknown endpoint tag '" + tag + "'");
}

ordered_json diagram_record(const Diagram& d) {
  ordered_json j;
  j["schema"] = 1;
  j["n_inputs"] = d.n_inputs;
  j["n_outputs"] = d.n_outputs;
  ordered_json nodes = ordered_json::array();
  for (const NodeKind& k : d.nodes) {
    ordered_json nj;
    switch (k.tag) {
      case NodeKind::Tag::generator:
        nj["kind"] = "generator";
        nj["algebra"] = k.algebra;
        nj["op"] = gen_op_name(k.op);
        break;
      case NodeKind::Tag::tick:
        nj["kind"] = "tick";
        break;
      case NodeKind::Tag::variable_state:
      case NodeKind::Tag::variable_effect:
        nj["kind"] = k.tag == NodeKind::Tag::variable_state ? "state" : "effect";
        nj["name"] = k.name;
        nj["legs"] = k.legs;
        if (k.vec) {
          ordered_json v = ordered_json::array();
          for (const cplx& z : *k.vec) v.push_back(complex_to_json(z));
          nj["vec"] = std::move(v);
        }
        break;
    }
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  ordered_json wires = ordered_json::array();
  for (const Wire& w : d.wires) {
    wires.push_back(ordered_json::array({endpoint_record(w.src), endpoint_record(w.dst)}));
  }
  j["wires"] = std::move(wires);
  return j;
}

Diagram diagram_from_record(const ordered_json& j) {
  if (!j.is_object()) throw DiagramError("diagram JSON: expected an object");
  if (j.value("schema", 0) != 1) {
    throw DiagramError("diagram JSON: unsupported schema version");
  }
  Diagram d;
  d.n_inputs = j.value("n_inputs", 0);
  d.n_outputs = j.value("n_outputs", 0);
  if (!j.contains("nodes") || !j["nodes"].is_array() || !j.contains("wires") ||
      !j["wires"].is_array()) {
    throw DiagramError("diagram JSON: missing nodes or wires array");
  }
  for (const ordered_json& nj : j["nodes"]) {
    const std::string kind = nj.value("kind", "");
    if (kind == "generator") {
      const std::string alg = nj.value("algebra", "");
      const std::optional<GenOp> op = gen_op_from_name(nj.value("op", ""));
      if (alg.empty() || !op) {
        throw DiagramError("diagram JSON: generator nodes need an algebra and a valid op");
      }
      d.add_node(NodeKind::generator(alg, *op));
    } else if (kind == "tick") {
      d.add_node(NodeKind::tick());
    } else if (kind == "state" || kind == "effect") {
      const std::string name = nj.value("name", "");
      const int legs = nj.value("legs", 1);
      std::optional<std::vector<cplx>> vec;
      if (nj.contains("vec")) {
        std::vector<cplx> v;
        for (const ordered_json& z : nj["vec"]) {
          v.push_back(complex_from_json(z, "diagram JSON"));
        }
        vec = std::move(v);
      }
      if (kind == "state") {
        d.add_node(NodeKind::state(name, std::move(vec), legs));
      } else {
        d.add_node(NodeKind::effect(name, std::move(vec), legs));
      }
    } else {
      throw DiagramError("diagram JSON: unknown node kind '" + kind + "'");
    }
  }
  for (const ordered_json& wj : j["wires"]) {
    if (!wj.is_array() || wj.size() != 2) {
      throw DiagramError("diagram JSON: wires are [src, dst] pairs");
    }
    d.wires.push_back({endpoint_from_record(wj[0]), endpoint_from_record(wj[1])});
  }
  d.validate();
  return d;
}

ordered_json parse_or_throw(const std::string& text, const char* where) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string(where) + ": " + e.what());
  }
}

}  // namespace

std::string to_json(const Diagram& d) { return diagram_record(d).dump(2) + "\n"; }

Diagram from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DiagramError(std::string("diagram JSON: ") + e.what());
  }
  return diagram_from_record(j);
}

std::string tensor_to_json(const Tensor& t) { return tensor_record(t).dump(2) + "\n"; }

Tensor tensor_from_json(const std::string& text) {
  return tensor_from_record(parse_or_throw(text, "tensor JSON"), "tensor JSON");
}

std::string state_to_json(const Tensor& state) {
  if (state.in_arity() != 0) {
    throw IoError("state JSON: tensor has input legs");
  }
  ordered_json j;
  j["n"] = state.out_arity();
  ordered_json amps = ordered_json::array();
  for (const cplx& z : state.entries()) amps.push_back(complex_to_json(z));
  j["amplitudes"] = std::move(amps);
  return j.dump(2) + "\n";
}

Tensor state_from_json(const std::string& text) {
  const ordered_json j = parse_or_throw(text, "state JSON");
  if (!j.is_object() || !j.contains("n") || !j.contains("amplitudes")) {
    throw IoError("state JSON: expected {n, amplitudes}");
  }
  const int n = j["n"].get<int>();
  if (n < 0 || n > 24) throw IoError("state JSON: unreasonable qubit count");
  const ordered_json& amps = j["amplitudes"];
  const std::size_t want = std::size_t{1} << n;
  if (!amps.is_array() || amps.size() != want) {
    std::ostringstream os;
    os << "state JSON: expected " << want << " amplitudes, got "
       << (amps.is_array() ? amps.size() : 0);
    throw IoError(os.str());
  }
  std::vector<cplx> v(want);
  for (std::size_t i = 0; i < want; ++i) {
    v[i] = complex_from_json(amps[i], "state JSON");
  }
  return Tensor::state(n, v);
}

std::string cfa_to_json(const CFA& c) {
  ordered_json j;
  j["name"] = c.name;
  j["dim"] = c.dim;
  j["mult"] = tensor_record(c.mult);
  j["unit"] = tensor_record(c.unit);
  j["comult"] = tensor_record(c.comult);
  j["counit"] = tensor_record(c.counit);
  return j.dump(2) + "\n";
}

CFA cfa_from_json(const std::string& text) {
  const ordered_json j = parse_or_throw(text, "cfa JSON");
  if (!j.is_object() || !j.contains("mult") || !j.contains("unit") ||
      !j.contains("comult") || !j.contains("counit")) {
    throw IoError("cfa JSON: expected {name, dim, mult, unit, comult, counit}");
  }
  CFA c;
  c.name = j.value("name", "cfa");
  c.dim = j.value("dim", 2);
  c.mult = tensor_from_record(j["mult"], "cfa JSON mult");
  c.unit = tensor_from_record(j["unit"], "cfa JSON unit");
  c.comult = tensor_from_record(j["comult"], "cfa JSON comult");
  c.counit = tensor_from_record(j["counit"], "cfa JSON counit");
  return c;
}

std::string pair_to_json(const GhzwPair& p) {
  ordered_json j;
  j["schema"] = 1;
  j["scfa"] = parse_or_throw(cfa_to_json(p.scfa), "pair JSON");
  j["acfa"] = parse_or_throw(cfa_to_json(p.acfa), "pair JSON");
  j["tick"] = tensor_record(p.tick);
  return j.dump(2) + "\n";
}

GhzwPair pair_from_json(const std::string& text) {
  const ordered_json j = parse_or_throw(text, "pair JSON");
  if (!j.is_object() || !j.contains("scfa") || !j.contains("acfa")) {
    throw IoError("pair JSON: expected {scfa, acfa} with optional tick");
  }
  GhzwPair p;
  p.scfa = cfa_from_json(j["scfa"].dump());
  p.acfa = cfa_from_json(j["acfa"].dump());
  if (j.contains("tick")) {
    p.tick = tensor_from_record(j["tick"], "pair JSON tick");
  } else {
    p.tick = make_tick(p.scfa, p.acfa);
  }
  return p;
}

std::string rules_to_json(const std::vector<RewriteRule>& rules) {
  ordered_json j;
  j["schema"] = 1;
  ordered_json arr = ordered_json::array();
  for (const RewriteRule& r : rules) {
    ordered_json rj;
    rj["name"] = r.name;
    rj["lhs"] = diagram_record(r.lhs);
    rj["rhs"] = diagram_record(r.rhs);
    rj["scalar"] = complex_to_json(r.scalar);
    rj["bidirectional"] = r.bidirectional;
    arr.push_back(std::move(rj));
  }
  j["rules"] = std::move(arr);
  return j.dump(2) + "\n";
}

Diagram diagram_from_text(const std::string& text,
                          const std::set<std::string>& algebras) {
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
    if (ch == '{') return from_json(text);
    break;
  }
  return parse_dsl(text, algebras);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("short write to '" + path + "'");
}

}  // namespace ghzw
