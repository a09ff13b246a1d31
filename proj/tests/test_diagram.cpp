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

#include <string>
#include <vector>

#include "doctest.h"
#include "ghzw/cfa.hpp"
#include "ghzw/dsl.hpp"
#include "ghzw/eval.hpp"

using namespace ghzw;

namespace {

Diagram spider_diagram_03(const std::string& alg) {
  // unit, then comult, then comult on the first output: a 0 -> 3 spider.
  Diagram d = compose_seq(generator_diagram(alg, GenOp::unit),
                          generator_diagram(alg, GenOp::comult));
  return compose_seq(
      d, compose_par(generator_diagram(alg, GenOp::comult), identity_diagram()));
}

}  // namespace

TEST_CASE("validate rejects reused and dangling ports") {
  Diagram d;
  d.n_outputs = 2;
  int n = d.add_node(NodeKind::generator("ghz", GenOp::unit));
  d.wires.push_back({Endpoint::node_out(n, 0), Endpoint::boundary_out(0)});
  SUBCASE("dangling boundary slot") { CHECK_THROWS_AS(d.validate(), DiagramError); }
  SUBCASE("source port used twice") {
    d.wires.push_back({Endpoint::node_out(n, 0), Endpoint::boundary_out(1)});
    CHECK_THROWS_AS(d.validate(), DiagramError);
  }
  SUBCASE("well formed") {
    d.n_outputs = 1;
    CHECK_NOTHROW(d.validate());
  }
}

TEST_CASE("validate rejects a wireless cycle") {
  Diagram d;
  d.n_inputs = 1;
  d.n_outputs = 1;
  int a = d.add_node(NodeKind::generator("ghz", GenOp::comult));
  int b = d.add_node(NodeKind::generator("ghz", GenOp::mult));
  d.wires.push_back({Endpoint::boundary_in(0), Endpoint::node_in(a, 0)});
  d.wires.push_back({Endpoint::node_out(a, 0), Endpoint::node_in(b, 0)});
  d.wires.push_back({Endpoint::node_out(a, 1), Endpoint::node_in(b, 1)});
  d.wires.push_back({Endpoint::node_out(b, 0), Endpoint::boundary_out(0)});
  CHECK_NOTHROW(d.validate());  // a doubled edge is a loop, not a cycle

  Diagram cyc;
  int c1 = cyc.add_node(NodeKind::generator("ghz", GenOp::comult));
  int c2 = cyc.add_node(NodeKind::generator("ghz", GenOp::mult));
  cyc.n_inputs = 1;
  cyc.n_outputs = 1;
  cyc.wires.push_back({Endpoint::node_out(c1, 0), Endpoint::node_in(c2, 0)});
  cyc.wires.push_back({Endpoint::node_out(c2, 0), Endpoint::node_in(c1, 0)});
  cyc.wires.push_back({Endpoint::boundary_in(0), Endpoint::node_in(c2, 1)});
  cyc.wires.push_back({Endpoint::node_out(c1, 1), Endpoint::boundary_out(0)});
  CHECK_THROWS_AS(cyc.validate(), DiagramError);
}

TEST_CASE("sequential composition satisfies the identity law up to iso") {
  Diagram delta = generator_diagram("ghz", GenOp::comult);
  Diagram rhs = compose_seq(delta, identity_diagram(2));
  Diagram lhs = compose_seq(identity_diagram(1), delta);
  CHECK(iso_check(lhs, delta));
  CHECK(iso_check(rhs, delta));
  CHECK(iso_check(compose_par(empty_diagram(), delta), delta));
}

TEST_CASE("iso_check distinguishes kinds and wirings") {
  CHECK_FALSE(iso_check(generator_diagram("ghz", GenOp::mult),
                        generator_diagram("w", GenOp::mult)));
  CHECK_FALSE(iso_check(generator_diagram("ghz", GenOp::mult),
                        generator_diagram("ghz", GenOp::comult)));
  Diagram d1 = generator_diagram("ghz", GenOp::comult);
  Diagram swapped = compose_seq(d1, swap_diagram());
  CHECK_FALSE(iso_check(d1, swapped));

  // Node order is irrelevant.
  Diagram two_units;
  two_units.n_outputs = 2;
  int u1 = two_units.add_node(NodeKind::generator("ghz", GenOp::unit));
  int u2 = two_units.add_node(NodeKind::generator("w", GenOp::unit));
  two_units.wires.push_back({Endpoint::node_out(u1, 0), Endpoint::boundary_out(0)});
  two_units.wires.push_back({Endpoint::node_out(u2, 0), Endpoint::boundary_out(1)});

  Diagram reordered;
  reordered.n_outputs = 2;
  int v2 = reordered.add_node(NodeKind::generator("w", GenOp::unit));
  int v1 = reordered.add_node(NodeKind::generator("ghz", GenOp::unit));
  reordered.wires.push_back({Endpoint::node_out(v1, 0), Endpoint::boundary_out(0)});
  reordered.wires.push_back({Endpoint::node_out(v2, 0), Endpoint::boundary_out(1)});
  CHECK(iso_check(two_units, reordered));
}

TEST_CASE("components split and reassemble") {
  Diagram d = compose_par(spider_diagram_03("ghz"),
                          generator_diagram("w", GenOp::counit));
  CHECK_FALSE(is_connected(d));
  auto views = split_components(d);
  REQUIRE(views.size() == 2);
  CHECK(views[0].output_slots == std::vector<int>{0, 1, 2});
  CHECK(views[1].input_slots == std::vector<int>{0});
  CHECK(is_connected(views[0].diagram));
  CHECK(is_connected(views[1].diagram));
}

TEST_CASE("loop_count sees independent cycles") {
  CHECK(loop_count(spider_diagram_03("w")) == std::vector<int>{0});

  Diagram once = compose_seq(generator_diagram("w", GenOp::comult),
                             generator_diagram("w", GenOp::mult));
  CHECK(loop_count(once) == std::vector<int>{1});

  // Two stacked comult/mult pairs share a middle edge: two independent loops.
  Diagram twice = compose_seq(
      compose_seq(generator_diagram("w", GenOp::comult),
                  compose_par(generator_diagram("w", GenOp::comult),
                              identity_diagram())),
      compose_seq(compose_par(generator_diagram("w", GenOp::mult),
                              identity_diagram()),
                  generator_diagram("w", GenOp::mult)));
  CHECK(loop_count(twice) == std::vector<int>{2});
}

TEST_CASE("dsl parses generators composition and variables") {
  Diagram spider = parse_dsl("(seq (unit ghz) (comult ghz) (par (comult ghz) id))");
  CHECK(spider.n_inputs == 0);
  CHECK(spider.n_outputs == 3);
  CHECK(iso_check(spider, spider_diagram_03("ghz")));

  Diagram ticks = parse_dsl("(par tick tick)");
  CHECK(ticks.n_inputs == 2);
  CHECK(ticks.n_outputs == 2);

  Diagram with_state = parse_dsl("(seq (state psi 0.6 0.8) (comult w))");
  CHECK(with_state.n_outputs == 2);
  REQUIRE(with_state.nodes.size() == 2);
  CHECK(with_state.nodes[0].tag == NodeKind::Tag::variable_state);
  REQUIRE(with_state.nodes[0].vec.has_value());
  CHECK((*with_state.nodes[0].vec)[1] == cplx(0.8));

  Diagram symbolic = parse_dsl("(state x)");
  CHECK_FALSE(symbolic.nodes[0].vec.has_value());
}

TEST_CASE("dsl rejects malformed input") {
  // Two 2 -> 1 maps cannot be chained directly.
  CHECK_THROWS_AS(parse_dsl("(seq (mult ghz) (mult ghz))"), ParseError);
  CHECK_THROWS_AS(parse_dsl("(mult nosuch)"), ParseError);
  CHECK_THROWS_AS(parse_dsl("(seq id"), ParseError);
  CHECK_THROWS_AS(parse_dsl("(frobnicate ghz)"), ParseError);
  CHECK_THROWS_AS(parse_dsl("(state psi 1 2 3)"), ParseError);  // length not 2^k
  CHECK_THROWS_AS(parse_dsl(""), ParseError);
}

TEST_CASE("dsl diagrams survive the json round trip") {
  const char* texts[] = {
      "(seq (unit ghz) (comult ghz) (par (comult ghz) id))",
      "(seq (comult w) (mult w))",
      "(par (state psi 0.5 -0.5i) (seq tick (effect e 1 2)))",
      "swap",
  };
  for (const char* t : texts) {
    CAPTURE(t);
    Diagram d = parse_dsl(t);
    Diagram back = from_json(to_json(d));
    CHECK(iso_check(d, back));
  }
}

TEST_CASE("from_json rejects schema violations") {
  CHECK_THROWS_AS(from_json("{}"), DiagramError);
  CHECK_THROWS_AS(from_json("[1,2]"), DiagramError);
  CHECK_THROWS_AS(from_json(R"({"schema":2,"n_inputs":0,"n_outputs":0,)"
                            R"("nodes":[],"wires":[]})"),
                  DiagramError);
  // Structurally valid json whose wires reuse a port.
  CHECK_THROWS_AS(
      from_json(R"({"schema":1,"n_inputs":0,"n_outputs":2,"nodes":)"
                R"([{"kind":"generator","algebra":"ghz","op":"unit"}],)"
                R"("wires":[[["out",0,0],["bout",0]],[["out",0,0],["bout",1]]]})"),
      DiagramError);
}

TEST_CASE("to_dot names boundaries and collapses tick chains") {
  std::string dot = to_dot(spider_diagram_03("w"));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("out0") != std::string::npos);
  CHECK(dot.find("out2") != std::string::npos);

  std::string ticked = to_dot(parse_dsl("(seq (comult ghz) (par tick id) (mult ghz))"));
  CHECK(ticked.find("tick") != std::string::npos);
}

TEST_CASE("evaluate matches hand tensors on small diagrams") {
  SemanticsTable table = canonical_semantics();

  Tensor ghz3 = evaluate(spider_diagram_03("ghz"), table);
  CHECK(distance(ghz3, Tensor::state(3, {cplx(1), 0, 0, 0, 0, 0, 0, cplx(1)})) <
        1e-12);

  Tensor w3 = evaluate(spider_diagram_03("w"), table);
  CHECK(distance(w3, Tensor::state(3, {0, cplx(1), cplx(1), 0, cplx(1), 0, 0, 0})) <
        1e-12);

  CHECK(distance(evaluate(parse_dsl("tick"), table),
                 compose(Tensor::ket({1}), Tensor::bra({0})) +
                     compose(Tensor::ket({0}), Tensor::bra({1}))) < 1e-12);

  CHECK(distance(evaluate(swap_diagram(), table), Tensor::swap()) == 0.0);

  // A closed loop evaluates to the dimension.
  Tensor circle = evaluate(parse_dsl("(seq (cup ghz) (cap ghz))"), table);
  CHECK(std::abs(circle.scalar_value() - cplx(2.0)) < 1e-12);
}

TEST_CASE("evaluate resolves bound variables and rejects symbolic ones") {
  SemanticsTable table = canonical_semantics();
  Tensor v = evaluate(parse_dsl("(state psi 0.6 0.8)"), table);
  CHECK(distance(v, Tensor::state1({cplx(0.6), cplx(0.8)})) < 1e-12);
  CHECK_THROWS_AS(evaluate(parse_dsl("(state psi)"), table), EvalError);
  CHECK_THROWS_AS(evaluate(generator_diagram("nosuch", GenOp::mult), table),
                  EvalError);
}

TEST_CASE("evaluate is monoidal") {
  SemanticsTable table = canonical_semantics();
  Diagram a = parse_dsl("(seq (unit w) (comult w))");
  Diagram b = parse_dsl("(cap ghz)");
  Tensor joint = evaluate(compose_par(a, b), table);
  CHECK(distance(joint, kron(evaluate(a, table), evaluate(b, table))) < 1e-12);

  Diagram chained = compose_seq(a, generator_diagram("w", GenOp::mult));
  CHECK(distance(evaluate(chained, table),
                 compose(w_algebra().mult, evaluate(a, table))) < 1e-12);
}
