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

#include "ghzw/cfa.hpp"

#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "ghzw/tensor.hpp"

using namespace ghzw;

namespace {

Tensor random_invertible(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    Tensor l(1, 1);
    for (auto& e : l.entries()) e = cplx(g(rng), g(rng));
    cplx det = l.at(0, 0) * l.at(1, 1) - l.at(0, 1) * l.at(1, 0);
    if (std::abs(det) > 0.3) return l;
  }
}

Tensor inverse2(const Tensor& l) {
  cplx det = l.at(0, 0) * l.at(1, 1) - l.at(0, 1) * l.at(1, 0);
  Tensor r(1, 1);
  r.at(0, 0) = l.at(1, 1) / det;
  r.at(0, 1) = -l.at(0, 1) / det;
  r.at(1, 0) = -l.at(1, 0) / det;
  r.at(1, 1) = l.at(0, 0) / det;
  return r;
}

double cfa_distance(const CFA& a, const CFA& b) {
  return std::max(std::max(distance(a.mult, b.mult), distance(a.unit, b.unit)),
                  std::max(distance(a.comult, b.comult),
                           distance(a.counit, b.counit)));
}

// |00..0> + |11..1> on m legs.
Tensor ghz_m(int m) {
  std::vector<cplx> a(std::size_t(1) << m);
  a.front() = 1;
  a.back() = 1;
  return Tensor::state(m, a);
}

// Equal superposition of the m one-hot basis states.
Tensor w_m(int m) {
  std::vector<cplx> a(std::size_t(1) << m);
  for (int b = 0; b < m; ++b) a[std::size_t(1) << b] = 1;
  return Tensor::state(m, a);
}

// The copy algebra of an orthonormal basis in dimension d.
CFA basis_cfa(int d) {
  CFA c;
  c.name = "basis";
  c.dim = d;
  c.mult = Tensor(2, 1, d);
  c.comult = Tensor(1, 2, d);
  c.unit = Tensor(0, 1, d);
  c.counit = Tensor(1, 0, d);
  for (int i = 0; i < d; ++i) {
    c.mult.at(i, i * d + i) = 1;
    c.comult.at(i * d + i, i) = 1;
    c.unit.at(i, 0) = 1;
    c.counit.at(0, i) = 1;
  }
  return c;
}

}  // namespace

TEST_CASE("canonical algebra tables") {
  CFA g = ghz_algebra();
  CHECK(g.mult.at(0, 0) == cplx(1.0));
  CHECK(g.mult.at(1, 3) == cplx(1.0));
  CHECK(g.mult.at(0, 1) == cplx(0.0));
  CHECK(g.unit == Tensor::state1({1, 1}));
  CHECK(g.comult.at(0, 0) == cplx(1.0));
  CHECK(g.comult.at(3, 1) == cplx(1.0));
  CHECK(g.counit == Tensor::effect1({1, 1}));

  CFA w = w_algebra();
  CHECK(w.mult.at(1, 3) == cplx(1.0));
  CHECK(w.mult.at(0, 1) == cplx(1.0));
  CHECK(w.mult.at(0, 2) == cplx(1.0));
  CHECK(w.mult.at(0, 0) == cplx(0.0));
  CHECK(w.unit == Tensor::state1({0, 1}));
  CHECK(w.comult.at(0, 0) == cplx(1.0));
  CHECK(w.comult.at(1, 1) == cplx(1.0));
  CHECK(w.comult.at(2, 1) == cplx(1.0));
  CHECK(w.counit == Tensor::effect1({1, 0}));
}

TEST_CASE("canonical algebras pass the axiom checks") {
  for (const CFA& c : {ghz_algebra(), w_algebra()}) {
    CfaReport rep = check_cfa(c);
    CHECK(rep.pass);
    CHECK(rep.max_residual < 1e-12);
  }
  CHECK(check_special(ghz_algebra()));
  CHECK_FALSE(check_special(w_algebra()));
  CHECK(check_antispecial(w_algebra()));
  CHECK_FALSE(check_antispecial(ghz_algebra()));

  // Anti-specialness pins mu . delta = 2|0><1| exactly.
  CFA w = w_algebra();
  Tensor md = compose(w.mult, w.comult);
  Tensor expect(1, 1);
  expect.at(0, 1) = 2.0;
  CHECK(distance(md, expect) == 0.0);
}

TEST_CASE("derived structure of the canonical algebras") {
  DerivedData g = derive(ghz_algebra());
  DerivedData w = derive(w_algebra());

  CHECK(std::abs(g.circle - cplx(2.0)) < 1e-12);
  CHECK(std::abs(w.circle - cplx(2.0)) < 1e-12);

  CHECK(distance(w.lolli, Tensor::state1({2, 0})) < 1e-12);
  CHECK(distance(w.cololli, Tensor::effect1({0, 2})) < 1e-12);

  CHECK(distance(g.cup, Tensor::state(2, {1, 0, 0, 1})) < 1e-12);
  Tensor cap_w(2, 0);
  cap_w.at(0, 1) = 1;
  cap_w.at(0, 2) = 1;
  CHECK(distance(w.cap, cap_w) < 1e-12);

  // counit . unit: 2 for the copying algebra, 0 for the one-hot algebra.
  CHECK(std::abs(compose(ghz_algebra().counit, ghz_algebra().unit).scalar_value() -
                 cplx(2.0)) < 1e-12);
  CHECK(std::abs(compose(w_algebra().counit, w_algebra().unit).scalar_value()) <
        1e-12);
}

TEST_CASE("spiders reproduce the closed-form states") {
  CFA g = ghz_algebra();
  CFA w = w_algebra();
  for (int m = 2; m <= 6; ++m) {
    CAPTURE(m);
    CHECK(distance(spider(g, 0, m), ghz_m(m)) < 1e-12);
    CHECK(distance(spider(w, 0, m), w_m(m)) < 1e-12);
  }
  CHECK(distance(spider(g, 1, 1), Tensor::identity()) < 1e-12);
  CHECK(distance(spider(w, 1, 1), Tensor::identity()) < 1e-12);
  CHECK(distance(spider(g, 2, 1), g.mult) == 0.0);
  CHECK(distance(spider(w, 1, 2), w.comult) == 0.0);
  CHECK(distance(spider(g, 0, 1), g.unit) == 0.0);

  // Contracting a (2,1) spider into a (1,2) spider fuses them into the
  // (2,2) spider.
  Tensor fused = compose(spider(g, 1, 2), spider(g, 2, 1));
  CHECK(distance(fused, spider(g, 2, 2)) < 1e-12);
}

TEST_CASE("the basis copy algebra is special in dimension three") {
  CFA b3 = basis_cfa(3);
  CfaReport rep = check_cfa(b3);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-12);
  CHECK(check_special(b3));
  CHECK_FALSE(check_antispecial(b3));
}

TEST_CASE("cfa_partial_trace agrees with the standard trace") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (const CFA& c : {ghz_algebra(), w_algebra()}) {
    for (int i = 0; i < 20; ++i) {
      Tensor m(1, 1);
      for (auto& e : m.entries()) e = cplx(gauss(rng), gauss(rng));
      CHECK(distance(cfa_partial_trace(c, m), standard_partial_trace(m, 0)) <
            1e-10);
    }
  }
}

TEST_CASE("copiable points match the defining fixed-point equation") {
  auto pts_g = copiable_points(ghz_algebra());
  REQUIRE(pts_g.size() == 2);
  for (const Tensor& p : pts_g) {
    CHECK(distance(compose(ghz_algebra().comult, p), kron(p, p)) < 1e-9);
  }

  auto pts_w = copiable_points(w_algebra());
  REQUIRE(pts_w.size() == 1);
  CHECK(distance(pts_w[0], Tensor::ket({0})) < 1e-9);
}

TEST_CASE("an algebra round trips through its induced state") {
  for (const CFA& c : {ghz_algebra(), w_algebra()}) {
    CAPTURE(c.name);
    FrobeniusStateData data = state_from_cfa(c);
    CHECK(distance(data.psi, spider(c, 0, 3)) < 1e-12);
    CFA back = cfa_from_state(data.psi, data.xi);
    CHECK(cfa_distance(back, c) < 1e-9);
  }
}

TEST_CASE("cfa_from_state rebuilds conjugated algebras from their states") {
  std::mt19937_64 rng(99);
  Tensor sq2plus = Tensor::effect1({1, 1});  // sqrt(2) <+|
  for (int trial = 0; trial < 3; ++trial) {
    Tensor l = random_invertible(rng);
    Tensor li = inverse2(l);
    Tensor mover = kron(kron(l, l), l);

    CFA cg = cfa_from_state(compose(mover, ghz_m(3)), compose(sq2plus, li));
    CHECK(check_cfa(cg, {1e-8, 1e-8}).pass);
    CHECK(classify_cfa(cg, {1e-8, 1e-8}).cls == CfaClass::ghz);

    CFA cw = cfa_from_state(compose(mover, w_m(3)),
                            compose(Tensor::effect1({1, 0}), li));
    CHECK(check_cfa(cw, {1e-8, 1e-8}).pass);
    CHECK(classify_cfa(cw, {1e-8, 1e-8}).cls == CfaClass::w);
  }
}

TEST_CASE("cfa_from_state rejects a degenerate pairing") {
  // <1| pairs the one-hot state to a rank-one form.
  CHECK_THROWS_AS(cfa_from_state(w_m(3), Tensor::effect1({0, 1})), CfaError);
}

TEST_CASE("ghz_normalize inverts random local moves") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor l = random_invertible(rng);
    Tensor psi = compose(kron(kron(l, l), l), ghz_m(3));
    GhzNormalizeResult r = ghz_normalize(psi);
    Tensor rebuilt =
        r.lambda * compose(kron(kron(r.L, r.L), r.L), ghz_m(3));
    CHECK(distance(rebuilt, psi) < 1e-8 * std::max(1.0, psi.norm()));
  }
}

TEST_CASE("w_uniform_normalize inverts uniform local moves") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor l = random_invertible(rng);
    Tensor psi = compose(kron(kron(l, l), l), w_m(3));
    GhzNormalizeResult r = w_uniform_normalize(psi);
    Tensor rebuilt = r.lambda * compose(kron(kron(r.L, r.L), r.L), w_m(3));
    CHECK(distance(rebuilt, psi) < 1e-8 * std::max(1.0, psi.norm()));
  }
}

TEST_CASE("w_normalize straightens the comultiplication loop shape") {
  WNormalizeResult canon = w_normalize(w_algebra());
  CHECK(distance(canon.L1, Tensor::identity()) < 1e-9);
  CHECK(distance(canon.L2, Tensor::identity()) < 1e-9);
  CHECK(std::abs(canon.lambda - cplx(4.0)) < 1e-9);
  CHECK(canon.residual < 1e-9);

  std::mt19937_64 rng(31);
  Tensor w3 = w_m(3);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor l = random_invertible(rng);
    CFA moved = conjugate_cfa(w_algebra(), l, inverse2(l));
    WNormalizeResult r = w_normalize(moved, {1e-8, 1e-8});
    Tensor psi = spider(moved, 0, 3);
    Tensor straightened = compose(kron(kron(r.L1, r.L2), r.L3), psi);
    CHECK(distance(straightened, r.lambda * w3) <
          1e-7 * std::max(1.0, straightened.norm()));
  }
}

TEST_CASE("classify_cfa returns the class witness and normal form") {
  auto rg = classify_cfa(ghz_algebra());
  CHECK(rg.cls == CfaClass::ghz);
  CHECK(cfa_class_name(rg.cls) == "ghz-class");
  CHECK(check_special(rg.normal_form, {1e-8, 1e-8}));
  CHECK(proportional(rg.witness, Tensor::identity(), {1e-8, 1e-8}).has_value());

  auto rw = classify_cfa(w_algebra());
  CHECK(rw.cls == CfaClass::w);
  CHECK(check_antispecial(rw.normal_form, {1e-8, 1e-8}));
  CHECK(proportional(rw.witness, Tensor::identity(), {1e-8, 1e-8}).has_value());

  // The witness transports the structure maps onto the normal form: the
  // comultiplication picks up one factor, the multiplication two, and the
  // induced three-spider state is preserved by the rebuild.
  std::mt19937_64 rng(47);
  for (bool use_w : {false, true}) {
    for (int trial = 0; trial < 4; ++trial) {
      Tensor l = random_invertible(rng);
      CFA moved =
          conjugate_cfa(use_w ? w_algebra() : ghz_algebra(), l, inverse2(l));
      auto res = classify_cfa(moved, {1e-8, 1e-8});
      CHECK(res.cls == (use_w ? CfaClass::w : CfaClass::ghz));
      const Tensor& wit = res.witness;
      double scale = std::max(1.0, moved.mult.norm());
      CHECK(distance(res.normal_form.comult, compose(moved.comult, wit)) <
            1e-7 * scale);
      CHECK(distance(res.normal_form.mult,
                     compose(moved.mult, kron(wit, wit))) < 1e-7 * scale);
      CHECK(distance(spider(res.normal_form, 0, 3), spider(moved, 0, 3)) <
            1e-7 * scale);
      bool ok = use_w ? check_antispecial(res.normal_form, {1e-7, 1e-7})
                      : check_special(res.normal_form, {1e-7, 1e-7});
      CHECK(ok);
    }
  }
}

TEST_CASE("extend_to_cfa completes a unital associative pair") {
  CFA g = extend_to_cfa(ghz_algebra().mult, ghz_algebra().unit);
  CHECK(check_cfa(g, {1e-9, 1e-9}).pass);
  CHECK(check_special(g, {1e-8, 1e-8}));

  CFA w = extend_to_cfa(w_algebra().mult, w_algebra().unit);
  CHECK(check_cfa(w, {1e-9, 1e-9}).pass);
  CHECK(check_antispecial(w, {1e-8, 1e-8}));

  std::mt19937_64 rng(61);
  Tensor l = random_invertible(rng);
  CFA moved = conjugate_cfa(ghz_algebra(), l, inverse2(l));
  CFA rebuilt = extend_to_cfa(moved.mult, moved.unit, {1e-8, 1e-8});
  CHECK(check_cfa(rebuilt, {1e-7, 1e-7}).pass);
  CHECK(classify_cfa(rebuilt, {1e-8, 1e-8}).cls == CfaClass::ghz);

  // A non-associative product has no completion.
  Tensor bad(2, 1);
  bad.at(0, 0) = 1;
  bad.at(1, 1) = 1;
  bad.at(0, 2) = 1;
  bad.at(1, 3) = 1;
  bad.at(0, 3) = 0.5;
  CHECK_THROWS_AS(extend_to_cfa(bad, ghz_algebra().unit), CfaError);
}

TEST_CASE("conjugation preserves the axioms and both loop laws") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor l = random_invertible(rng);
    Tensor li = inverse2(l);
    CFA cg = conjugate_cfa(ghz_algebra(), l, li);
    CFA cw = conjugate_cfa(w_algebra(), l, li);
    CHECK(check_cfa(cg, {1e-8, 1e-8}).pass);
    CHECK(check_cfa(cw, {1e-8, 1e-8}).pass);
    CHECK(check_special(cg, {1e-8, 1e-8}));
    CHECK(check_antispecial(cw, {1e-8, 1e-8}));
  }
}
