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

#include "ghzw/slocc.hpp"

#include <cmath>
#include <complex>
#include <initializer_list>
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

cplx det2(const Tensor& l) {
  return l.at(0, 0) * l.at(1, 1) - l.at(0, 1) * l.at(1, 0);
}

Tensor random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cplx a(g(rng), g(rng)), b(g(rng), g(rng)), c(g(rng), g(rng)), d(g(rng), g(rng));
  double n1 = std::sqrt(std::norm(a) + std::norm(c));
  a /= n1;
  c /= n1;
  cplx ov = std::conj(a) * b + std::conj(c) * d;
  b -= ov * a;
  d -= ov * c;
  double n2 = std::sqrt(std::norm(b) + std::norm(d));
  Tensor u(1, 1);
  u.at(0, 0) = a;
  u.at(0, 1) = b / n2;
  u.at(1, 0) = c;
  u.at(1, 1) = d / n2;
  return u;
}

Tensor random_state(std::mt19937_64& rng, int legs) {
  std::normal_distribution<double> g;
  std::vector<cplx> a(std::size_t(1) << legs);
  for (auto& e : a) e = cplx(g(rng), g(rng));
  return Tensor::state(legs, a);
}

Tensor nstate(int n, std::initializer_list<int> idx) {
  std::vector<cplx> a(std::size_t(1) << n);
  for (int i : idx) a[i] = 1;
  return Tensor::state(n, a);
}

Tensor ghz_n(int n) {
  std::vector<cplx> a(std::size_t(1) << n);
  a.front() = 1;
  a.back() = 1;
  return Tensor::state(n, a);
}

Tensor w_n(int n) {
  std::vector<cplx> a(std::size_t(1) << n);
  for (int b = 0; b < n; ++b) a[std::size_t(1) << b] = 1;
  return Tensor::state(n, a);
}

Tensor triple(const Tensor& a, const Tensor& b, const Tensor& c) {
  return kron(a, kron(b, c));
}

// Glue phi between the last leg of psi and the first leg of seed.
Tensor mixed_glue(const Tensor& psi, const Tensor& phi, const Tensor& seed) {
  Tensor op = kron(Tensor::identity(psi.out_arity() - 1),
                   kron(phi, Tensor::identity(seed.out_arity() - 1)));
  return compose(op, kron(psi, seed));
}

}  // namespace

TEST_CASE("hyperdeterminant separates the maximal classes") {
  CHECK(std::abs(hyperdeterminant(ghz_n(3)) - cplx(1.0)) < 1e-12);
  CHECK(std::abs(hyperdeterminant(w_n(3))) < 1e-12);
}

TEST_CASE("hyperdeterminant is a local SL-invariant of degree four") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor psi = random_state(rng, 3);
    Tensor a = random_invertible(rng);
    Tensor b = random_invertible(rng);
    Tensor c = random_invertible(rng);
    cplx moved = hyperdeterminant(compose(triple(a, b, c), psi));
    cplx factor = std::pow(det2(a) * det2(b) * det2(c), 2.0);
    CHECK(std::abs(moved - factor * hyperdeterminant(psi)) <
          1e-8 * std::max(1.0, std::abs(moved)));
  }
}

TEST_CASE("tripartite_classify identifies the canonical representatives") {
  CHECK(tripartite_classify(nstate(3, {0})) == SloccLabel::leaf(SloccKind::product));
  CHECK(tripartite_classify(nstate(3, {6})) == SloccLabel::leaf(SloccKind::product));
  CHECK(tripartite_classify(nstate(3, {0, 3})) == SloccLabel::bisep(1));
  CHECK(tripartite_classify(nstate(3, {0, 6})) == SloccLabel::bisep(3));
  CHECK(tripartite_classify(nstate(3, {0, 5})) == SloccLabel::bisep(2));
  CHECK(tripartite_classify(ghz_n(3)) == SloccLabel::leaf(SloccKind::ghz));
  CHECK(tripartite_classify(w_n(3)) == SloccLabel::leaf(SloccKind::w));
}

TEST_CASE("tripartite_classify is invariant under invertible local maps") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor mover = triple(random_invertible(rng), random_invertible(rng),
                          random_invertible(rng));
    CHECK(tripartite_classify(compose(mover, ghz_n(3))) ==
          SloccLabel::leaf(SloccKind::ghz));
    CHECK(tripartite_classify(compose(mover, w_n(3))) ==
          SloccLabel::leaf(SloccKind::w));
    CHECK(tripartite_classify(compose(mover, nstate(3, {0, 3}))) ==
          SloccLabel::bisep(1));
  }
}

TEST_CASE("symmetry check respects leg permutations") {
  CHECK(is_symmetric_state(ghz_n(3)));
  CHECK(is_symmetric_state(w_n(4)));
  CHECK_FALSE(is_symmetric_state(nstate(3, {1})));
}

TEST_CASE("bipartite_maximal certifies entangled pairs") {
  auto phi = bipartite_maximal(nstate(2, {0, 3}));
  REQUIRE(phi.has_value());
  CHECK(phi->in_arity() == 2);
  CHECK_FALSE(bipartite_maximal(nstate(2, {0})).has_value());
}

TEST_CASE("strong_maximal returns the textbook witnesses") {
  auto gw = strong_maximal(ghz_n(3));
  REQUIRE(gw.has_value());
  auto ww = strong_maximal(w_n(3));
  REQUIRE(ww.has_value());

  // The copying algebra's witness is proportional to <+|, the one-hot
  // algebra's to <0|; each contracted state must itself be maximal.
  CHECK(proportional((*gw)[0].xi, Tensor::effect1({1, 1}), {1e-9, 1e-9})
            .has_value());
  CHECK(proportional((*ww)[0].xi, Tensor::effect1({1, 0}), {1e-9, 1e-9})
            .has_value());
  for (int leg = 0; leg < 3; ++leg) {
    CHECK((*gw)[leg].phi.in_arity() == 2);
    CHECK((*ww)[leg].phi.in_arity() == 2);
  }

  CHECK_FALSE(strong_maximal(nstate(3, {0})).has_value());
  CHECK_FALSE(strong_maximal(nstate(3, {0, 3})).has_value());  // |0>|Bell>
}

TEST_CASE("strong maximality implies full single-leg ranks") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor psi = random_state(rng, 3);
    auto w = strong_maximal(psi);
    if (!w) continue;
    for (int leg = 0; leg < 3; ++leg) {
      // Rank-2 reduction on every leg: the leg-gathered reshape must have
      // two nonzero singular values, seen through right_singular_space of
      // the permuted state.
      std::vector<int> perm(3);
      for (int j = 0; j < 3; ++j) perm[j] = (leg + j) % 3;
      Tensor fronted = swap_legs(psi, {}, perm);
      CHECK(right_singular_space(fronted).size() == 2);
    }
  }
}

TEST_CASE("strong_symmetric recovers the inductive gluing effects") {
  for (int n = 3; n <= 5; ++n) {
    CAPTURE(n);
    auto phi_g = strong_symmetric(ghz_n(n));
    REQUIRE(phi_g.has_value());
    CHECK(proportional(mixed_glue(ghz_n(n), *phi_g, ghz_n(3)), ghz_n(n + 1),
                       {1e-7, 1e-7})
              .has_value());

    auto phi_w = strong_symmetric(w_n(n));
    REQUIRE(phi_w.has_value());
    CHECK(proportional(mixed_glue(w_n(n), *phi_w, w_n(3)), w_n(n + 1),
                       {1e-7, 1e-7})
              .has_value());
  }

  // Product symmetric states glue trivially.
  CHECK(strong_symmetric(nstate(3, {0})).has_value());
  CHECK_THROWS_AS(strong_symmetric(nstate(3, {1})), SloccError);
}

TEST_CASE("glue_pair joins two copies through a bipartite effect") {
  Tensor bell_eff(2, 0);
  bell_eff.at(0, 0) = 1;
  bell_eff.at(0, 3) = 1;
  CHECK(proportional(glue_pair(ghz_n(3), bell_eff), ghz_n(4), {1e-9, 1e-9})
            .has_value());

  Tensor epr_eff(2, 0);
  epr_eff.at(0, 1) = 1;
  epr_eff.at(0, 2) = 1;
  CHECK(proportional(glue_pair(w_n(3), epr_eff), w_n(4), {1e-9, 1e-9})
            .has_value());
}

TEST_CASE("is_frobenius_state finds witnesses exactly for the maximal classes") {
  auto fg = is_frobenius_state(ghz_n(3));
  REQUIRE(fg.has_value());
  auto fw = is_frobenius_state(w_n(3));
  REQUIRE(fw.has_value());
  CHECK_FALSE(is_frobenius_state(nstate(3, {0})).has_value());
  CHECK_FALSE(is_frobenius_state(nstate(3, {0, 3})).has_value());

  // Only symmetric states qualify, so conjugate uniformly.
  std::mt19937_64 rng(41);
  Tensor l = random_invertible(rng);
  CHECK(is_frobenius_state(compose(triple(l, l, l), ghz_n(3)), {1e-8, 1e-8})
            .has_value());
  CHECK_FALSE(
      is_frobenius_state(compose(kron(l, Tensor::identity(2)), w_n(3)))
          .has_value());
}

TEST_CASE("uniform_L_solve certificates are honest") {
  std::mt19937_64 rng(53);

  for (int trial = 0; trial < 3; ++trial) {
    Tensor l = random_invertible(rng);
    Tensor psi = compose(triple(l, l, l), ghz_n(3));
    auto sol = uniform_L_solve(psi, ghz_n(3), {1e-8, 1e-8});
    REQUIRE(sol.has_value());
    Tensor rebuilt =
        sol->second * compose(triple(sol->first, sol->first, sol->first), ghz_n(3));
    CHECK(distance(rebuilt, psi) < 1e-7 * std::max(1.0, psi.norm()));
  }

  // Four-qubit case exercises the seeded refinement.
  Tensor d12(1, 1);
  d12.at(0, 0) = 1;
  d12.at(1, 1) = 2;
  Tensor moved = compose(kron(d12, triple(d12, d12, d12)), w_n(4));
  auto sol = uniform_L_solve(moved, w_n(4), {1e-8, 1e-8});
  REQUIRE(sol.has_value());
  Tensor rebuilt =
      sol->second *
      compose(kron(sol->first, triple(sol->first, sol->first, sol->first)),
              w_n(4));
  CHECK(distance(rebuilt, moved) < 1e-7 * moved.norm());

  CHECK_THROWS_AS(uniform_L_solve(nstate(3, {1}), ghz_n(3)), SloccError);
}

TEST_CASE("superclass_label handles two and three qubits as leaves") {
  CHECK(superclass_label(nstate(2, {0, 3})) == SloccLabel::leaf(SloccKind::bell));
  CHECK(superclass_label(nstate(2, {2})) == SloccLabel::leaf(SloccKind::product));
  CHECK(superclass_label(ghz_n(3)) == SloccLabel::leaf(SloccKind::ghz));
  CHECK_THROWS_AS(superclass_label(Tensor::state(2, {0, 0, 0, 0})), SloccError);
}

TEST_CASE("superclass_label reads off the printed four-qubit examples") {
  // |0>(|000>+|110>+|101>) + |1>|0>(|01>+|10>)
  CHECK(superclass_label(nstate(4, {0, 5, 6, 9, 10})) ==
        SloccLabel::node({SloccLabel::leaf(SloccKind::w), SloccLabel::bisep(1)}));
  // |0>|000> + |1>|1>(|01>+|10>)
  CHECK(superclass_label(nstate(4, {0, 13, 14})) ==
        SloccLabel::node(
            {SloccLabel::leaf(SloccKind::product), SloccLabel::bisep(1)}));
  // |0>(|000>+|111>) + |1>|010>
  CHECK(superclass_label(nstate(4, {0, 7, 10})) ==
        SloccLabel::node({SloccLabel::leaf(SloccKind::ghz),
                          SloccLabel::leaf(SloccKind::product)}));

  CHECK(superclass_label(ghz_n(4)) ==
        SloccLabel::node({SloccLabel::leaf(SloccKind::product),
                          SloccLabel::leaf(SloccKind::product)}));
  CHECK(superclass_label(ghz_n(4)).str() == "{product, product}");
  CHECK(superclass_label(w_n(4)) ==
        SloccLabel::node({SloccLabel::leaf(SloccKind::w),
                          SloccLabel::leaf(SloccKind::product)}));

  // A product state spans a single vector.
  CHECK(superclass_label(nstate(4, {0})) ==
        SloccLabel::node({SloccLabel::leaf(SloccKind::product)}));
}

TEST_CASE("superclass labels are stable under local unitaries of the tail") {
  std::mt19937_64 rng(67);
  SloccLabel lg = superclass_label(ghz_n(4));
  SloccLabel lw = superclass_label(w_n(4));
  for (int trial = 0; trial < 5; ++trial) {
    Tensor mover = kron(Tensor::identity(),
                        triple(random_unitary(rng), random_unitary(rng),
                               random_unitary(rng)));
    CHECK(superclass_label(compose(mover, ghz_n(4))) == lg);
    CHECK(superclass_label(compose(mover, w_n(4))) == lw);
  }
}

TEST_CASE("label equality ignores child order") {
  SloccLabel a = SloccLabel::node(
      {SloccLabel::leaf(SloccKind::w), SloccLabel::bisep(1)});
  SloccLabel b = SloccLabel::node(
      {SloccLabel::bisep(1), SloccLabel::leaf(SloccKind::w)});
  CHECK(a == b);
  CHECK(a.str() == b.str());
  CHECK_FALSE(a == SloccLabel::node({SloccLabel::leaf(SloccKind::w),
                                     SloccLabel::bisep(2)}));
}
