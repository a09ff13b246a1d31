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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "ghzw/slocc.hpp"

namespace ghzw {
namespace {

using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

Tensor map1_from_matrix(const Mat2& m) {
  Tensor t(1, 1);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) t.at(a, b) = m(a, b);
  }
  return t;
}

Mat2 matrix_from_map1(const Tensor& t) {
  Mat2 m;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) m(a, b) = t.at(a, b);
  }
  return m;
}

Tensor state_from_vec2(const Vec2& v) {
  return Tensor::state1({v(0), v(1)});
}

Tensor effect_from_row(const cplx& c0, const cplx& c1) {
  return Tensor::effect1({c0, c1});
}

cplx inner(const Tensor& a, const Tensor& b) {
  cplx acc = 0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    acc += std::conj(a.entries()[i]) * b.entries()[i];
  }
  return acc;
}

void require_shapes(const CFA& c, const char* who) {
  auto want = [&](const Tensor& t, int in, int out, const char* part) {
    if (t.in_arity() != in || t.out_arity() != out || t.dim() != c.dim) {
      throw CfaError(std::string(who) + ": malformed " + part + " tensor");
    }
  };
  want(c.mult, 2, 1, "mult");
  want(c.unit, 0, 1, "unit");
  want(c.comult, 1, 2, "comult");
  want(c.counit, 1, 0, "counit");
}

double residual_floor(const Tolerance& tol, double scale) {
  return tol.abs_eps + tol.rel_eps * scale;
}

// Eigenvector directions of left multiplication by seeded generic
// elements; candidates for points copied by the comultiplication.
std::vector<Vec2> left_mult_directions(const Tensor& mult, std::uint64_t seed,
                                       int attempts) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec2> dirs;
  auto push_unique = [&](Vec2 v) {
    double n = v.norm();
    if (n < 1e-14) return;
    v /= n;
    for (const auto& d : dirs) {
      if (std::abs(d.dot(v)) > 1.0 - 1e-9) return;
    }
    dirs.push_back(v);
  };
  for (int a = 0; a < attempts; ++a) {
    Vec2 w(cplx(u(rng), u(rng)), cplx(u(rng), u(rng)));
    Mat2 t;
    for (int i = 0; i < 2; ++i) {
      for (int b = 0; b < 2; ++b) {
        t(i, b) = mult.at(i, 0 * 2 + b) * w(0) + mult.at(i, 1 * 2 + b) * w(1);
      }
    }
    Eigen::ComplexEigenSolver<Mat2> es(t);
    if (es.info() != Eigen::Success) continue;
    push_unique(es.eigenvectors().col(0));
    push_unique(es.eigenvectors().col(1));
  }
  return dirs;
}

Tensor canonical_tick() {
  Tensor t(1, 1);
  t.at(0, 1) = 1;
  t.at(1, 0) = 1;
  return t;
}

// Catalecticant kernel of a symmetric three-qubit state: the quadratic
// binary form annihilating the associated cubic.  Roots of the form are
// the projective directions of the power decomposition.
Eigen::Vector3cd catalecticant_kernel(const Tensor& psi) {
  const auto& e = psi.entries();
  cplx a0 = e[0];
  cplx a1 = (e[1] + e[2] + e[4]) / 3.0;
  cplx a2 = (e[3] + e[5] + e[6]) / 3.0;
  cplx a3 = e[7];
  Eigen::Matrix<cplx, 2, 3> hankel;
  hankel << a0, a1, a2, a1, a2, a3;
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 3>> svd(hankel, Eigen::ComputeFullV);
  return svd.matrixV().col(2);
}

// Projective roots of g0 u^2 + g1 uv + g2 v^2 as direction pairs.
std::array<Vec2, 2> quadratic_roots(const Eigen::Vector3cd& g) {
  const double scale =
      std::max({std::abs(g(0)), std::abs(g(1)), std::abs(g(2))});
  const double thr = 1e-13 * scale;
  if (std::abs(g(0)) > thr) {
    cplx s = std::sqrt(g(1) * g(1) - 4.0 * g(0) * g(2));
    if (std::real(std::conj(g(1)) * s) < 0.0) s = -s;
    cplx q = -0.5 * (g(1) + s);
    Vec2 r1(q / g(0), 1.0);
    Vec2 r2 = (std::abs(q) > thr) ? Vec2(g(2) / q, 1.0) : Vec2(0.0, 1.0);
    return {r1, r2};
  }
  if (std::abs(g(1)) > thr) {
    return {Vec2(1.0, 0.0), Vec2(-g(2) / g(1), 1.0)};
  }
  // Only the v^2 coefficient survives: a double root at [1:0].
  return {Vec2(1.0, 0.0), Vec2(1.0, 0.0)};
}

Vec2 normalized_with_phase(Vec2 v) {
  v.normalize();
  int arg = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
  cplx ph = v(arg) / std::abs(v(arg));
  return v / ph;
}

}  // namespace

CFA ghz_algebra() {
  CFA c;
  c.name = "ghz";
  c.dim = 2;
  c.mult = Tensor(2, 1);
  c.mult.at(0, 0) = 1;
  c.mult.at(1, 3) = 1;
  c.unit = Tensor::state1({1, 1});
  c.comult = Tensor(1, 2);
  c.comult.at(0, 0) = 1;
  c.comult.at(3, 1) = 1;
  c.counit = Tensor::effect1({1, 1});
  return c;
}

CFA w_algebra() {
  CFA c;
  c.name = "w";
  c.dim = 2;
  c.mult = Tensor(2, 1);
  c.mult.at(1, 3) = 1;  // |1><11|
  c.mult.at(0, 1) = 1;  // |0><01|
  c.mult.at(0, 2) = 1;  // |0><10|
  c.unit = Tensor::state1({0, 1});
  c.comult = Tensor(1, 2);
  c.comult.at(0, 0) = 1;  // |00><0|
  c.comult.at(1, 1) = 1;  // |01><1|
  c.comult.at(2, 1) = 1;  // |10><1|
  c.counit = Tensor::effect1({1, 0});
  return c;
}

DerivedData derive(const CFA& c, const Tolerance& tol, std::uint64_t seed) {
  require_shapes(c, "derive");
  DerivedData d;
  d.cap = compose(c.counit, c.mult);
  d.cup = compose(c.comult, c.unit);
  d.lolli = standard_partial_trace(c.comult, 1, 0);
  d.cololli = standard_partial_trace(c.mult, 0, 0);
  d.circle = compose(d.cap, d.cup).scalar_value();
  if (c.dim == 2) {
    d.copiable_points = copiable_points(c, tol, seed);
  }
  return d;
}

AlgebraSemantics semantics_of(const CFA& c) {
  require_shapes(c, "semantics_of");
  AlgebraSemantics s;
  s.mult = c.mult;
  s.unit = c.unit;
  s.comult = c.comult;
  s.counit = c.counit;
  s.cap = compose(c.counit, c.mult);
  s.cup = compose(c.comult, c.unit);
  return s;
}

SemanticsTable canonical_semantics() {
  SemanticsTable t;
  t.algebras.emplace("ghz", semantics_of(ghz_algebra()));
  t.algebras.emplace("w", semantics_of(w_algebra()));
  t.tick = canonical_tick();
  return t;
}

CfaReport check_cfa(const CFA& c, const Tolerance& tol) {
  require_shapes(c, "check_cfa");
  const Tensor id = Tensor::identity(1, c.dim);
  const Tensor sw = Tensor::swap(c.dim);
  const Tensor& m = c.mult;
  const Tensor& e = c.unit;
  const Tensor& d = c.comult;
  const Tensor& u = c.counit;

  CfaReport report;
  auto add = [&](const char* name, const Tensor& lhs, const Tensor& rhs) {
    AxiomCheck chk;
    chk.axiom = name;
    chk.residual = distance(lhs, rhs);
    chk.pass = chk.residual <=
               residual_floor(tol, std::max(lhs.norm(), rhs.norm()));
    report.checks.push_back(chk);
  };

  add("associativity", compose(m, kron(m, id)), compose(m, kron(id, m)));
  add("left unit", compose(m, kron(e, id)), id);
  add("right unit", compose(m, kron(id, e)), id);
  add("coassociativity", compose(kron(d, id), d), compose(kron(id, d), d));
  add("left counit", compose(kron(u, id), d), id);
  add("right counit", compose(kron(id, u), d), id);
  Tensor dm = compose(d, m);
  add("frobenius left", compose(kron(m, id), kron(id, d)), dm);
  add("frobenius right", compose(kron(id, m), kron(d, id)), dm);
  add("commutativity", compose(m, sw), m);
  add("cocommutativity", compose(sw, d), d);

  report.max_residual = 0.0;
  report.pass = true;
  for (const auto& chk : report.checks) {
    report.max_residual = std::max(report.max_residual, chk.residual);
    report.pass = report.pass && chk.pass;
  }
  return report;
}

bool check_special(const CFA& c, const Tolerance& tol) {
  require_shapes(c, "check_special");
  Tensor loop = compose(c.mult, c.comult);
  Tensor id = Tensor::identity(1, c.dim);
  return distance(loop, id) <= residual_floor(tol, std::max(loop.norm(), id.norm()));
}

bool check_antispecial(const CFA& c, const Tolerance& tol) {
  require_shapes(c, "check_antispecial");
  Tensor loop = compose(c.mult, c.comult);
  Tensor lolli = standard_partial_trace(c.comult, 1, 0);
  Tensor cololli = standard_partial_trace(c.mult, 0, 0);
  Tensor lhs = cplx(double(c.dim), 0.0) * loop;
  Tensor rhs = compose(lolli, cololli);
  double floor = residual_floor(tol, std::max(lhs.norm(), rhs.norm()));
  if (distance(lhs, rhs) > floor) return false;
  cplx tr = standard_partial_trace(loop, 0, 0).scalar_value();
  return std::abs(tr) <= residual_floor(tol, loop.norm());
}

Tensor spider(const CFA& c, int n, int m) {
  require_shapes(c, "spider");
  if (n < 0 || m < 0) throw CfaError("spider: negative arity");
  const Tensor id = Tensor::identity(1, c.dim);

  Tensor in_comb;  // n -> 1 left comb of mults
  if (n == 0) {
    in_comb = c.unit;
  } else {
    in_comb = id;
    for (int k = 2; k <= n; ++k) {
      in_comb = compose(c.mult, kron(in_comb, id));
    }
  }
  Tensor out_comb;  // 1 -> m left comb of comults
  if (m == 0) {
    out_comb = c.counit;
  } else {
    out_comb = id;
    for (int k = 2; k <= m; ++k) {
      out_comb = compose(kron(out_comb, id), c.comult);
    }
  }
  return compose(out_comb, in_comb);
}

Tensor cfa_partial_trace(const CFA& c, const Tensor& m) {
  require_shapes(c, "cfa_partial_trace");
  if (m.in_arity() < 1 || m.out_arity() < 1 || m.dim() != c.dim) {
    throw CfaError("cfa_partial_trace: map must have a traced leg on both sides");
  }
  Tensor cap = compose(c.counit, c.mult);
  Tensor cup = compose(c.comult, c.unit);
  Tensor lifted = compose(kron(m, Tensor::identity(1, c.dim)),
                          kron(Tensor::identity(m.in_arity() - 1, c.dim), cup));
  return compose(kron(Tensor::identity(m.out_arity() - 1, c.dim), cap), lifted);
}

std::vector<Tensor> copiable_points(const CFA& c, const Tolerance& tol,
                                    std::uint64_t seed) {
  require_shapes(c, "copiable_points");
  if (c.dim != 2) throw CfaError("copiable_points: implemented for dim 2 only");

  std::vector<Tensor> points;
  for (const Vec2& dir : left_mult_directions(c.mult, seed, 6)) {
    Tensor u = state_from_vec2(dir);
    Tensor du = compose(c.comult, u);
    Tensor uu = kron(u, u);
    auto [beta, resid] = best_scale(du, uu);
    if (resid > residual_floor(tol, du.norm())) continue;
    if (std::abs(beta) <= tol.abs_eps) continue;
    Tensor point = u.scaled(beta);
    bool dup = false;
    for (const Tensor& p : points) {
      if (approx_equal(p, point, tol)) {
        dup = true;
        break;
      }
    }
    if (!dup) points.push_back(point);
  }

  std::sort(points.begin(), points.end(), [](const Tensor& a, const Tensor& b) {
    const cplx a0 = a.entries()[0], b0 = b.entries()[0];
    if (std::abs(std::abs(a0) - std::abs(b0)) > 1e-9) {
      return std::abs(a0) > std::abs(b0);
    }
    if (std::abs(a0.real() - b0.real()) > 1e-9) return a0.real() > b0.real();
    const cplx a1 = a.entries()[1], b1 = b.entries()[1];
    if (std::abs(std::abs(a1) - std::abs(b1)) > 1e-9) {
      return std::abs(a1) > std::abs(b1);
    }
    return a1.real() > b1.real();
  });

  if (points.size() < 2 && check_special(c, tol)) {
    throw CfaError("copiable_points: special algebra produced fewer than two points");
  }
  return points;
}

FrobeniusStateData state_from_cfa(const CFA& c) {
  require_shapes(c, "state_from_cfa");
  FrobeniusStateData out;
  out.psi = spider(c, 0, 3);
  out.phi = compose(c.counit, c.mult);
  out.xi = c.counit;
  return out;
}

CFA cfa_from_state(const Tensor& psi, const Tensor& xi, const Tolerance& tol) {
  if (psi.in_arity() != 0 || psi.out_arity() != 3 || psi.dim() != 2) {
    throw CfaError("cfa_from_state: psi must be a three-qubit state");
  }
  if (xi.in_arity() != 1 || xi.out_arity() != 0 || xi.dim() != 2) {
    throw CfaError("cfa_from_state: xi must be a single-qubit effect");
  }

  Tensor pairing = compose(kron(xi, Tensor::identity(2)), psi);
  Mat2 pm;
  pm << pairing.entries()[0], pairing.entries()[1], pairing.entries()[2],
      pairing.entries()[3];
  Eigen::JacobiSVD<Mat2> svd(pm);
  const auto& sv = svd.singularValues();
  if (sv(1) <= std::max(tol.abs_eps, tol.rel_eps * sv(0))) {
    throw CfaError("cfa_from_state: degenerate pairing (state not maximal at xi)");
  }
  Mat2 em = pm.inverse();
  Tensor effect(2, 0);
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b < 2; ++b) effect.at(0, x * 2 + b) = em(x, b);
  }

  CFA c;
  c.name = "from-state";
  c.dim = 2;
  c.comult = compose(kron(effect, Tensor::identity(2)),
                     kron(Tensor::identity(1), psi));
  c.counit = xi;
  c.mult = compose(
      kron(Tensor::identity(1), effect),
      compose(kron(Tensor::identity(2), kron(effect, Tensor::identity(1))),
              kron(psi, Tensor::identity(2))));
  c.unit = compose(kron(Tensor::identity(1), xi), pairing);
  return c;
}

std::string cfa_class_name(CfaClass c) {
  return c == CfaClass::ghz ? "ghz-class" : "w-class";
}

GhzNormalizeResult ghz_normalize(const Tensor& psi, const Tolerance& tol) {
  if (psi.in_arity() != 0 || psi.out_arity() != 3 || psi.dim() != 2) {
    throw CfaError("ghz_normalize: expected a three-qubit state");
  }
  if (!is_symmetric_state(psi, tol)) {
    throw CfaError("ghz_normalize: state is not symmetric");
  }
  if (tripartite_classify(psi, tol).kind != SloccKind::ghz) {
    throw CfaError("ghz_normalize: wrong class");
  }

  auto roots = quadratic_roots(catalecticant_kernel(psi));
  Vec2 p1 = normalized_with_phase(roots[0]);
  Vec2 p2 = normalized_with_phase(roots[1]);

  Tensor t1 = state_from_vec2(p1);
  Tensor t2 = state_from_vec2(p2);
  Tensor cube1 = kron(kron(t1, t1), t1);
  Tensor cube2 = kron(kron(t2, t2), t2);
  Mat a(8, 2);
  Eigen::VectorXcd rhs(8);
  for (int i = 0; i < 8; ++i) {
    a(i, 0) = cube1.entries()[i];
    a(i, 1) = cube2.entries()[i];
    rhs(i) = psi.entries()[i];
  }
  Eigen::Vector2cd s = a.completeOrthogonalDecomposition().solve(rhs);

  Vec2 u = std::pow(s(0), 1.0 / 3.0) * p1;
  Vec2 v = std::pow(s(1), 1.0 / 3.0) * p2;
  Mat2 l;
  l.col(0) = u;
  l.col(1) = v;
  if (std::abs(l.determinant()) <= tol.abs_eps) {
    throw CfaError("ghz_normalize: decomposition directions are degenerate");
  }

  Tensor us = state_from_vec2(u);
  Tensor vs = state_from_vec2(v);
  Tensor rebuilt = kron(kron(us, us), us) + kron(kron(vs, vs), vs);
  auto [lambda, resid] = best_scale(psi, rebuilt);
  if (resid > residual_floor(tol, psi.norm())) {
    throw CfaError("ghz_normalize: power decomposition failed");
  }
  return GhzNormalizeResult{map1_from_matrix(l), lambda, resid};
}

GhzNormalizeResult w_uniform_normalize(const Tensor& psi, const Tolerance& tol) {
  if (psi.in_arity() != 0 || psi.out_arity() != 3 || psi.dim() != 2) {
    throw CfaError("w_uniform_normalize: expected a three-qubit state");
  }
  if (!is_symmetric_state(psi, tol)) {
    throw CfaError("w_uniform_normalize: state is not symmetric");
  }
  if (tripartite_classify(psi, tol).kind != SloccKind::w) {
    throw CfaError("w_uniform_normalize: wrong class");
  }

  // Double root of the catalecticant kernel.
  Eigen::Vector3cd g = catalecticant_kernel(psi);
  const double scale = std::max({std::abs(g(0)), std::abs(g(1)), std::abs(g(2))});
  const double thr = 1e-13 * scale;
  Vec2 u_dir;
  if (std::abs(g(0)) > thr) {
    u_dir = Vec2(-g(1) / (2.0 * g(0)), 1.0);
  } else {
    u_dir = Vec2(1.0, 0.0);
  }
  Vec2 u = normalized_with_phase(u_dir);

  // psi = |uuv> + |uvu> + |vuu>, linear in v.
  Tensor ut = state_from_vec2(u);
  Mat b(8, 2);
  Eigen::VectorXcd rhs(8);
  for (int k = 0; k < 2; ++k) {
    Tensor ek = Tensor::ket({k});
    Tensor col = kron(kron(ut, ut), ek) + kron(kron(ut, ek), ut) +
                 kron(kron(ek, ut), ut);
    for (int i = 0; i < 8; ++i) b(i, k) = col.entries()[i];
  }
  for (int i = 0; i < 8; ++i) rhs(i) = psi.entries()[i];
  Eigen::Vector2cd vv = b.completeOrthogonalDecomposition().solve(rhs);
  Vec2 v(vv(0), vv(1));

  Mat2 l;
  l.col(0) = u;
  l.col(1) = v;
  if (std::abs(l.determinant()) <= tol.abs_eps) {
    throw CfaError("w_uniform_normalize: companion direction is degenerate");
  }
  Tensor vt = state_from_vec2(v);
  Tensor rebuilt = kron(kron(ut, ut), vt) + kron(kron(ut, vt), ut) +
                   kron(kron(vt, ut), ut);
  auto [lambda, resid] = best_scale(psi, rebuilt);
  if (resid > residual_floor(tol, psi.norm())) {
    throw CfaError("w_uniform_normalize: uniform decomposition failed");
  }
  return GhzNormalizeResult{map1_from_matrix(l), lambda, resid};
}

WNormalizeResult w_normalize(const CFA& c, const Tolerance& tol) {
  require_shapes(c, "w_normalize");
  if (c.dim != 2) throw CfaError("w_normalize: implemented for dim 2 only");
  Tensor psi = spider(c, 0, 3);
  if (tripartite_classify(psi, tol).kind != SloccKind::w) {
    throw CfaError("w_normalize: wrong class");
  }

  Tensor lolli = standard_partial_trace(c.comult, 1, 0);
  const double nl = lolli.norm();
  if (nl <= tol.abs_eps) {
    throw CfaError("w_normalize: loop state vanishes");
  }
  // t must be exactly tr_R(dhat), global phase included; the loop-shape
  // identities below hold for that vector and no other representative.
  Tensor dhat = c.comult.scaled(1.0 / nl);
  Vec2 t = Vec2(lolli.entries()[0], lolli.entries()[1]) / nl;
  Vec2 tp(-std::conj(t(1)), std::conj(t(0)));

  Tensor ts = state_from_vec2(t);
  Tensor tps = state_from_vec2(tp);
  Tensor dt = compose(dhat, ts);
  Tensor dperp = compose(dhat, tps);

  cplx a = inner(kron(ts, ts), dt);
  cplx bc = inner(kron(ts, ts), dperp);
  cplx cc = inner(kron(tps, ts), dperp);
  cplx dc = inner(kron(ts, tps), dperp);
  cplx ec = inner(kron(tps, tps), dperp);

  const double floor = residual_floor(tol, 1.0);
  if (std::abs(ec) > floor || std::abs(dc - (1.0 - a)) > floor) {
    throw CfaError("w_normalize: comultiplication is not in loop normal shape");
  }
  cplx d = 1.0 - a;
  if (std::abs(d) <= floor) {
    throw CfaError("w_normalize: separable comultiplication (d = 0)");
  }
  if (std::abs(cc) <= floor) {
    throw CfaError("w_normalize: s is proportional to t");
  }
  Vec2 s = (bc * t + cc * tp) / d;

  // Contract the first leg of the rescaled cup with <t| and <t perp|.
  Tensor dh = compose(dhat, c.unit);
  Vec2 sprime, tprime;
  for (int y = 0; y < 2; ++y) {
    cplx with_t = std::conj(t(0)) * dh.entries()[0 * 2 + y] +
                  std::conj(t(1)) * dh.entries()[1 * 2 + y];
    cplx with_tp = std::conj(tp(0)) * dh.entries()[0 * 2 + y] +
                   std::conj(tp(1)) * dh.entries()[1 * 2 + y];
    sprime(y) = a * with_t;
    tprime(y) = d * with_tp;
  }

  Mat2 l1b, l2b, l3b;
  l1b.col(0) = t;
  l1b.col(1) = s;
  l2b.col(0) = t;
  l2b.col(1) = tp;
  l3b.col(0) = tprime;
  l3b.col(1) = sprime;
  if (std::abs(l1b.determinant()) <= tol.abs_eps ||
      std::abs(l3b.determinant()) <= tol.abs_eps) {
    throw CfaError("w_normalize: derived directions are degenerate");
  }

  WNormalizeResult out;
  out.L1 = map1_from_matrix(l1b.inverse());
  out.L2 = map1_from_matrix(l2b.inverse());
  out.L3 = map1_from_matrix(l3b.inverse());

  Tensor mover = kron(kron(out.L1, out.L2), out.L3);
  Tensor moved = compose(mover, psi);
  Tensor w3 = Tensor::state(3, {0, 1, 1, 0, 1, 0, 0, 0});
  auto [lambda, resid] = best_scale(moved, w3);
  out.lambda = lambda;
  out.residual = resid;
  if (resid > residual_floor(tol, moved.norm())) {
    throw CfaError("w_normalize: proportionality check failed");
  }
  return out;
}

ClassifyCfaResult classify_cfa(const CFA& c, const Tolerance& tol) {
  require_shapes(c, "classify_cfa");
  if (c.dim != 2) throw CfaError("classify_cfa: implemented for dim 2 only");

  Tensor psi = spider(c, 0, 3);
  SloccLabel cls = tripartite_classify(psi, tol);

  ClassifyCfaResult out;
  Tensor xi_new;
  if (cls.kind == SloccKind::ghz) {
    out.cls = CfaClass::ghz;
    GhzNormalizeResult gn = ghz_normalize(psi, tol);
    Mat2 inv = matrix_from_map1(gn.L).inverse();
    cplx fold = std::pow(gn.lambda, -1.0 / 3.0);
    xi_new = effect_from_row(fold * (inv(0, 0) + inv(1, 0)),
                             fold * (inv(0, 1) + inv(1, 1)));
  } else if (cls.kind == SloccKind::w) {
    out.cls = CfaClass::w;
    WNormalizeResult wn = w_normalize(c, tol);
    Mat2 l1 = matrix_from_map1(wn.L1);
    xi_new = effect_from_row(l1(0, 0), l1(0, 1));
  } else {
    throw CfaError("classify_cfa: induced state is not SLOCC-maximal");
  }

  out.normal_form = cfa_from_state(psi, xi_new, tol);
  out.normal_form.name = c.name.empty() ? "normal-form" : c.name + "-normal";

  // Witness relating the two algebras: comult of the normal form equals
  // the old comult composed with this map (old cup against new pairing).
  Tensor cup_old = compose(c.comult, c.unit);
  Mat2 cupm;
  cupm << cup_old.entries()[0], cup_old.entries()[1], cup_old.entries()[2],
      cup_old.entries()[3];
  Tensor pairing = compose(kron(xi_new, Tensor::identity(2)), psi);
  Mat2 pm;
  pm << pairing.entries()[0], pairing.entries()[1], pairing.entries()[2],
      pairing.entries()[3];
  out.witness = map1_from_matrix(cupm * pm.inverse());

  bool ok = (out.cls == CfaClass::ghz) ? check_special(out.normal_form, tol)
                                       : check_antispecial(out.normal_form, tol);
  if (!ok) {
    throw CfaError("classify_cfa: constructed normal form failed its check");
  }
  return out;
}

CFA extend_to_cfa(const Tensor& mult, const Tensor& unit, const Tolerance& tol) {
  if (mult.in_arity() != 2 || mult.out_arity() != 1 || mult.dim() != 2 ||
      unit.in_arity() != 0 || unit.out_arity() != 1 || unit.dim() != 2) {
    throw CfaError("extend_to_cfa: expected mult 2 -> 1 and unit 0 -> 1 on dim 2");
  }
  const Tensor id = Tensor::identity(1);
  auto bad = [&](const Tensor& lhs, const Tensor& rhs) {
    return distance(lhs, rhs) >
           residual_floor(tol, std::max(lhs.norm(), rhs.norm()));
  };
  if (bad(compose(mult, kron(mult, id)), compose(mult, kron(id, mult)))) {
    throw CfaError("extend_to_cfa: multiplication is not associative");
  }
  if (bad(compose(mult, kron(unit, id)), id) ||
      bad(compose(mult, kron(id, unit)), id)) {
    throw CfaError("extend_to_cfa: unit law fails");
  }
  if (bad(compose(mult, Tensor::swap()), mult)) {
    throw CfaError("extend_to_cfa: multiplication is not commutative");
  }

  // The multiplication reinterpreted as a tripartite state shares the
  // entry layout, so the SLOCC class splits the two algebra types.
  SloccLabel cls = tripartite_classify(Tensor::state(3, mult.entries()), tol);

  Mat2 k;
  CFA canon;
  if (cls.kind == SloccKind::ghz) {
    // Split algebra: transport through the two idempotent characters.
    std::vector<Vec2> idem;
    for (const Vec2& dir : left_mult_directions(mult, 11, 6)) {
      Tensor u = state_from_vec2(dir);
      Tensor uu = compose(mult, kron(u, u));
      auto [p, resid] = best_scale(uu, u);
      if (resid > residual_floor(tol, uu.norm())) continue;
      if (std::abs(p) <= tol.abs_eps) continue;
      Vec2 e = dir / p;
      bool dup = false;
      for (const auto& got : idem) {
        if ((got - e).norm() <= residual_floor(tol, e.norm())) dup = true;
      }
      if (!dup) idem.push_back(e);
    }
    if (idem.size() < 2) {
      throw CfaError("extend_to_cfa: split algebra yielded fewer than two idempotents");
    }
    // The unit itself is idempotent and may sneak into the list; the right
    // pair is the one summing to the unit.
    Vec2 unit_vec(unit.entries()[0], unit.entries()[1]);
    bool paired = false;
    for (std::size_t i = 0; i < idem.size() && !paired; ++i) {
      for (std::size_t j = i + 1; j < idem.size() && !paired; ++j) {
        if ((idem[i] + idem[j] - unit_vec).norm() <=
            residual_floor(tol, unit_vec.norm())) {
          k.col(0) = idem[i];
          k.col(1) = idem[j];
          paired = true;
        }
      }
    }
    if (!paired) {
      throw CfaError("extend_to_cfa: idempotents do not sum to the unit");
    }
    canon = ghz_algebra();
  } else if (cls.kind == SloccKind::w) {
    // Nilpotent algebra: transport through the nilpotent direction and
    // the unit.
    Vec2 nil;
    bool found = false;
    double best = 0.0;
    for (const Vec2& dir : left_mult_directions(mult, 11, 6)) {
      Tensor u = state_from_vec2(dir);
      double sq = compose(mult, kron(u, u)).norm();
      if (!found || sq < best) {
        found = true;
        best = sq;
        nil = dir;
      }
    }
    if (!found || best > residual_floor(tol, 1.0)) {
      throw CfaError("extend_to_cfa: no nilpotent direction found");
    }
    nil = normalized_with_phase(nil);
    k.col(0) = nil;
    k.col(1) = Vec2(unit.entries()[0], unit.entries()[1]);
    canon = w_algebra();
  } else {
    throw CfaError("extend_to_cfa: multiplication tensor is not SLOCC-maximal");
  }

  if (std::abs(k.determinant()) <= tol.abs_eps) {
    throw CfaError("extend_to_cfa: transport basis is singular");
  }
  Tensor kt = map1_from_matrix(k);
  Tensor kinv = map1_from_matrix(k.inverse());

  CFA out;
  out.name = "extended";
  out.dim = 2;
  out.mult = mult;
  out.unit = unit;
  out.comult = compose(kron(kt, kt), compose(canon.comult, kinv));
  out.counit = compose(canon.counit, kinv);

  CfaReport rep = check_cfa(out, tol);
  if (!rep.pass) {
    throw CfaError("extend_to_cfa: extension failed the axiom check");
  }
  return out;
}

CFA conjugate_cfa(const CFA& c, const Tensor& L, const Tensor& Linv) {
  require_shapes(c, "conjugate_cfa");
  if (L.in_arity() != 1 || L.out_arity() != 1 || L.dim() != c.dim ||
      Linv.in_arity() != 1 || Linv.out_arity() != 1 || Linv.dim() != c.dim) {
    throw CfaError("conjugate_cfa: L and Linv must be single-leg maps");
  }
  CFA out;
  out.name = c.name.empty() ? "conjugate" : c.name + "-conj";
  out.dim = c.dim;
  out.mult = compose(L, compose(c.mult, kron(Linv, Linv)));
  out.unit = compose(L, c.unit);
  out.comult = compose(kron(L, L), compose(c.comult, Linv));
  out.counit = compose(c.counit, Linv);
  return out;
}

}  // namespace ghzw
