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

#include "ghzw/pair.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "ghzw/dsl.hpp"

namespace ghzw {
namespace {

using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;

double floor_of(const Tolerance& tol, double scale) {
  return tol.abs_eps + tol.rel_eps * scale;
}

Tensor map1(const Mat2& m) {
  Tensor t(1, 1);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) t.at(a, b) = m(a, b);
  }
  return t;
}

Mat2 basis_of(const Tensor& e0, const Tensor& e1) {
  Mat2 m;
  m(0, 0) = e0.entries()[0];
  m(1, 0) = e0.entries()[1];
  m(0, 1) = e1.entries()[0];
  m(1, 1) = e1.entries()[1];
  return m;
}

Tensor cap_of(const CFA& c) { return compose(c.counit, c.mult); }
Tensor cup_of(const CFA& c) { return compose(c.comult, c.unit); }

cplx circle_of(const CFA& c) {
  return compose(cap_of(c), cup_of(c)).scalar_value();
}

Mat kron_mat(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Tensor apply_on_leg(const Tensor& state, int leg, const Tensor& m) {
  int n = state.out_arity();
  return compose(kron(Tensor::identity(leg),
                      kron(m, Tensor::identity(n - 1 - leg))),
                 state);
}

// Builds a one-input one-output cell wiring a named state into the given
// multiplication, optionally sandwiched between ticks.
Diagram mult_cell(const std::string& algebra, const std::string& state_name,
                  std::vector<cplx> amps, bool ticked) {
  Diagram d;
  d.n_inputs = 1;
  d.n_outputs = 1;
  int s = d.add_node(NodeKind::state(state_name, std::move(amps)));
  int m = d.add_node(NodeKind::generator(algebra, GenOp::mult));
  d.wires.push_back({Endpoint::node_out(s, 0), Endpoint::node_in(m, 0)});
  if (ticked) {
    int t_in = d.add_node(NodeKind::tick());
    int t_out = d.add_node(NodeKind::tick());
    d.wires.push_back({Endpoint::boundary_in(0), Endpoint::node_in(t_in, 0)});
    d.wires.push_back({Endpoint::node_out(t_in, 0), Endpoint::node_in(m, 1)});
    d.wires.push_back({Endpoint::node_out(m, 0), Endpoint::node_in(t_out, 0)});
    d.wires.push_back({Endpoint::node_out(t_out, 0), Endpoint::boundary_out(0)});
  } else {
    d.wires.push_back({Endpoint::boundary_in(0), Endpoint::node_in(m, 1)});
    d.wires.push_back({Endpoint::node_out(m, 0), Endpoint::boundary_out(0)});
  }
  d.validate();
  return d;
}

}  // namespace

Tensor make_tick(const CFA& scfa, const CFA& acfa) {
  if (scfa.dim != acfa.dim) {
    throw PairError("make_tick: algebra dimensions differ");
  }
  Tensor id = Tensor::identity(1, scfa.dim);
  return compose(kron(cap_of(acfa), id), kron(id, cup_of(scfa)));
}

GhzwPair canonical_pair() {
  GhzwPair p;
  p.scfa = ghz_algebra();
  p.acfa = w_algebra();
  p.tick = make_tick(p.scfa, p.acfa);
  return p;
}

GhzwPair conjugate_pair(const GhzwPair& p, const Tensor& L, const Tensor& Linv) {
  GhzwPair out;
  out.scfa = conjugate_cfa(p.scfa, L, Linv);
  out.acfa = conjugate_cfa(p.acfa, L, Linv);
  out.tick = compose(L, compose(p.tick, Linv));
  return out;
}

PairCheckReport pair_check(const GhzwPair& pair, const Tolerance& tol) {
  if (pair.scfa.dim != pair.acfa.dim || pair.tick.in_arity() != 1 ||
      pair.tick.out_arity() != 1 || pair.tick.dim() != pair.scfa.dim) {
    throw PairError("pair_check: malformed pair");
  }
  const int dim = pair.scfa.dim;
  const Tensor id = Tensor::identity(1, dim);

  PairCheckReport report;
  auto add = [&](const std::string& law, double residual, bool pass) {
    report.checks.push_back({law, residual, pass});
  };
  auto add_eq = [&](const std::string& law, const Tensor& lhs, const Tensor& rhs) {
    double r = distance(lhs, rhs);
    add(law, r, r <= floor_of(tol, std::max(lhs.norm(), rhs.norm())));
  };

  Tensor white_loop = compose(pair.scfa.mult, pair.scfa.comult);
  add_eq("white loop is the identity", white_loop, id);

  Tensor black_loop = compose(pair.acfa.mult, pair.acfa.comult);
  Tensor lolli = standard_partial_trace(pair.acfa.comult, 1, 0);
  Tensor cololli = standard_partial_trace(pair.acfa.mult, 0, 0);
  double anti = distance(cplx(double(dim), 0.0) * black_loop,
                         compose(lolli, cololli));
  double trace = std::abs(standard_partial_trace(black_loop, 0, 0).scalar_value());
  add("black loop splits through its trace states",
      std::max(anti, trace),
      std::max(anti, trace) <= floor_of(tol, black_loop.norm() * dim));

  add_eq("tick involution", compose(pair.tick, pair.tick), id);
  add_eq("white counit absorbs tick", compose(pair.scfa.counit, pair.tick),
         pair.scfa.counit);
  add_eq("white comult copies the black unit",
         compose(pair.scfa.comult, pair.acfa.unit),
         kron(pair.acfa.unit, pair.acfa.unit));

  cplx circle = circle_of(pair.acfa);
  add_eq("white comult copies the loop state against the circle",
         circle * compose(pair.scfa.comult, lolli), kron(lolli, lolli));

  Tensor ticked_unit = compose(pair.tick, pair.acfa.unit);
  auto [copy_scale, copy_resid] =
      best_scale(compose(pair.acfa.comult, ticked_unit),
                 kron(ticked_unit, ticked_unit));
  add("black comult copies the ticked black unit up to a scalar", copy_resid,
      copy_resid <= floor_of(tol, ticked_unit.norm()) &&
          std::abs(copy_scale) > tol.abs_eps);

  auto add_scalar = [&](const std::string& law, const Tensor& t) {
    cplx s = t.scalar_value();
    double r = std::abs(s - 1.0);
    add(law, r, r <= floor_of(tol, 1.0));
  };
  add_scalar("black counit . tick . black unit = 1",
             compose(pair.acfa.counit, ticked_unit));
  add_scalar("black counit . tick . white unit = 1",
             compose(pair.acfa.counit, compose(pair.tick, pair.scfa.unit)));
  add_scalar("black counit . white unit = 1",
             compose(pair.acfa.counit, pair.scfa.unit));

  Mat span(dim, 2);
  for (int i = 0; i < dim; ++i) {
    span(i, 0) = pair.acfa.unit.entries()[i];
    span(i, 1) = lolli.entries()[i];
  }
  Eigen::JacobiSVD<Mat> svd(span);
  double smin = svd.singularValues()(1);
  double smax = svd.singularValues()(0);
  add("black unit and loop state independent (distance from dependence)", smin,
      smin > std::max(tol.abs_eps, tol.rel_eps * smax));

  report.max_residual = 0.0;
  report.pass = true;
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    // The independence check's residual grows with health; keep it out of
    // the max.
    if (i + 1 < report.checks.size()) {
      report.max_residual = std::max(report.max_residual, report.checks[i].residual);
    }
    report.pass = report.pass && report.checks[i].pass;
  }
  return report;
}

PartnerResult partner_from_scfa(const CFA& scfa, const Tolerance& tol) {
  if (scfa.dim != 2) throw PairError("partner_from_scfa: dim 2 only");
  if (!check_special(scfa, tol)) {
    throw PairError("partner_from_scfa: algebra is not special");
  }
  std::vector<Tensor> points = copiable_points(scfa, tol);
  if (points.size() != 2) {
    throw PairError("partner_from_scfa: copiable points do not form a basis");
  }
  Mat2 e = basis_of(points[0], points[1]);
  if (std::abs(e.determinant()) <= tol.abs_eps) {
    throw PairError("partner_from_scfa: copiable points do not form a basis");
  }
  Mat2 eswap;
  eswap.col(0) = e.col(1);
  eswap.col(1) = e.col(0);

  PartnerResult out;
  out.acfa = conjugate_cfa(w_algebra(), map1(e), map1(e.inverse()));
  out.acfa.name = "partner";
  out.acfa_alt = conjugate_cfa(w_algebra(), map1(eswap), map1(eswap.inverse()));
  out.acfa_alt.name = "partner-alt";

  for (const CFA* cand : {&out.acfa, &out.acfa_alt}) {
    if (!check_antispecial(*cand, tol)) {
      throw PairError("partner_from_scfa: constructed partner is not anti-special");
    }
    GhzwPair p{scfa, *cand, make_tick(scfa, *cand)};
    if (!pair_check(p, tol).pass) {
      throw PairError("partner_from_scfa: constructed pair fails its checks");
    }
  }
  return out;
}

CFA partner_from_acfa(const CFA& acfa, const Tolerance& tol) {
  if (acfa.dim != 2) throw PairError("partner_from_acfa: dim 2 only");
  if (!check_antispecial(acfa, tol)) {
    throw PairError("partner_from_acfa: algebra is not anti-special");
  }
  Tensor lolli = standard_partial_trace(acfa.comult, 1, 0);
  cplx circle = circle_of(acfa);
  if (std::abs(circle) <= tol.abs_eps) {
    throw PairError("partner_from_acfa: degenerate circle scalar");
  }
  Tensor e0 = lolli.scaled(1.0 / circle);
  Mat2 e = basis_of(e0, acfa.unit);
  if (std::abs(e.determinant()) <= tol.abs_eps) {
    throw PairError("partner_from_acfa: unit and loop state are dependent");
  }

  CFA scfa = conjugate_cfa(ghz_algebra(), map1(e), map1(e.inverse()));
  scfa.name = "partner";
  if (!check_special(scfa, tol)) {
    throw PairError("partner_from_acfa: constructed partner is not special");
  }
  GhzwPair p{scfa, acfa, make_tick(scfa, acfa)};
  if (!pair_check(p, tol).pass) {
    throw PairError("partner_from_acfa: constructed pair fails its checks");
  }
  return scfa;
}

Tensor dot_transpose(const CFA& c, const Tensor& f) {
  if (f.dim() != c.dim) {
    throw PairError("dot_transpose: dimension mismatch");
  }
  const int dim = c.dim;
  Tensor cap = cap_of(c);
  Tensor cup = cup_of(c);
  Mat cm(dim, dim), km(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      cm(a, b) = cap.at(0, a * dim + b);
      km(a, b) = cup.at(a * dim + b, 0);
    }
  }

  const int n = f.in_arity();
  const int m = f.out_arity();
  Mat cpow = Mat::Identity(1, 1);
  for (int i = 0; i < m; ++i) cpow = kron_mat(cpow, cm);
  Mat kpow = Mat::Identity(1, 1);
  for (int i = 0; i < n; ++i) kpow = kron_mat(kpow, km);

  Mat fm(f.rows(), f.cols());
  for (std::int64_t r = 0; r < f.rows(); ++r) {
    for (std::int64_t col = 0; col < f.cols(); ++col) fm(r, col) = f.at(r, col);
  }
  // Inputs of the transpose meet the cap against f's outputs; outputs meet
  // the cup against f's inputs.  No leg reversal.
  Mat res = kpow * fm.transpose() * cpow.transpose();

  Tensor out(m, n, dim);
  for (std::int64_t r = 0; r < out.rows(); ++r) {
    for (std::int64_t col = 0; col < out.cols(); ++col) out.at(r, col) = res(r, col);
  }
  return out;
}

SemanticsTable pair_semantics(const GhzwPair& pair) {
  if (pair.scfa.name == pair.acfa.name) {
    throw PairError("pair_semantics: the two algebras need distinct names");
  }
  SemanticsTable t;
  t.algebras.emplace(pair.scfa.name, semantics_of(pair.scfa));
  t.algebras.emplace(pair.acfa.name, semantics_of(pair.acfa));
  t.tick = pair.tick;
  return t;
}

Diagram qmux_diagram(int branch_wires) {
  if (branch_wires < 1) {
    throw PairError("qmux_diagram: need at least one wire per branch");
  }
  const int k = branch_wires;
  Diagram d;
  d.n_inputs = 2 * k;
  d.n_outputs = k + 1;

  auto ticked = [&](Endpoint src, Endpoint dst) {
    int t = d.add_node(NodeKind::tick());
    d.wires.push_back({src, Endpoint::node_in(t, 0)});
    d.wires.push_back({Endpoint::node_out(t, 0), dst});
  };

  Endpoint control{};
  for (int i = 0; i < k; ++i) {
    int dpsi = d.add_node(NodeKind::generator("w", GenOp::comult));
    int dphi = d.add_node(NodeKind::generator("w", GenOp::comult));
    int mo = d.add_node(NodeKind::generator("ghz", GenOp::mult));
    int mb = d.add_node(NodeKind::generator("w", GenOp::mult));

    d.wires.push_back({Endpoint::boundary_in(i), Endpoint::node_in(dpsi, 0)});
    d.wires.push_back({Endpoint::boundary_in(k + i), Endpoint::node_in(dphi, 0)});

    ticked(Endpoint::node_out(dpsi, 0), Endpoint::node_in(mo, 0));
    d.wires.push_back({Endpoint::node_out(dphi, 0), Endpoint::node_in(mo, 1)});
    ticked(Endpoint::node_out(dpsi, 1), Endpoint::node_in(mb, 0));
    ticked(Endpoint::node_out(dphi, 1), Endpoint::node_in(mb, 1));
    ticked(Endpoint::node_out(mb, 0), Endpoint::boundary_out(1 + i));

    Endpoint pre = Endpoint::node_out(mo, 0);
    if (i == 0) {
      control = pre;
    } else {
      int chain = d.add_node(NodeKind::generator("ghz", GenOp::mult));
      d.wires.push_back({control, Endpoint::node_in(chain, 0)});
      d.wires.push_back({pre, Endpoint::node_in(chain, 1)});
      control = Endpoint::node_out(chain, 0);
    }
  }
  ticked(control, Endpoint::boundary_out(0));
  d.validate();
  return d;
}

QmuxCertificate qmux_check(const Tensor& psi, const Tensor& phi,
                           const Tolerance& tol, std::uint64_t seed) {
  if (psi.in_arity() != 0 || phi.in_arity() != 0 || psi.dim() != 2 ||
      phi.dim() != 2 || psi.out_arity() != phi.out_arity() ||
      psi.out_arity() < 1) {
    throw PairError("qmux_check: branch states must share a positive leg count");
  }
  const int k = psi.out_arity();
  cplx over_psi = psi.entries().back();
  cplx over_phi = phi.entries().back();
  if (std::abs(over_psi) <= tol.abs_eps || std::abs(over_phi) <= tol.abs_eps) {
    throw PairError(
        "qmux_check: vanishing all-ones amplitude; re-represent the branch "
        "state within its class first");
  }

  QmuxCertificate cert;
  Tensor mux = evaluate(qmux_diagram(k), canonical_semantics());
  cert.output = compose(mux, kron(psi, phi));
  cert.target = over_phi * kron(Tensor::ket({0}), psi) +
                over_psi * kron(Tensor::ket({1}), phi);

  const int legs = k + 1;
  cert.local_maps.assign(legs, Tensor::identity(1));

  auto moved = [&]() {
    Tensor t = cert.output;
    for (int i = 0; i < legs; ++i) t = apply_on_leg(t, i, cert.local_maps[i]);
    return t;
  };
  auto score = [&]() {
    auto [lam, resid] = best_scale(cert.target, moved());
    return std::abs(lam) > tol.abs_eps ? resid : cert.target.norm();
  };

  double resid = score();
  const double ok = floor_of(tol, std::max(cert.output.norm(), cert.target.norm()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int restart = 0; restart < 3 && resid > ok; ++restart) {
    if (restart > 0) {
      for (int i = 0; i < legs; ++i) {
        Tensor r(1, 1);
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            r.at(a, b) = cplx(a == b ? 1.0 : 0.0, 0.0) + 0.3 * cplx(u(rng), u(rng));
          }
        }
        cert.local_maps[i] = r;
      }
    }
    for (int round = 0; round < 60; ++round) {
      for (int i = 0; i < legs; ++i) {
        // The target is linear in the i-th map; solve that leg by least
        // squares with the others held fixed.
        Tensor z = cert.output;
        for (int j = 0; j < legs; ++j) {
          if (j != i) z = apply_on_leg(z, j, cert.local_maps[j]);
        }
        const std::int64_t rows = z.rows();
        Mat a = Mat::Zero(rows, 4);
        Eigen::VectorXcd b(rows);
        const std::int64_t stride = std::int64_t(1) << (legs - 1 - i);
        for (std::int64_t t = 0; t < rows; ++t) {
          b(t) = cert.target.entries()[t];
          int p = int((t / stride) & 1);
          for (int q = 0; q < 2; ++q) {
            std::int64_t src =
                (t - std::int64_t(p) * stride) + std::int64_t(q) * stride;
            a(t, p * 2 + q) = z.entries()[src];
          }
        }
        Eigen::Vector4cd sol = a.completeOrthogonalDecomposition().solve(b);
        Tensor li(1, 1);
        li.at(0, 0) = sol(0);
        li.at(0, 1) = sol(1);
        li.at(1, 0) = sol(2);
        li.at(1, 1) = sol(3);
        cert.local_maps[i] = li;
      }
      resid = distance(moved(), cert.target);
      if (resid <= ok) break;
    }
    resid = distance(moved(), cert.target);
  }

  cert.residual = resid;
  cert.pass = resid <= ok;
  return cert;
}

Tensor PLDU::reconstruct() const {
  return compose(p, compose(l, compose(d, u)));
}

PLDU pldu_decompose(const Tensor& a) {
  if (a.in_arity() != 1 || a.out_arity() != 1 || a.dim() != 2) {
    throw PairError("pldu_decompose: expected a single-qubit map");
  }
  const cplx a11 = a.at(0, 0), a12 = a.at(0, 1);
  const cplx a21 = a.at(1, 0), a22 = a.at(1, 1);

  PLDU out;
  out.swapped = (std::abs(a11) == 0.0 && std::abs(a21) != 0.0);
  const cplx b11 = out.swapped ? a21 : a11;
  const cplx b12 = out.swapped ? a22 : a12;
  const cplx b21 = out.swapped ? a11 : a21;
  const cplx b22 = out.swapped ? a12 : a22;

  cplx lv = 0.0, uv = 0.0, d1 = 0.0, d2 = b22;
  if (std::abs(b11) != 0.0) {
    lv = b21 / b11;
    uv = b12 / b11;
    d1 = b11;
    d2 = b22 - b21 * b12 / b11;
  }

  Tensor id = Tensor::identity(1);
  Tensor nt(1, 1);
  nt.at(0, 1) = 1;
  nt.at(1, 0) = 1;
  out.p = out.swapped ? nt : id;
  out.l = Tensor::identity(1);
  out.l.at(1, 0) = lv;
  out.u = Tensor::identity(1);
  out.u.at(0, 1) = uv;
  out.d = Tensor(1, 1);
  out.d.at(0, 0) = d1;
  out.d.at(1, 1) = d2;

  out.xi = Tensor::state1({lv, 1.0});
  out.phi = Tensor::state1({d1, d2});
  out.psi = Tensor::state1({uv, 1.0});

  Diagram diag = mult_cell("w", "psi", {uv, 1.0}, false);
  diag = compose_seq(diag, mult_cell("ghz", "phi", {d1, d2}, false));
  diag = compose_seq(diag, mult_cell("w", "xi", {lv, 1.0}, true));
  if (out.swapped) diag = compose_seq(diag, tick_diagram());
  out.diagram = std::move(diag);
  return out;
}

Tensor synthesize(const Diagram& d,
                  const std::map<std::string, std::vector<cplx>>& bindings,
                  const SemanticsTable& table) {
  Diagram bound = d;
  for (NodeKind& node : bound.nodes) {
    bool variable = node.tag == NodeKind::Tag::variable_state ||
                    node.tag == NodeKind::Tag::variable_effect;
    if (!variable || node.vec) continue;
    auto it = bindings.find(node.name);
    if (it == bindings.end()) {
      throw PairError("synthesize: unbound variable '" + node.name + "'");
    }
    node.vec = it->second;
  }
  return evaluate(bound, table);
}

Tensor synthesize(const std::string& dsl_text,
                  const std::map<std::string, std::vector<cplx>>& bindings,
                  const SemanticsTable& table) {
  std::set<std::string> names;
  for (const auto& [name, sem] : table.algebras) names.insert(name);
  return synthesize(parse_dsl(dsl_text, names), bindings, table);
}

}  // namespace ghzw
