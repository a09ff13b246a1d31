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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ghzw/cfa.hpp"

namespace ghzw {
namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

int state_legs(const Tensor& psi, const char* who) {
  if (psi.in_arity() != 0 || psi.dim() != 2) {
    throw SloccError(std::string(who) + ": expected a qubit state (0 -> N)");
  }
  return psi.out_arity();
}

// 2 x 2^(N-1) reshape with the chosen leg indexing the rows; the remaining
// legs keep their relative order in the columns.
Mat leg_front_matrix(const Tensor& psi, int leg) {
  const int n = psi.out_arity();
  const std::int64_t half = std::int64_t(1) << (n - 1);
  Mat m = Mat::Zero(2, half);
  for (std::int64_t idx = 0; idx < (std::int64_t(1) << n); ++idx) {
    int a = (idx >> (n - 1 - leg)) & 1;
    std::int64_t rest = 0;
    for (int j = 0; j < n; ++j) {
      if (j == leg) continue;
      rest = rest * 2 + ((idx >> (n - 1 - j)) & 1);
    }
    m(a, rest) = psi.entries()[idx];
  }
  return m;
}

int leg_rank(const Tensor& psi, int leg, const Tolerance& tol) {
  Eigen::JacobiSVD<Mat> svd(leg_front_matrix(psi, leg));
  const auto& sv = svd.singularValues();
  double cut = std::max(tol.abs_eps, tol.rel_eps * sv(0));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++r;
  }
  return r;
}

Tensor apply_effect_on_leg(const Tensor& psi, const Tensor& xi, int leg) {
  const int n = psi.out_arity();
  Tensor op = kron(Tensor::identity(leg), kron(xi, Tensor::identity(n - 1 - leg)));
  return compose(op, psi);
}

Mat reshape2x2(const Tensor& psi) {
  Mat m(2, 2);
  m(0, 0) = psi.entries()[0];
  m(0, 1) = psi.entries()[1];
  m(1, 0) = psi.entries()[2];
  m(1, 1) = psi.entries()[3];
  return m;
}

Tensor effect2_from_matrix(const Mat& m) {
  Tensor phi(2, 0);
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b < 2; ++b) phi.at(0, x * 2 + b) = m(x, b);
  }
  return phi;
}

// L applied to every leg of a state, tensor-free fast path.
Tensor apply_uniform(const Mat& l, const Tensor& psi) {
  const int n = psi.out_arity();
  Tensor out = psi;
  for (int leg = 0; leg < n; ++leg) {
    Tensor next(0, n);
    const std::int64_t total = std::int64_t(1) << n;
    const std::int64_t bit = std::int64_t(1) << (n - 1 - leg);
    for (std::int64_t idx = 0; idx < total; ++idx) {
      int a = (idx >> (n - 1 - leg)) & 1;
      cplx acc = 0;
      for (int b = 0; b < 2; ++b) {
        acc += l(a, b) * out.entries()[(idx & ~bit) | (std::int64_t(b) << (n - 1 - leg))];
      }
      next.entries()[idx] = acc;
    }
    out = next;
  }
  return out;
}

Tensor map1_from_matrix(const Mat& m) {
  Tensor t(1, 1);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) t.at(a, b) = m(a, b);
  }
  return t;
}

Mat matrix_from_map1(const Tensor& t) {
  Mat m(2, 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) m(a, b) = t.at(a, b);
  }
  return m;
}

}  // namespace

bool SloccLabel::operator==(const SloccLabel& other) const {
  if (kind != other.kind || position != other.position) return false;
  if (children.size() != other.children.size()) return false;
  if (children.size() == 2) {
    return (children[0] == other.children[0] && children[1] == other.children[1]) ||
           (children[0] == other.children[1] && children[1] == other.children[0]);
  }
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (!(children[i] == other.children[i])) return false;
  }
  return true;
}

std::string SloccLabel::str() const {
  switch (kind) {
    case SloccKind::zero: return "zero";
    case SloccKind::qubit: return "qubit";
    case SloccKind::product: return "product";
    case SloccKind::bell: return "bell";
    case SloccKind::ghz: return "ghz";
    case SloccKind::w: return "w";
    case SloccKind::bisep: {
      std::ostringstream os;
      os << "bisep(" << position << ")";
      return os.str();
    }
    case SloccKind::pair_node: {
      std::vector<std::string> parts;
      parts.reserve(children.size());
      for (const auto& c : children) parts.push_back(c.str());
      std::sort(parts.begin(), parts.end());
      std::string out = "{";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i];
      }
      out += "}";
      return out;
    }
  }
  return "?";
}

bool is_symmetric_state(const Tensor& psi, const Tolerance& tol) {
  const int n = state_legs(psi, "is_symmetric_state");
  for (int k = 0; k + 1 < n; ++k) {
    std::vector<int> perm(n);
    for (int j = 0; j < n; ++j) perm[j] = j;
    std::swap(perm[k], perm[k + 1]);
    if (!approx_equal(swap_legs(psi, {}, perm), psi, tol)) return false;
  }
  return true;
}

std::optional<Tensor> bipartite_maximal(const Tensor& psi, const Tolerance& tol) {
  if (state_legs(psi, "bipartite_maximal") != 2) {
    throw SloccError("bipartite_maximal: expected a two-qubit state");
  }
  Mat m = reshape2x2(psi);
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(1) <= std::max(tol.abs_eps, tol.rel_eps * sv(0))) return std::nullopt;
  return effect2_from_matrix(m.inverse());
}

std::optional<std::array<MaximalityWitness, 3>> strong_maximal(
    const Tensor& psi, const Tolerance& tol) {
  if (state_legs(psi, "strong_maximal") != 3) {
    throw SloccError("strong_maximal: expected a three-qubit state");
  }
  const double scale = psi.norm() * psi.norm();
  const double floor = tol.abs_eps + tol.rel_eps * scale;
  static const std::vector<std::vector<cplx>> kCandidates = {
      {1, 0}, {0, 1}, {1, 1}, {1, -1}, {1, cplx(0, 1)}, {1, cplx(0, -1)},
      {2, 1}, {1, 2}};

  std::array<MaximalityWitness, 3> out;
  for (int leg = 0; leg < 3; ++leg) {
    Mat m0 = reshape2x2(apply_effect_on_leg(psi, Tensor::bra({0}), leg));
    Mat m1 = reshape2x2(apply_effect_on_leg(psi, Tensor::bra({1}), leg));
    cplx c0 = m0.determinant();
    cplx c2 = m1.determinant();
    cplx c1 = (m0 + m1).determinant() - c0 - c2;
    if (std::abs(c0) <= floor && std::abs(c1) <= floor && std::abs(c2) <= floor) {
      return std::nullopt;
    }
    bool found = false;
    for (const auto& cand : kCandidates) {
      cplx q = c0 * cand[0] * cand[0] + c1 * cand[0] * cand[1] + c2 * cand[1] * cand[1];
      if (std::abs(q) <= floor) continue;
      Tensor xi = Tensor::effect1(cand);
      auto phi = bipartite_maximal(apply_effect_on_leg(psi, xi, leg), tol);
      if (!phi) continue;
      out[leg] = MaximalityWitness{xi, *phi};
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }
  return out;
}

Tensor glue_pair(const Tensor& psi, const Tensor& phi) {
  const int n = state_legs(psi, "glue_pair");
  if (n < 2) throw SloccError("glue_pair: need at least two legs");
  if (phi.in_arity() != 2 || phi.out_arity() != 0) {
    throw SloccError("glue_pair: phi must be a bipartite effect");
  }
  Tensor op = kron(Tensor::identity(n - 1), kron(phi, Tensor::identity(n - 1)));
  return compose(op, kron(psi, psi));
}

std::optional<Tensor> strong_symmetric(const Tensor& psi, const Tolerance& tol) {
  const int n = state_legs(psi, "strong_symmetric");
  if (n < 2) throw SloccError("strong_symmetric: need at least two legs");
  if (!is_symmetric_state(psi, tol)) {
    throw SloccError("strong_symmetric: state is not symmetric");
  }

  // Glued states for the four basis effects; symmetry of a glue is linear
  // in phi, so the valid effects form the nullspace of the stacked
  // transposition constraints.
  const int glegs = 2 * n - 2;
  const std::int64_t gdim = std::int64_t(1) << glegs;
  std::array<Tensor, 4> basis_glue = {
      glue_pair(psi, Tensor::bra({0, 0})), glue_pair(psi, Tensor::bra({0, 1})),
      glue_pair(psi, Tensor::bra({1, 0})), glue_pair(psi, Tensor::bra({1, 1}))};

  Mat constraints((glegs - 1) * gdim, 4);
  for (int k = 0; k + 1 < glegs; ++k) {
    std::vector<int> perm(glegs);
    for (int j = 0; j < glegs; ++j) perm[j] = j;
    std::swap(perm[k], perm[k + 1]);
    for (int c = 0; c < 4; ++c) {
      Tensor diff = swap_legs(basis_glue[c], {}, perm) - basis_glue[c];
      for (std::int64_t i = 0; i < gdim; ++i) {
        constraints(std::int64_t(k) * gdim + i, c) = diff.entries()[i];
      }
    }
  }

  Eigen::JacobiSVD<Mat> svd(constraints, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cut = std::max(tol.abs_eps, sv.size() ? tol.rel_eps * sv(0) : 0.0);
  std::vector<Vec> null_basis;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cut) null_basis.push_back(svd.matrixV().col(i));
  }
  if (null_basis.empty()) return std::nullopt;

  // Candidate effects in the nullspace: the basis vectors plus simple
  // two-vector combinations.  Preference goes to the effect whose own 2x2
  // reshape is least singular (compact-structure partners are invertible);
  // ties break on the real part of the entry sum, then on grid order.
  std::vector<Vec> candidates = null_basis;
  for (std::size_t i = 0; i < null_basis.size(); ++i) {
    for (std::size_t j = i + 1; j < null_basis.size(); ++j) {
      for (cplx w : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
        candidates.push_back((null_basis[i] + w * null_basis[j]).normalized());
      }
    }
  }

  const double glue_floor = tol.abs_eps + tol.rel_eps * psi.norm() * psi.norm();
  bool have_best = false;
  Vec best;
  double best_smin = -1.0;
  double best_resum = 0.0;
  for (const auto& cand : candidates) {
    Mat m(2, 2);
    m << cand(0), cand(1), cand(2), cand(3);
    Tensor phi = effect2_from_matrix(m);
    if (glue_pair(psi, phi).norm() <= glue_floor) continue;
    Eigen::JacobiSVD<Mat> psvd(m);
    double smin = psvd.singularValues()(1);
    double resum = (cand(0) + cand(1) + cand(2) + cand(3)).real();
    if (!have_best || smin > best_smin + 1e-12 ||
        (smin > best_smin - 1e-12 && resum > best_resum + 1e-12)) {
      have_best = true;
      best = cand;
      best_smin = smin;
      best_resum = resum;
    }
  }
  if (!have_best) return std::nullopt;

  // Deterministic normalisation: largest-magnitude entry becomes 1.
  int arg = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(best(i)) > std::abs(best(arg)) + 1e-12) arg = i;
  }
  best /= best(arg);
  Mat m(2, 2);
  m << best(0), best(1), best(2), best(3);
  return effect2_from_matrix(m);
}

std::optional<MaximalityWitness> is_frobenius_state(const Tensor& psi,
                                                    const Tolerance& tol,
                                                    std::uint64_t seed) {
  if (state_legs(psi, "is_frobenius_state") != 3) {
    throw SloccError("is_frobenius_state: expected a three-qubit state");
  }
  if (!is_symmetric_state(psi, tol)) return std::nullopt;

  std::vector<Tensor> candidates;
  SloccLabel cls = tripartite_classify(psi, tol);
  try {
    if (cls.kind == SloccKind::ghz) {
      auto gn = ghz_normalize(psi, tol);
      Mat inv = matrix_from_map1(gn.L).inverse();
      cplx fold = std::pow(gn.lambda, -1.0 / 3.0);
      candidates.push_back(Tensor::effect1(
          {fold * (inv(0, 0) + inv(1, 0)), fold * (inv(0, 1) + inv(1, 1))}));
    } else if (cls.kind == SloccKind::w) {
      auto wn = w_uniform_normalize(psi, tol);
      Mat inv = matrix_from_map1(wn.L).inverse();
      candidates.push_back(Tensor::effect1({inv(0, 0), inv(0, 1)}));
    }
  } catch (const CfaError&) {
    // fall through to the random search
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 32; ++i) {
    candidates.push_back(Tensor::effect1(
        {cplx(u(rng), u(rng)), cplx(u(rng), u(rng))}));
  }

  for (const Tensor& xi : candidates) {
    CFA c;
    try {
      c = cfa_from_state(psi, xi, tol);
    } catch (const CfaError&) {
      continue;
    }
    if (!check_cfa(c, tol).pass) continue;
    if (!approx_equal(spider(c, 0, 3), psi, tol)) continue;
    Tensor phi = derive(c, tol).cap;
    if (!is_symmetric_state(glue_pair(psi, phi), tol)) continue;
    return MaximalityWitness{xi, phi};
  }
  return std::nullopt;
}

cplx hyperdeterminant(const Tensor& psi) {
  if (state_legs(psi, "hyperdeterminant") != 3) {
    throw SloccError("hyperdeterminant: expected a three-qubit state");
  }
  const auto& e = psi.entries();
  auto a = [&](int i, int j, int k) { return e[i * 4 + j * 2 + k]; };
  cplx s1 = a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1) +
            a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0) +
            a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1) +
            a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1);
  cplx s2 = a(0, 0, 0) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 1) +
            a(0, 0, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 1) +
            a(0, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(1, 1, 1) +
            a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 0) +
            a(0, 0, 1) * a(1, 0, 0) * a(0, 1, 1) * a(1, 1, 0) +
            a(0, 1, 0) * a(1, 0, 0) * a(0, 1, 1) * a(1, 0, 1);
  cplx s3 = a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0) +
            a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0) * a(1, 1, 1);
  return s1 - 2.0 * s2 + 4.0 * s3;
}

SloccLabel tripartite_classify(const Tensor& psi, const Tolerance& tol) {
  if (state_legs(psi, "tripartite_classify") != 3) {
    throw SloccError("tripartite_classify: expected a three-qubit state");
  }
  const double norm = psi.norm();
  if (norm <= tol.abs_eps) return SloccLabel::leaf(SloccKind::zero);

  int ranks[3];
  int ones = 0;
  for (int leg = 0; leg < 3; ++leg) {
    ranks[leg] = leg_rank(psi, leg, tol);
    if (ranks[leg] == 1) ++ones;
  }
  if (ones == 3) return SloccLabel::leaf(SloccKind::product);
  if (ones >= 1) {
    for (int leg = 0; leg < 3; ++leg) {
      if (ranks[leg] == 1) return SloccLabel::bisep(leg + 1);
    }
  }
  cplx det = hyperdeterminant(psi);
  double floor = tol.abs_eps + tol.rel_eps * std::pow(norm, 4);
  return SloccLabel::leaf(std::abs(det) > floor ? SloccKind::ghz : SloccKind::w);
}

namespace {

// Levenberg-Marquardt refinement of L against psi ~ lambda L^(x)N phi,
// over the eight real parameters of L; lambda is eliminated exactly by a
// least-squares fit at every step.
struct UniformFit {
  Mat l;
  cplx lambda;
  double residual;
};

UniformFit refine_uniform(Mat l, const Tensor& psi, const Tensor& phi,
                          int iterations) {
  auto eval = [&](const Mat& m) {
    Tensor moved = apply_uniform(m, phi);
    auto [lam, resid] = best_scale(psi, moved);
    return std::pair<cplx, double>(lam, resid);
  };
  auto pack = [](const Mat& m, double* p) {
    for (int i = 0; i < 4; ++i) {
      p[2 * i] = m(i / 2, i % 2).real();
      p[2 * i + 1] = m(i / 2, i % 2).imag();
    }
  };
  auto unpack = [](const double* p) {
    Mat m(2, 2);
    for (int i = 0; i < 4; ++i) {
      m(i / 2, i % 2) = cplx(p[2 * i], p[2 * i + 1]);
    }
    return m;
  };

  double p[8];
  pack(l, p);
  auto [lam, best] = eval(l);
  double mu = 1e-3;
  for (int it = 0; it < iterations; ++it) {
    // Numerical gradient of the residual; cheap at these sizes.
    double grad[8];
    const double h = 1e-7 * std::max(1.0, std::sqrt(best));
    for (int i = 0; i < 8; ++i) {
      double saved = p[i];
      p[i] = saved + h;
      double up = eval(unpack(p)).second;
      p[i] = saved - h;
      double down = eval(unpack(p)).second;
      p[i] = saved;
      grad[i] = (up - down) / (2 * h);
    }
    double q[8];
    bool improved = false;
    for (int attempt = 0; attempt < 12 && !improved; ++attempt) {
      double step = mu;
      for (int i = 0; i < 8; ++i) q[i] = p[i] - step * grad[i];
      double trial = eval(unpack(q)).second;
      if (trial < best) {
        for (int i = 0; i < 8; ++i) p[i] = q[i];
        best = trial;
        mu *= 1.8;
        improved = true;
      } else {
        mu *= 0.4;
      }
    }
    if (!improved && mu < 1e-15) break;
    if (best < 1e-14) break;
  }
  Mat out = unpack(p);
  auto fin = eval(out);
  return UniformFit{out, fin.first, fin.second};
}

}  // namespace

std::optional<std::pair<Tensor, cplx>> uniform_L_solve(const Tensor& psi,
                                                       const Tensor& phi,
                                                       const Tolerance& tol,
                                                       std::uint64_t seed) {
  const int n = state_legs(psi, "uniform_L_solve");
  if (state_legs(phi, "uniform_L_solve") != n) {
    throw SloccError("uniform_L_solve: leg counts differ");
  }
  if (!is_symmetric_state(psi, tol) || !is_symmetric_state(phi, tol)) {
    throw SloccError("uniform_L_solve: both states must be symmetric");
  }
  const double accept = tol.abs_eps + tol.rel_eps * psi.norm();

  auto certify = [&](const Mat& l, cplx lambda) -> std::optional<std::pair<Tensor, cplx>> {
    if (std::abs(l.determinant()) <= tol.abs_eps) return std::nullopt;
    Tensor moved = apply_uniform(l, phi).scaled(lambda);
    if (distance(moved, psi) > accept) return std::nullopt;
    return std::make_pair(map1_from_matrix(l), lambda);
  };

  // Closed forms when both sides are three-qubit GHZ- or W-class states.
  if (n == 3) {
    SloccLabel cp = tripartite_classify(psi, tol);
    SloccLabel cf = tripartite_classify(phi, tol);
    try {
      if (cp.kind == SloccKind::ghz && cf.kind == SloccKind::ghz) {
        auto np = ghz_normalize(psi, tol);
        auto nf = ghz_normalize(phi, tol);
        Mat l = matrix_from_map1(np.L) * matrix_from_map1(nf.L).inverse();
        if (auto got = certify(l, np.lambda / nf.lambda)) return got;
      } else if (cp.kind == SloccKind::w && cf.kind == SloccKind::w) {
        auto np = w_uniform_normalize(psi, tol);
        auto nf = w_uniform_normalize(phi, tol);
        Mat l = matrix_from_map1(np.L) * matrix_from_map1(nf.L).inverse();
        if (auto got = certify(l, np.lambda / nf.lambda)) return got;
      }
    } catch (const CfaError&) {
      // fall through to the numerical search
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Mat> starts;
  Mat id2 = Mat::Identity(2, 2);
  Mat x2(2, 2), h2(2, 2);
  x2 << 0, 1, 1, 0;
  h2 << 1, 1, 1, -1;
  starts.push_back(id2);
  starts.push_back(x2);
  starts.push_back(h2 / std::sqrt(2.0));
  for (int i = 0; i < 37; ++i) {
    Mat m(2, 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) m(r, c) = cplx(u(rng), u(rng));
    }
    starts.push_back(m);
  }

  for (const Mat& start : starts) {
    UniformFit fit = refine_uniform(start, psi, phi, 400);
    if (auto got = certify(fit.l, fit.lambda)) return got;
  }
  return std::nullopt;
}

SloccLabel superclass_label(const Tensor& psi, const Tolerance& tol) {
  const int n = state_legs(psi, "superclass_label");
  if (psi.norm() <= tol.abs_eps) {
    throw SloccError("superclass_label: zero state");
  }
  if (n == 1) return SloccLabel::leaf(SloccKind::qubit);
  if (n == 2) {
    Eigen::JacobiSVD<Mat> svd(reshape2x2(psi));
    const auto& sv = svd.singularValues();
    bool maximal = sv(1) > std::max(tol.abs_eps, tol.rel_eps * sv(0));
    return SloccLabel::leaf(maximal ? SloccKind::bell : SloccKind::product);
  }
  if (n == 3) return tripartite_classify(psi, tol);

  std::vector<Tensor> span = right_singular_space(psi, tol);
  std::vector<SloccLabel> kids;
  kids.reserve(span.size());
  for (const Tensor& v : span) kids.push_back(superclass_label(v, tol));
  return SloccLabel::node(std::move(kids));
}

}  // namespace ghzw
