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

#include "ghzw/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace ghzw {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

using RowMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_matrix(const Tensor& t) {
  return {t.entries().data(), t.rows(), t.cols()};
}

}  // namespace

Tensor::Tensor(int in_arity, int out_arity, int dim)
    : in_(in_arity), out_(out_arity), dim_(dim) {
  if (in_ < 0 || out_ < 0 || dim_ < 1) {
    throw TensorError("invalid tensor shape");
  }
  rows_ = ipow(dim_, out_);
  cols_ = ipow(dim_, in_);
  e_.assign(rows_ * cols_, cplx(0.0, 0.0));
}

Tensor Tensor::scalar(cplx value, int dim) {
  Tensor t(0, 0, dim);
  t.e_[0] = value;
  return t;
}

Tensor Tensor::identity(int legs, int dim) {
  Tensor t(legs, legs, dim);
  for (std::int64_t i = 0; i < t.rows_; ++i) t.at(i, i) = 1.0;
  return t;
}

Tensor Tensor::swap(int dim) {
  Tensor t(2, 2, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) t.at(b * dim + a, a * dim + b) = 1.0;
  return t;
}

Tensor Tensor::ket(const std::vector<int>& digits, int dim) {
  Tensor t(0, static_cast<int>(digits.size()), dim);
  t.e_[t.pack(digits)] = 1.0;
  return t;
}

Tensor Tensor::bra(const std::vector<int>& digits, int dim) {
  Tensor t(static_cast<int>(digits.size()), 0, dim);
  t.e_[t.pack(digits)] = 1.0;
  return t;
}

Tensor Tensor::state1(const std::vector<cplx>& amps, int dim) {
  return state(1, amps, dim);
}

Tensor Tensor::effect1(const std::vector<cplx>& comps, int dim) {
  if (static_cast<int>(comps.size()) != dim) {
    throw TensorError("effect1: component count must equal dim");
  }
  Tensor t(1, 0, dim);
  t.e_ = comps;
  return t;
}

Tensor Tensor::state(int legs, const std::vector<cplx>& amps, int dim) {
  Tensor t(0, legs, dim);
  if (static_cast<std::int64_t>(amps.size()) != t.rows_) {
    throw TensorError("state: amplitude count must equal dim^legs");
  }
  t.e_ = amps;
  return t;
}

std::int64_t Tensor::pack(const std::vector<int>& digits) const {
  if (static_cast<int>(digits.size()) != in_ + out_) {
    throw TensorError("pack: digit count must equal total arity");
  }
  std::int64_t idx = 0;
  for (int d : digits) {
    if (d < 0 || d >= dim_) throw TensorError("pack: digit out of range");
    idx = idx * dim_ + d;
  }
  return idx;
}

cplx Tensor::scalar_value() const {
  if (!is_scalar()) throw TensorError("scalar_value: tensor has legs");
  return e_[0];
}

double Tensor::norm() const {
  double s = 0.0;
  for (const cplx& v : e_) s += std::norm(v);
  return std::sqrt(s);
}

Tensor Tensor::conjugate() const {
  Tensor r = *this;
  for (cplx& v : r.e_) v = std::conj(v);
  return r;
}

Tensor Tensor::scaled(cplx factor) const {
  Tensor r = *this;
  for (cplx& v : r.e_) v *= factor;
  return r;
}

std::string Tensor::str() const {
  std::ostringstream os;
  os << in_ << "->" << out_ << " (dim " << dim_ << "):";
  for (std::int64_t i = 0; i < size(); ++i) {
    const cplx v = e_[i];
    if (std::abs(v) < 1e-14) continue;
    os << " [" << i / cols_ << "," << i % cols_ << "]=" << v.real();
    if (std::abs(v.imag()) >= 1e-14) os << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
  }
  return os.str();
}

Tensor compose(const Tensor& g, const Tensor& f) {
  if (f.dim() != g.dim()) throw TensorError("compose: dimension mismatch");
  if (f.out_arity() != g.in_arity()) {
    throw TensorError("compose: arity mismatch (" + std::to_string(f.out_arity()) +
                      " outputs into " + std::to_string(g.in_arity()) + " inputs)");
  }
  Tensor r(f.in_arity(), g.out_arity(), f.dim());
  Eigen::Map<RowMat>(r.entries().data(), r.rows(), r.cols()) =
      as_matrix(g) * as_matrix(f);
  return r;
}

Tensor kron(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim()) throw TensorError("kron: dimension mismatch");
  Tensor r(a.in_arity() + b.in_arity(), a.out_arity() + b.out_arity(), a.dim());
  const std::int64_t br = b.rows(), bc = b.cols();
  for (std::int64_t ar = 0; ar < a.rows(); ++ar)
    for (std::int64_t ac = 0; ac < a.cols(); ++ac) {
      const cplx av = a.at(ar, ac);
      if (av == cplx(0.0, 0.0)) continue;
      for (std::int64_t r2 = 0; r2 < br; ++r2)
        for (std::int64_t c2 = 0; c2 < bc; ++c2) {
          r.at(ar * br + r2, ac * bc + c2) = av * b.at(r2, c2);
        }
    }
  return r;
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  if (a.in_arity() != b.in_arity() || a.out_arity() != b.out_arity() ||
      a.dim() != b.dim()) {
    throw TensorError("operator+: shape mismatch");
  }
  Tensor r = a;
  for (std::int64_t i = 0; i < r.size(); ++i) r.entries()[i] += b.entries()[i];
  return r;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  return a + b.scaled(-1.0);
}

Tensor operator*(cplx factor, const Tensor& t) { return t.scaled(factor); }

namespace {

bool is_permutation(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace

Tensor swap_legs(const Tensor& t, const std::vector<int>& perm_in,
                 const std::vector<int>& perm_out) {
  if (static_cast<int>(perm_in.size()) != t.in_arity() ||
      static_cast<int>(perm_out.size()) != t.out_arity() ||
      !is_permutation(perm_in) || !is_permutation(perm_out)) {
    throw TensorError("swap_legs: invalid permutation");
  }
  const int d = t.dim();
  Tensor r(t.in_arity(), t.out_arity(), d);
  std::vector<int> rdig(t.out_arity() + t.in_arity());
  std::vector<int> sdig(rdig.size());
  const std::int64_t total = r.size();
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rest = idx;
    for (int k = static_cast<int>(rdig.size()) - 1; k >= 0; --k) {
      rdig[k] = static_cast<int>(rest % d);
      rest /= d;
    }
    for (int k = 0; k < t.out_arity(); ++k) sdig[perm_out[k]] = rdig[k];
    for (int k = 0; k < t.in_arity(); ++k) {
      sdig[t.out_arity() + perm_in[k]] = rdig[t.out_arity() + k];
    }
    std::int64_t src = 0;
    for (int v : sdig) src = src * d + v;
    r.entries()[idx] = t.entries()[src];
  }
  return r;
}

double distance(const Tensor& a, const Tensor& b) { return (a - b).norm(); }

bool approx_equal(const Tensor& a, const Tensor& b, const Tolerance& tol) {
  return distance(a, b) <=
         tol.abs_eps + tol.rel_eps * std::max(a.norm(), b.norm());
}

std::pair<cplx, double> best_scale(const Tensor& a, const Tensor& b) {
  cplx inner(0.0, 0.0);
  double bb = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    inner += std::conj(b.entries()[i]) * a.entries()[i];
    bb += std::norm(b.entries()[i]);
  }
  if (bb == 0.0) return {cplx(0.0, 0.0), a.norm()};
  const cplx lambda = inner / bb;
  return {lambda, distance(a, lambda * b)};
}

std::optional<cplx> proportional(const Tensor& a, const Tensor& b,
                                 const Tolerance& tol) {
  if (a.in_arity() != b.in_arity() || a.out_arity() != b.out_arity() ||
      a.dim() != b.dim()) {
    return std::nullopt;
  }
  const double na = a.norm(), nb = b.norm();
  const double floor = tol.abs_eps + tol.rel_eps * std::max(na, nb);
  if (na <= floor && nb <= floor) return cplx(1.0, 0.0);
  if (nb <= floor || na <= floor) return std::nullopt;
  auto [lambda, residual] = best_scale(a, b);
  if (residual > tol.abs_eps + tol.rel_eps * na) return std::nullopt;
  if (std::abs(lambda) == 0.0) return std::nullopt;
  return lambda;
}

std::vector<Tensor> right_singular_space(const Tensor& t,
                                         const Tolerance& tol) {
  if (t.in_arity() != 0 || t.out_arity() < 2) {
    throw TensorError("right_singular_space: expected a state on >= 2 legs");
  }
  const int d = t.dim();
  const std::int64_t m = t.rows() / d;
  Eigen::MatrixXcd a(d, m);
  for (int r = 0; r < d; ++r)
    for (std::int64_t c = 0; c < m; ++c) a(r, c) = t.entries()[r * m + c];
  if (a.norm() == 0.0) {
    throw TensorError("right_singular_space: zero tensor");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut =
      std::max(tol.abs_eps, tol.rel_eps * (sv.size() ? sv(0) : 0.0));
  std::vector<Tensor> out;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cut) continue;
    // Rows of V^dagger: conjugated columns of V, so that the state
    // decomposes as sum_i sigma_i |u_i> (x) |v_i-row>.
    std::vector<cplx> amps(m);
    for (std::int64_t c = 0; c < m; ++c) amps[c] = std::conj(svd.matrixV()(c, i));
    out.push_back(Tensor::state(t.out_arity() - 1, amps, d));
  }
  return out;
}

Tensor standard_partial_trace(const Tensor& m, int out_leg, int in_leg) {
  if (in_leg == -1) {
    in_leg = out_leg < m.in_arity() ? out_leg : m.in_arity() - 1;
  }
  if (out_leg < 0 || out_leg >= m.out_arity() || in_leg < 0 ||
      in_leg >= m.in_arity()) {
    throw TensorError("standard_partial_trace: bad leg index");
  }
  const int d = m.dim();
  Tensor r(m.in_arity() - 1, m.out_arity() - 1, d);
  std::vector<int> rdig(r.out_arity() + r.in_arity());
  std::vector<int> sdig(m.out_arity() + m.in_arity());
  for (std::int64_t idx = 0; idx < r.size(); ++idx) {
    std::int64_t rest = idx;
    for (int k = static_cast<int>(rdig.size()) - 1; k >= 0; --k) {
      rdig[k] = static_cast<int>(rest % d);
      rest /= d;
    }
    cplx sum(0.0, 0.0);
    for (int k = 0; k < d; ++k) {
      int pos = 0;
      for (int o = 0; o < m.out_arity(); ++o) {
        sdig[o] = (o == out_leg) ? k : rdig[pos++];
      }
      for (int i = 0; i < m.in_arity(); ++i) {
        sdig[m.out_arity() + i] = (i == in_leg) ? k : rdig[pos++];
      }
      std::int64_t src = 0;
      for (int v : sdig) src = src * d + v;
      sum += m.entries()[src];
    }
    r.entries()[idx] = sum;
  }
  return r;
}

}  // namespace ghzw
