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

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghzw {

using cplx = std::complex<double>;

struct Tolerance {
  double abs_eps = 1e-9;
  double rel_eps = 1e-9;
};

// Thrown on arity/dimension mismatches and other contract violations.
struct TensorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense complex tensor viewed as a linear map from in_arity legs to
// out_arity legs, every leg of dimension dim.
//
// Entry layout (fixed, also used by the JSON form): output legs are the
// major index group, input legs the minor one; within each group legs are
// row-major, i.e. leg 0 is the most significant digit.  Equivalently the
// entries are a row-major dim^out x dim^in matrix whose row index is the
// output multi-index and whose column index is the input multi-index.
class Tensor {
 public:
  Tensor() : Tensor(0, 0, 2) {}
  Tensor(int in_arity, int out_arity, int dim = 2);

  static Tensor scalar(cplx value, int dim = 2);
  static Tensor identity(int legs = 1, int dim = 2);
  // The canonical symmetry swap on two legs.
  static Tensor swap(int dim = 2);
  // Basis state |b_0 b_1 ... b_{k-1}> as a 0 -> k tensor (leg 0 leftmost).
  static Tensor ket(const std::vector<int>& digits, int dim = 2);
  // Basis effect <b_0 ... b_{k-1}| as a k -> 0 tensor.
  static Tensor bra(const std::vector<int>& digits, int dim = 2);
  // State 0 -> 1 with given amplitudes; amps.size() must equal dim.
  static Tensor state1(const std::vector<cplx>& amps, int dim = 2);
  // Effect 1 -> 0 with given components (acts by plain bilinear pairing,
  // no conjugation).
  static Tensor effect1(const std::vector<cplx>& comps, int dim = 2);
  // State 0 -> n from a flat amplitude vector of length dim^n.
  static Tensor state(int legs, const std::vector<cplx>& amps, int dim = 2);

  int in_arity() const { return in_; }
  int out_arity() const { return out_; }
  int dim() const { return dim_; }
  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  std::int64_t size() const { return rows_ * cols_; }

  const std::vector<cplx>& entries() const { return e_; }
  std::vector<cplx>& entries() { return e_; }

  cplx& at(std::int64_t out_index, std::int64_t in_index) {
    return e_[out_index * cols_ + in_index];
  }
  const cplx& at(std::int64_t out_index, std::int64_t in_index) const {
    return e_[out_index * cols_ + in_index];
  }

  // Multi-index helpers; digits are per-leg indices, leg 0 first.
  std::int64_t pack(const std::vector<int>& digits) const;

  bool is_scalar() const { return in_ == 0 && out_ == 0; }
  cplx scalar_value() const;

  double norm() const;          // Frobenius norm
  Tensor conjugate() const;     // entrywise complex conjugate
  Tensor scaled(cplx factor) const;

  bool operator==(const Tensor& other) const = default;

  std::string str() const;  // short human-readable dump

 private:
  int in_ = 0;
  int out_ = 0;
  int dim_ = 2;
  std::int64_t rows_ = 1;
  std::int64_t cols_ = 1;
  std::vector<cplx> e_;
};

// Vertical composition g . f ("f first"); f.out legs plug into g.in legs.
Tensor compose(const Tensor& g, const Tensor& f);

// Horizontal juxtaposition a (x) b; a's legs come first in both groups.
Tensor kron(const Tensor& a, const Tensor& b);

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(cplx factor, const Tensor& t);

// Reindex legs.  Gather convention: result output leg k is t's output leg
// perm_out[k], and likewise for inputs; applying the inverse permutations
// afterwards restores t.
Tensor swap_legs(const Tensor& t, const std::vector<int>& perm_in,
                 const std::vector<int>& perm_out);

// Frobenius distance ||a - b||.
double distance(const Tensor& a, const Tensor& b);

// True when ||a - b|| <= abs_eps + rel_eps * max(||a||, ||b||).
bool approx_equal(const Tensor& a, const Tensor& b, const Tolerance& tol = {});

// Least-squares scalar: returns lambda minimising ||a - lambda*b|| together
// with that residual.  lambda = <b,a>/<b,b>; (0, ||a||) when b = 0.
std::pair<cplx, double> best_scale(const Tensor& a, const Tensor& b);

// Proportionality test via the Cauchy-Schwarz equality |<a,b>|^2 =
// <a,a><b,b> (evaluated as the projection residual, which equals the
// Cauchy-Schwarz defect).  Returns lambda with a = lambda * b, lambda = 1
// when both are zero, empty when not proportional.
std::optional<cplx> proportional(const Tensor& a, const Tensor& b,
                                 const Tolerance& tol = {});

// Right singular vectors of the 2 x dim^(N-1) reshape of an N-leg state
// (first leg indexes the rows).  Returns the vectors whose singular value
// exceeds max(tol.abs_eps, tol.rel_eps * sigma_max), each as a normalised
// 0 -> (N-1) state; the list has length 1 or 2.  Throws on the zero tensor.
std::vector<Tensor> right_singular_space(const Tensor& t,
                                         const Tolerance& tol = {});

// Standard partial trace: contracts output leg out_leg with input leg
// in_leg (sum over <k| out, |k> in).  in_leg = -1 picks out_leg when that
// is a valid input index, otherwise the last input leg; this makes
// standard_partial_trace(m, leg) trace the leg-th subsystem of a map on
// H_0 (x) ... (x) H_k and Tr_R(delta) spell as standard_partial_trace(delta, 1).
Tensor standard_partial_trace(const Tensor& m, int out_leg, int in_leg = -1);

}  // namespace ghzw
