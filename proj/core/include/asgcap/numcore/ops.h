// Copyright 2026 The asgcap Authors. All Rights Reserved.
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

#ifndef ASGCAP_NUMCORE_OPS_H_
#define ASGCAP_NUMCORE_OPS_H_

#include <cstddef>
#include <initializer_list>
#include <span>

#include "asgcap/numcore/tape.h"

// Differentiable primitives. Inputs must live on the same tape; shape
// mismatches raise ContractError and non-finite results raise NumericError.
namespace asgcap::num {

// Matrix product. Rank-1 operands act as a row vector on the left and a
// column vector on the right; the result drops the unit dimension.
Var matmul(Var a, Var b);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise

// m: n x k, v: k. Adds v to every row.
Var add_row(Var m, Var v);
// m: n x k, v: n. Scales row i by v[i].
Var mul_rows(Var m, Var v);
// Multiplies every element of x by the single element of s.
Var scale(Var x, Var s);

Var scalar_mul(Var x, double c);
Var add_scalar(Var x, double c);

// Vectors concatenate end to end; matrices with equal column counts stack.
Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);

// Elements [begin, end) of a vector or rows [begin, end) of a matrix.
Var slice(Var x, std::size_t begin, std::size_t end);
Var reshape(Var x, Shape shape);
// Row `index` of a matrix as a vector.
Var embedding(Var table, std::size_t index);

Var tanh(Var x);
Var sigmoid(Var x);
Var relu(Var x);
// Over the last axis (each row of a matrix).
Var softmax(Var x);

Var sum(Var x);
Var mean(Var x);
// n x k -> k.
Var mean_rows(Var x);

// x / sum(x) for a vector with positive total mass.
Var normalize(Var x);

// -log softmax(logits)[target] for a logit vector.
Var cross_entropy(Var logits, std::size_t target);

}  // namespace asgcap::num

#endif  // ASGCAP_NUMCORE_OPS_H_
