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


#ifndef ASGCAP_METRICS_DIVERSITY_H_
#define ASGCAP_METRICS_DIVERSITY_H_

#include <cstddef>
#include <vector>

#include "asgcap/metrics/ngram.h"

namespace asgcap::metrics {

// Distinct n-grams across the set divided by the total word count of the set.
double div_n(const std::vector<Caption>& captions, std::size_t n);

// Eigenvalues of a symmetric matrix (row-major, size x size) by cyclic Jacobi
// rotations, stopping once the off-diagonal Frobenius norm is below `tol`.
// Returned in descending order.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t size, double tol = 1e-10);

// Pairwise kernel matrix of the set. Document frequencies come from
// `df_source` when given, otherwise from the set itself. Symmetric with unit
// diagonal.
std::vector<double> self_kernel(const std::vector<Caption>& captions,
                                const CiderD* df_source = nullptr);

// (1 - lambda_max / sum(lambda)) * m / (m - 1) over the self kernel: 0 for
// duplicates, 1 for captions sharing no n-gram.
double self_cider(const std::vector<Caption>& captions, const CiderD* df_source = nullptr);

}  // namespace asgcap::metrics

#endif  // ASGCAP_METRICS_DIVERSITY_H_
