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


#include "asgcap/metrics/diversity.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>

#include "asgcap/common/error.h"

namespace asgcap::metrics {

double div_n(const std::vector<Caption>& captions, std::size_t n) {
  if (captions.empty()) throw ContractError("div_n: empty caption set");
  if (n == 0) throw ContractError("div_n: n must be positive");
  std::set<std::vector<std::string>> distinct;
  std::size_t words = 0;
  for (const auto& c : captions) {
    words += c.size();
    for (const auto& [g, cnt] : ngram_counts(c, n)) distinct.insert(g);
  }
  if (words == 0) throw ContractError("div_n: captions contain no words");
  return static_cast<double>(distinct.size()) / static_cast<double>(words);
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t size, double tol) {
  if (a.size() != size * size) throw ContractError("jacobi_eigenvalues: matrix is not square");
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(a[i * size + j] - a[j * size + i]) > 1e-12) {
        throw ContractError("jacobi_eigenvalues: matrix is not symmetric");
      }
    }
  }
  auto off = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        if (i != j) s += a[i * size + j] * a[i * size + j];
      }
    }
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && off() > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < size; ++p) {
      for (std::size_t q = p + 1; q < size; ++q) {
        const double apq = a[p * size + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * size + q] - a[p * size + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < size; ++k) {
          const double akp = a[k * size + p];
          const double akq = a[k * size + q];
          a[k * size + p] = c * akp - s * akq;
          a[k * size + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < size; ++k) {
          const double apk = a[p * size + k];
          const double aqk = a[q * size + k];
          a[p * size + k] = c * apk - s * aqk;
          a[q * size + k] = s * apk + c * aqk;
        }
      }
    }
  }
  if (off() > tol) throw NumericError("jacobi_eigenvalues: no convergence");
  std::vector<double> ev(size);
  for (std::size_t i = 0; i < size; ++i) ev[i] = a[i * size + i];
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

std::vector<double> self_kernel(const std::vector<Caption>& captions, const CiderD* df_source) {
  const std::size_t m = captions.size();
  std::optional<CiderD> own;
  if (df_source == nullptr) df_source = &own.emplace(captions);
  const CiderD& cider = *df_source;
  std::vector<double> k(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    k[i * m + i] = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = cider.kernel(captions[i], captions[j]);
      k[i * m + j] = v;
      k[j * m + i] = v;
    }
  }
  return k;
}

double self_cider(const std::vector<Caption>& captions, const CiderD* df_source) {
  const std::size_t m = captions.size();
  if (m < 2) throw ContractError("self_cider: needs at least 2 captions");
  const auto ev = jacobi_eigenvalues(self_kernel(captions, df_source), m);
  double total = 0.0;
  for (double l : ev) total += l;
  const double score = (1.0 - ev.front() / total) * static_cast<double>(m) / static_cast<double>(m - 1);
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace asgcap::metrics
