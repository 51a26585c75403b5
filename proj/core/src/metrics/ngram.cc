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


#include "asgcap/metrics/ngram.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "asgcap/common/error.h"

namespace asgcap::metrics {

NgramCounts ngram_counts(const Caption& c, std::size_t n) {
  NgramCounts out;
  if (n == 0 || c.size() < n) return out;
  for (std::size_t i = 0; i + n <= c.size(); ++i) {
    ++out[std::vector<std::string>(c.begin() + static_cast<std::ptrdiff_t>(i),
                                   c.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

double bleu4(const std::vector<Caption>& gens, const std::vector<Caption>& refs) {
  if (gens.empty()) throw ContractError("bleu4: empty corpus");
  if (gens.size() != refs.size()) throw ContractError("bleu4: gens and refs differ in size");
  double matched[4] = {0, 0, 0, 0};
  double total[4] = {0, 0, 0, 0};
  double hyp_len = 0.0;
  double ref_len = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    hyp_len += static_cast<double>(gens[i].size());
    ref_len += static_cast<double>(refs[i].size());
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto h = ngram_counts(gens[i], n);
      const auto r = ngram_counts(refs[i], n);
      for (const auto& [g, cnt] : h) {
        total[n - 1] += cnt;
        auto it = r.find(g);
        if (it != r.end()) matched[n - 1] += std::min(cnt, it->second);
      }
    }
  }
  double log_sum = 0.0;
  for (int n = 0; n < 4; ++n) {
    if (matched[n] == 0.0) return 0.0;
    log_sum += std::log(matched[n] / total[n]);
  }
  const double bp = hyp_len < ref_len ? std::exp(1.0 - ref_len / hyp_len) : 1.0;
  return bp * std::exp(log_sum / 4.0);
}

double rouge_l(const Caption& gen, const Caption& ref) {
  if (gen.empty() || ref.empty()) return 0.0;
  std::vector<std::size_t> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (std::size_t i = 1; i <= gen.size(); ++i) {
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      cur[j] = gen[i - 1] == ref[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[ref.size()]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(gen.size());
  const double r = lcs / static_cast<double>(ref.size());
  const double beta2 = 1.2 * 1.2;
  return (1.0 + beta2) * p * r / (r + beta2 * p);
}

double mean_rouge_l(const std::vector<Caption>& gens, const std::vector<Caption>& refs) {
  if (gens.empty()) throw ContractError("rouge_l: empty corpus");
  if (gens.size() != refs.size()) throw ContractError("rouge_l: gens and refs differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i) s += rouge_l(gens[i], refs[i]);
  return s / static_cast<double>(gens.size());
}

CiderD::CiderD(const std::vector<Caption>& corpus) : corpus_size_(corpus.size()) {
  if (corpus.empty()) throw ContractError("cider_d: empty corpus");
  for (const auto& c : corpus) {
    for (std::size_t n = 1; n <= kMaxN; ++n) {
      for (const auto& [g, cnt] : ngram_counts(c, n)) ++df_[g];
    }
  }
}

double CiderD::idf(const std::vector<std::string>& ngram) const {
  auto it = df_.find(ngram);
  const double df = it == df_.end() ? 1.0 : std::max(1, it->second);
  return std::log((static_cast<double>(corpus_size_) + 1.0) / df);
}

std::vector<CiderD::Vec> CiderD::vectors(const Caption& c) const {
  std::vector<Vec> out(kMaxN);
  for (std::size_t n = 1; n <= kMaxN; ++n) {
    Vec& v = out[n - 1];
    for (const auto& [g, cnt] : ngram_counts(c, n)) {
      const double w = cnt * idf(g);
      v.w.emplace(g, w);
      v.norm += w * w;
    }
    v.norm = std::sqrt(v.norm);
  }
  return out;
}

double CiderD::score(const Caption& gen, const Caption& ref) const {
  const auto h = vectors(gen);
  const auto r = vectors(ref);
  const double delta = static_cast<double>(gen.size()) - static_cast<double>(ref.size());
  const double penalty = std::exp(-(delta * delta) / (2.0 * kSigma * kSigma));
  double total = 0.0;
  for (std::size_t n = 0; n < kMaxN; ++n) {
    if (h[n].norm == 0.0 || r[n].norm == 0.0) continue;
    double val = 0.0;
    for (const auto& [g, hw] : h[n].w) {
      auto it = r[n].w.find(g);
      if (it != r[n].w.end()) val += std::min(hw, it->second) * it->second;
    }
    total += val / (h[n].norm * r[n].norm) * penalty;
  }
  return 10.0 * total / static_cast<double>(kMaxN);
}

double CiderD::kernel(const Caption& a, const Caption& b) const {
  const auto va = vectors(a);
  const auto vb = vectors(b);
  const double delta = static_cast<double>(a.size()) - static_cast<double>(b.size());
  const double penalty = std::exp(-(delta * delta) / (2.0 * kSigma * kSigma));
  double total = 0.0;
  int orders = 0;
  for (std::size_t n = 0; n < kMaxN; ++n) {
    // Orders neither caption is long enough for carry no evidence either way.
    if (va[n].norm == 0.0 && vb[n].norm == 0.0) continue;
    ++orders;
    if (va[n].norm == 0.0 || vb[n].norm == 0.0) continue;
    double val = 0.0;
    for (const auto& [g, w] : va[n].w) {
      auto it = vb[n].w.find(g);
      if (it != vb[n].w.end()) val += w * it->second;
    }
    total += val / (va[n].norm * vb[n].norm);
  }
  if (orders == 0) return a == b ? 1.0 : 0.0;
  return penalty * total / orders;
}

double CiderD::corpus_score(const std::vector<Caption>& gens,
                            const std::vector<Caption>& refs) const {
  if (gens.empty()) throw ContractError("cider_d: empty corpus");
  if (gens.size() != refs.size()) throw ContractError("cider_d: gens and refs differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i) s += score(gens[i], refs[i]);
  return s / static_cast<double>(gens.size());
}

}  // namespace asgcap::metrics
