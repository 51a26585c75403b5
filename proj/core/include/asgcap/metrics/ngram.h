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


#ifndef ASGCAP_METRICS_NGRAM_H_
#define ASGCAP_METRICS_NGRAM_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace asgcap::metrics {

using Caption = std::vector<std::string>;
using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts ngram_counts(const Caption& c, std::size_t n);

// Corpus BLEU-4 with one reference per hypothesis: clipped n-gram
// precisions pooled over the corpus, geometric mean, brevity penalty, no
// smoothing.
double bleu4(const std::vector<Caption>& gens, const std::vector<Caption>& refs);

// LCS F-measure with recall weighted by beta = 1.2.
double rouge_l(const Caption& gen, const Caption& ref);
double mean_rouge_l(const std::vector<Caption>& gens, const std::vector<Caption>& refs);

// CIDEr-D over 1..4-grams. Document frequencies come from the reference
// corpus given at construction; idf = ln((N + 1) / max(1, df)) so that the
// single-caption corpus still weighs its n-grams.
class CiderD {
 public:
  static constexpr std::size_t kMaxN = 4;
  static constexpr double kSigma = 6.0;

  explicit CiderD(const std::vector<Caption>& corpus);

  std::size_t corpus_size() const { return corpus_size_; }
  double idf(const std::vector<std::string>& ngram) const;

  // Clipped similarity: sum of min(h, r) * r over shared n-grams, divided by
  // the norms, times the Gaussian length penalty; averaged over n, times 10.
  double score(const Caption& gen, const Caption& ref) const;
  // Unclipped cosine version of the same kernel, symmetric in its arguments,
  // without the factor 10. Averages only over orders for which at least one
  // caption has n-grams, so kernel(c, c) == 1.
  double kernel(const Caption& a, const Caption& b) const;
  double corpus_score(const std::vector<Caption>& gens, const std::vector<Caption>& refs) const;

 private:
  struct Vec {
    std::map<std::vector<std::string>, double> w;
    double norm = 0.0;
  };
  std::vector<Vec> vectors(const Caption& c) const;

  std::size_t corpus_size_ = 0;
  std::map<std::vector<std::string>, int> df_;
};

}  // namespace asgcap::metrics

#endif  // ASGCAP_METRICS_NGRAM_H_
