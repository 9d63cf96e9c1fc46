// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"
#include "lexicon.hpp"

namespace subseg {

// All values are percentages. F1 is the harmonic mean (0 when P + R = 0).
struct MetricsReport {
  double morph_p = 0, morph_r = 0, morph_f1 = 0;
  double bnd_p = 0, bnd_r = 0, bnd_f1 = 0;
  double word_acc = 0;
};

// Micro-averaged over the gold word list, one entry per type. Words missing
// from the prediction count as unsplit. Morph spans are the intervals between
// consecutive elements of {0} ∪ boundaries ∪ {length}; a predicted morph is
// correct iff the identical interval exists in gold. A zero denominator
// yields 0, except that corpus-wide empty boundary sets on both sides score
// 100.
MetricsReport eval_segmentation(const SegmentationLexicon& gold,
                                const SegmentationLexicon& predicted);

std::string metrics_tsv(const MetricsReport& m);

// Share of a joint vocabulary used on both sides.
double vocab_overlap_shared(const std::unordered_set<std::string>& model_vocab,
                            const std::unordered_set<std::string>& src_used,
                            const std::unordered_set<std::string>& tgt_used);
// Overlap of two separately trained vocabularies: |A∩B| / |A∪B| * 100.
double vocab_overlap_jaccard(const std::unordered_set<std::string>& a,
                             const std::unordered_set<std::string>& b);

struct HistogramRow {
  uint64_t rank_lo = 0, rank_hi = 0;
  double mean_subwords = 0;
  uint64_t n_types = 0;
};

using PieceCounter = std::function<size_t(const std::string& word)>;

// Types ranked by descending frequency (ties lexicographic); buckets cover
// ranks [2^k, 2^(k+1)-1].
std::vector<HistogramRow> split_histogram(const TokenCounts& counts,
                                          const PieceCounter& pieces);
std::string histogram_tsv(const std::vector<HistogramRow>& rows);

}  // namespace subseg
