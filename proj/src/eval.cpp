// SPDX-License-Identifier: Apache-2.0
#include "eval.hpp"

#include <algorithm>

#include "text.hpp"

namespace subseg {

namespace {

double pct(uint64_t numerator, uint64_t denominator) {
  if (denominator == 0) return 0.0;
  return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

double f1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

// Count of identical (start, end) spans; both span lists are sorted by start.
uint64_t matching_spans(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        uint32_t length) {
  auto spans = [length](const std::vector<uint32_t>& bounds) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    out.reserve(bounds.size() + 1);
    uint32_t start = 0;
    for (uint32_t p : bounds) {
      out.emplace_back(start, p);
      start = p;
    }
    out.emplace_back(start, length);
    return out;
  };
  const auto sa = spans(a), sb = spans(b);
  uint64_t hits = 0;
  size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    if (sa[i] == sb[j]) {
      ++hits;
      ++i;
      ++j;
    } else if (sa[i] < sb[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return hits;
}

}  // namespace

MetricsReport eval_segmentation(const SegmentationLexicon& gold,
                                const SegmentationLexicon& predicted) {
  if (gold.empty()) throw ConfigError("empty gold lexicon");

  uint64_t bnd_tp = 0, bnd_pred = 0, bnd_gold = 0;
  uint64_t morph_tp = 0, morph_pred = 0, morph_gold = 0;
  uint64_t correct_words = 0;

  static const std::vector<uint32_t> kUnsplit;
  for (const auto& [word, gold_bounds] : gold.entries()) {
    auto pit = predicted.entries().find(word);
    const std::vector<uint32_t>& pred_bounds =
        pit == predicted.entries().end() ? kUnsplit : pit->second;

    std::vector<uint32_t> common;
    std::set_intersection(gold_bounds.begin(), gold_bounds.end(), pred_bounds.begin(),
                          pred_bounds.end(), std::back_inserter(common));
    bnd_tp += common.size();
    bnd_pred += pred_bounds.size();
    bnd_gold += gold_bounds.size();

    const uint32_t length = static_cast<uint32_t>(scalar_length(word));
    morph_tp += matching_spans(pred_bounds, gold_bounds, length);
    morph_pred += pred_bounds.size() + 1;
    morph_gold += gold_bounds.size() + 1;

    if (pred_bounds == gold_bounds) ++correct_words;
  }

  MetricsReport m;
  if (bnd_gold == 0 && bnd_pred == 0) {
    m.bnd_p = m.bnd_r = 100.0;  // nothing to find and nothing proposed
  } else {
    m.bnd_p = pct(bnd_tp, bnd_pred);
    m.bnd_r = pct(bnd_tp, bnd_gold);
  }
  m.bnd_f1 = f1(m.bnd_p, m.bnd_r);
  m.morph_p = pct(morph_tp, morph_pred);
  m.morph_r = pct(morph_tp, morph_gold);
  m.morph_f1 = f1(m.morph_p, m.morph_r);
  m.word_acc = pct(correct_words, gold.size());
  return m;
}

std::string metrics_tsv(const MetricsReport& m) {
  std::string out;
  const std::pair<const char*, double> rows[] = {
      {"morph_p", m.morph_p}, {"morph_r", m.morph_r}, {"morph_f1", m.morph_f1},
      {"bnd_p", m.bnd_p},     {"bnd_r", m.bnd_r},     {"bnd_f1", m.bnd_f1},
      {"word_acc", m.word_acc}};
  for (const auto& [key, value] : rows) out += std::string(key) + "\t" + format_fixed(value, 2) + "\n";
  return out;
}

double vocab_overlap_shared(const std::unordered_set<std::string>& model_vocab,
                            const std::unordered_set<std::string>& src_used,
                            const std::unordered_set<std::string>& tgt_used) {
  if (model_vocab.empty()) return 0.0;
  uint64_t both = 0;
  for (const std::string& v : model_vocab)
    if (src_used.count(v) && tgt_used.count(v)) ++both;
  return 100.0 * static_cast<double>(both) / static_cast<double>(model_vocab.size());
}

double vocab_overlap_jaccard(const std::unordered_set<std::string>& a,
                             const std::unordered_set<std::string>& b) {
  uint64_t inter = 0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const std::string& v : small)
    if (large.count(v)) ++inter;
  const uint64_t unioned = a.size() + b.size() - inter;
  if (unioned == 0) return 0.0;
  return 100.0 * static_cast<double>(inter) / static_cast<double>(unioned);
}

std::vector<HistogramRow> split_histogram(const TokenCounts& counts,
                                          const PieceCounter& pieces) {
  std::vector<std::pair<std::string, uint64_t>> ranked;
  ranked.reserve(counts.entries.size());
  for (const auto& [word, c] : counts.entries) ranked.emplace_back(word, c.total());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::vector<HistogramRow> rows;
  uint64_t lo = 1;
  while (lo <= ranked.size()) {
    const uint64_t hi = std::min<uint64_t>(ranked.size(), lo * 2 - 1);
    HistogramRow row;
    row.rank_lo = lo;
    row.rank_hi = hi;
    row.n_types = hi - lo + 1;
    uint64_t total_pieces = 0;
    for (uint64_t r = lo; r <= hi; ++r) total_pieces += pieces(ranked[r - 1].first);
    row.mean_subwords = static_cast<double>(total_pieces) / static_cast<double>(row.n_types);
    rows.push_back(row);
    lo *= 2;
  }
  return rows;
}

std::string histogram_tsv(const std::vector<HistogramRow>& rows) {
  std::string out;
  for (const HistogramRow& r : rows) {
    out += std::to_string(r.rank_lo) + "\t" + std::to_string(r.rank_hi) + "\t" +
           format_fixed(r.mean_subwords, 2) + "\t" + std::to_string(r.n_types) + "\n";
  }
  return out;
}

}  // namespace subseg
