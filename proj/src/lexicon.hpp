// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"

namespace subseg {

// word -> sorted internal boundary positions, in Unicode scalar values.
// Duplicate surfaces merge by boundary-set union. A case-folded index backs
// the equal-length fallback lookup.
class SegmentationLexicon {
 public:
  void add(const std::string& word, std::vector<uint32_t> boundaries);

  // Exact match first, then a case-folded match (sound because the simple
  // fold is length-preserving). Returns nullptr when absent.
  const std::vector<uint32_t>* find(std::string_view token) const;

  const std::unordered_map<std::string, std::vector<uint32_t>>& entries() const {
    return entries_;
  }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<uint32_t>> entries_;
  std::unordered_map<std::string, std::string> folded_;  // folded -> representative
};

// Cuts the word at the given scalar positions; concatenation reproduces the
// word exactly.
std::vector<std::string> split_morphs(std::string_view word,
                                      const std::vector<uint32_t>& boundaries);

// Boundary positions implied by a morph sequence (cumulative scalar lengths).
std::vector<uint32_t> boundaries_from_morphs(const std::vector<std::string>& morphs);

// TSV "word<TAB>morph morph ...". Verifies that morphs concatenate to the
// word, reporting the offending line number. strip_markers additionally drops
// a trailing "@@" or '_' from each morph before checking, which accepts
// encoder output pasted into the lexicon format.
SegmentationLexicon lexicon_load(std::istream& in, bool strip_markers = false);
void lexicon_save(const SegmentationLexicon& lexicon, std::ostream& out);

// Lexicon-driven segmentation. Hits are split at their boundaries under the
// convention; misses pass through unsplit.
Sentence apply_lexicon(const Sentence& tokens, const SegmentationLexicon& lexicon,
                       Marker convention);

}  // namespace subseg
