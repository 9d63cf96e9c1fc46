// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpus.hpp"

namespace subseg {

// Where the zero-suffix symbol '_' is attached before training/encoding:
// nowhere, after every word, or after every word except the sentence-final one.
enum class UnderscoreMode { None, Every, NonFinal };

UnderscoreMode parse_underscore_mode(std::string_view name);
std::string_view underscore_mode_name(UnderscoreMode mode);

struct MergeTable {
  std::vector<std::pair<std::string, std::string>> merges;  // rank order
  UnderscoreMode mode = UnderscoreMode::None;
};

// One weighted symbol sequence fed to the merge learner.
struct TrainEntry {
  std::vector<std::string> symbols;
  uint64_t weight = 0;
};

// Core learner. Each round merges the adjacent pair with the highest summed
// weight (a run of k equal symbols contributes k-1 adjacencies); ties go to
// the code-point-smallest (left, right). Stops after num_merges merges or when
// no pair reaches weight 2. Replacement inside a word is leftmost,
// non-overlapping.
std::vector<std::pair<std::string, std::string>> bpe_learn_merges(
    std::vector<TrainEntry> entries, size_t num_merges, int threads = 1);

MergeTable bpe_train(const TokenCounts& counts, size_t num_merges,
                     UnderscoreMode mode, int threads = 1);

// Training over pre-split unit counts: word-final units are end-marked with
// '_', continuation units are not. The result carries mode Every, which is
// how it behaves when applied outside a composed model.
MergeTable bpe_train_presplit(const TokenCounts& unit_counts, size_t num_merges,
                              int threads = 1);

std::vector<TrainEntry> bpe_entries(const TokenCounts& counts, UnderscoreMode mode);
std::vector<TrainEntry> bpe_entries_presplit(const TokenCounts& unit_counts);

// Replays merges in rank order over the word's characters (plus a trailing
// '_' symbol when end_symbol is set).
std::vector<std::string> bpe_encode_word(std::string_view word, const MergeTable& table,
                                         bool end_symbol);

// Memoizing applier; a table is immutable and may back many encoders, but one
// encoder instance is not safe for concurrent use.
class BpeEncoder {
 public:
  explicit BpeEncoder(MergeTable table) : table_(std::move(table)) {}
  const MergeTable& table() const { return table_; }

  const std::vector<std::string>& encode_word(const std::string& word, bool end_symbol);
  Sentence encode_sentence(const Sentence& tokens, Marker convention);

 private:
  MergeTable table_;
  std::unordered_map<std::string, std::vector<std::string>> cache_plain_;
  std::unordered_map<std::string, std::vector<std::string>> cache_marked_;
};

Sentence bpe_encode_sentence(const Sentence& tokens, const MergeTable& table,
                             Marker convention);

void bpe_save(const MergeTable& table, std::ostream& out);
MergeTable bpe_load(std::istream& in);

}  // namespace subseg
