// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace subseg {

using Sentence = std::vector<std::string>;

// Output marker conventions. Continuation puts "@@" on every non-final
// subword of a word; EndMarker puts "_" on word-final subwords.
enum class Marker { Continuation, EndMarker };

Marker parse_marker(std::string_view name);  // "continuation" | "end-marker" | "end_marker"

struct TypeCount {
  uint64_t non_final = 0;  // occurrences that do not end a sentence (or, for
                           // pre-split unit counts, that do not end a word)
  uint64_t final_count = 0;
  uint64_t total() const { return non_final + final_count; }
};

struct TokenCounts {
  std::unordered_map<std::string, TypeCount> entries;
  uint64_t bytes_read = 0;
  uint64_t total_tokens() const;
};

// Pull-based reader over "one sentence per line, tokens space-separated".
// When a byte budget is set, reading stops after the first line that crosses
// it; that line is still delivered whole. Validates UTF-8 and reports the
// absolute byte offset of any bad sequence. Empty lines yield empty sentences
// so parallel corpora stay line-aligned.
class SentenceReader {
 public:
  SentenceReader(std::istream& in, std::optional<uint64_t> byte_budget = {});
  bool next(Sentence& out);
  uint64_t bytes_read() const { return bytes_read_; }

 private:
  std::istream& in_;
  std::optional<uint64_t> budget_;
  uint64_t consumed_ = 0;    // raw bytes consumed, newlines included
  uint64_t bytes_read_ = 0;  // budget-charged bytes; never exceeds the budget
  bool done_ = false;
};

std::vector<Sentence> read_tokenized(std::istream& in,
                                     std::optional<uint64_t> byte_budget = {});

TokenCounts count_tokens(const std::vector<Sentence>& stream, int threads = 1);

// Reads and counts in one pass. With presplit=true the input is a
// continuation-marked morph corpus: a token "xy@@" counts as a non-final
// occurrence of unit "xy", anything else as a word-final occurrence.
TokenCounts count_stream(std::istream& in, std::optional<uint64_t> byte_budget,
                         bool presplit, int threads);
TokenCounts count_file(const std::string& path, std::optional<uint64_t> byte_budget,
                       bool presplit, int threads);

TokenCounts counts_union(const TokenCounts& a, const TokenCounts& b);

// Guard applied before any marker-producing encoding: tokens containing the
// literal "@@" or the character '_' would make decoding ambiguous.
void require_markable(std::string_view token);

// Inverse of the toolkit's encoders at the marker level.
//  - Continuation: maximal "x1@@ x2@@ ... xn" runs are joined with the "@@"
//    removed; one trailing '_' of the joined word is stripped when present
//    (the underscore training modes leave it on the word-final piece).
//  - EndMarker: pieces are concatenated; a piece ending in '_' closes the word
//    (the '_' is deleted); a piece ending in "@@" closes a morph unit whose
//    mark belongs to the outer pre-split layer; the sentence boundary closes a
//    dangling word, which is what the non-final underscore mode relies on.
// unescape additionally applies the wordpiece unescaping to each word, which
// makes the EndMarker direction the exact inverse of the STE encoder.
Sentence undo_splits(const Sentence& stream, Marker convention, bool unescape = false);
std::string undo_splits_line(const std::string& line, Marker convention, bool unescape = false);

struct CorpusStats {
  uint64_t tokens_src = 0, tokens_tgt = 0;
  uint64_t types_src = 0, types_tgt = 0;
  double shared_pct = 0.0;  // |types(src) ∩ types(tgt)| / |union| * 100
};

CorpusStats corpus_stats(const TokenCounts& src, const TokenCounts& tgt);
std::string stats_tsv(const CorpusStats& s);

}  // namespace subseg
