// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"

namespace subseg {

// Characters that can appear in escaped text besides the alphabet observed in
// training: backslash escapes, the '_' end mark and decimal code points.
std::unordered_set<char32_t> base_escape_chars();

// Alphabet of the escaped text: every scalar in the counted types plus the
// escape characters.
std::unordered_set<char32_t> escaped_alphabet(const TokenCounts& counts);

struct SubwordVocab {
  std::vector<std::string> subtokens;     // escaped, vocabulary order
  std::unordered_set<char32_t> alphabet;  // escaped alphabet
  std::unordered_set<std::u32string> lookup;
  size_t max_subtoken_scalars = 1;

  // Derives alphabet/lookup/max length from subtokens. The alphabet is the
  // set of single-scalar subtokens, which the vocabulary invariant guarantees
  // covers every character of escaped text.
  void rebuild_index();
  size_t size() const { return subtokens.size(); }
};

struct SteBuildConfig {
  size_t target_size = 8000;
  double size_tolerance_pct = 1.0;
  int num_refinement_iterations = 4;
  size_t max_subtoken_length = 20;  // in scalars
  std::optional<uint64_t> byte_budget;  // corpus sampling budget, applied by readers
};

// Escaping: '\' -> "\\", '_' -> "\u", out-of-alphabet scalars -> "\<dec>;".
// ste_escape appends the word-end '_' after escaping the body.
std::string ste_escape_body(std::string_view token, const std::unordered_set<char32_t>& alphabet);
std::string ste_escape(std::string_view token, const std::unordered_set<char32_t>& alphabet);
std::string ste_unescape(std::string_view escaped);

// A weighted escaped entry fed to vocabulary construction.
struct SteEntry {
  std::u32string escaped;
  uint64_t weight = 0;
};

std::vector<SteEntry> ste_entries(const TokenCounts& counts,
                                  const std::unordered_set<char32_t>& alphabet);
// Pre-split unit counts: word-final occurrences are end-marked, continuation
// occurrences are not, matching how a composed model feeds the encoder.
std::vector<SteEntry> ste_entries_presplit(const TokenCounts& unit_counts,
                                           const std::unordered_set<char32_t>& alphabet);

SubwordVocab ste_char_vocab(const std::unordered_set<char32_t>& alphabet);

// Upper bound of the min_count search: the weight of the heaviest single
// character, which no longer substring can exceed.
uint64_t ste_max_threshold(const std::vector<SteEntry>& entries);

// One refinement round: segment every entry with `current`, accumulate the
// weight of every substring (max_subtoken_length scalars or shorter) starting
// at a segment start, keep those reaching min_count, union the alphabet, and
// order by (length desc, weight desc, lexicographic).
SubwordVocab ste_refine(const std::vector<SteEntry>& entries, const SubwordVocab& current,
                        uint64_t min_count, const SteBuildConfig& cfg,
                        const std::unordered_set<char32_t>& alphabet, int threads = 1);
SubwordVocab ste_refine_vocab(const TokenCounts& counts, const SubwordVocab& current,
                              uint64_t min_count, const SteBuildConfig& cfg, int threads = 1);

// Binary search over min_count; each candidate runs num_refinement_iterations
// rounds from the character vocabulary. Returns the result closest to
// target_size (the larger vocabulary on exact ties), stopping early inside
// size_tolerance_pct.
SubwordVocab ste_build_vocab(const TokenCounts& counts, const SteBuildConfig& cfg,
                             int threads = 1);
SubwordVocab ste_build_vocab_presplit(const TokenCounts& unit_counts,
                                      const SteBuildConfig& cfg, int threads = 1);

// Greedy longest-prefix segmentation of the escaped token; total by the
// alphabet invariant.
std::vector<std::string> ste_encode_escaped(std::u32string_view escaped,
                                            const SubwordVocab& vocab);
std::vector<std::string> ste_encode_token(std::string_view token, const SubwordVocab& vocab);
// Escapes without the trailing '_'; composed models use this for
// word-internal morphs.
std::vector<std::string> ste_encode_token_unmarked(std::string_view token,
                                                   const SubwordVocab& vocab);

// Exact inverse of encoding: concatenate, split after each '_', unescape.
// A dangling piece without a trailing '_' is accepted and closed at the end.
std::vector<std::string> ste_decode(const std::vector<std::string>& subtokens);

Sentence ste_encode_sentence(const Sentence& tokens, const SubwordVocab& vocab);

void ste_save(const SubwordVocab& vocab, std::ostream& out);
SubwordVocab ste_load(std::istream& in);

}  // namespace subseg
