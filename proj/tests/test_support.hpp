// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "corpus.hpp"
#include "text.hpp"

namespace testsup {

using subseg::Sentence;
using subseg::TokenCounts;

// A small alphabet with multi-byte letters so Unicode indexing is exercised.
inline const std::vector<std::string>& czech_alphabet() {
  static const std::vector<std::string> chars = {"a", "b", "c", "d", "e", "m", "n",
                                                 "t", "v", "á", "č", "ě", "ř", "ž"};
  return chars;
}

inline std::string random_token(std::mt19937& rng, size_t min_len, size_t max_len,
                                const std::vector<std::string>& alphabet = czech_alphabet()) {
  std::uniform_int_distribution<size_t> len_dist(min_len, max_len);
  std::uniform_int_distribution<size_t> char_dist(0, alphabet.size() - 1);
  std::string token;
  const size_t n = len_dist(rng);
  for (size_t i = 0; i < n; ++i) token += alphabet[char_dist(rng)];
  return token;
}

inline Sentence random_sentence(std::mt19937& rng, size_t max_tokens, size_t max_len,
                                const std::vector<std::string>& alphabet = czech_alphabet()) {
  std::uniform_int_distribution<size_t> n_dist(1, max_tokens);
  Sentence s;
  const size_t n = n_dist(rng);
  for (size_t i = 0; i < n; ++i) s.push_back(random_token(rng, 1, max_len, alphabet));
  return s;
}

inline std::vector<Sentence> random_stream(std::mt19937& rng, size_t n_sentences,
                                           size_t max_tokens, size_t max_len) {
  std::vector<Sentence> stream;
  for (size_t i = 0; i < n_sentences; ++i)
    stream.push_back(random_sentence(rng, max_tokens, max_len));
  return stream;
}

inline TokenCounts make_counts(
    std::initializer_list<std::tuple<std::string, uint64_t, uint64_t>> items) {
  TokenCounts counts;
  for (const auto& [word, non_final, final_count] : items) {
    counts.entries[word].non_final = non_final;
    counts.entries[word].final_count = final_count;
  }
  return counts;
}

inline std::string join(const Sentence& tokens) { return subseg::join_tokens(tokens); }

}  // namespace testsup
