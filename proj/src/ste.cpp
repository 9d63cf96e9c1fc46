// SPDX-License-Identifier: Apache-2.0
#include "ste.hpp"

#include <algorithm>
#include <unordered_map>

#include "parallel.hpp"
#include "text.hpp"

namespace subseg {

std::unordered_set<char32_t> base_escape_chars() {
  return {U'\\', U'_', U'u', U';', U'0', U'1', U'2', U'3', U'4',
          U'5', U'6', U'7', U'8', U'9'};
}

std::unordered_set<char32_t> escaped_alphabet(const TokenCounts& counts) {
  std::unordered_set<char32_t> alphabet = base_escape_chars();
  for (const auto& [word, _] : counts.entries)
    for (char32_t c : decode_utf8(word)) alphabet.insert(c);
  return alphabet;
}

namespace {

std::u32string escape_body_scalars(std::u32string_view token,
                                   const std::unordered_set<char32_t>& alphabet) {
  std::u32string out;
  out.reserve(token.size() + 1);
  for (char32_t c : token) {
    if (c == U'\\') {
      out += U"\\\\";
    } else if (c == U'_') {
      out += U"\\u";
    } else if (!alphabet.count(c)) {
      out.push_back(U'\\');
      for (char d : std::to_string(static_cast<uint32_t>(c))) out.push_back(d);
      out.push_back(U';');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string ste_escape_body(std::string_view token,
                            const std::unordered_set<char32_t>& alphabet) {
  return encode_utf8(escape_body_scalars(decode_utf8(token), alphabet));
}

std::string ste_escape(std::string_view token,
                       const std::unordered_set<char32_t>& alphabet) {
  return ste_escape_body(token, alphabet) + "_";
}

std::string ste_unescape(std::string_view escaped) {
  const std::u32string in = decode_utf8(escaped);
  std::u32string out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    if (in[i] != U'\\') {
      out.push_back(in[i]);
      ++i;
      continue;
    }
    if (i + 1 >= in.size()) throw InputError("dangling escape at end of subword text");
    const char32_t next = in[i + 1];
    if (next == U'\\') {
      out.push_back(U'\\');
      i += 2;
    } else if (next == U'u') {
      out.push_back(U'_');
      i += 2;
    } else if (next >= U'0' && next <= U'9') {
      uint64_t value = 0;
      size_t j = i + 1;
      while (j < in.size() && in[j] >= U'0' && in[j] <= U'9') {
        value = value * 10 + (in[j] - U'0');
        if (value > 0x10FFFF) throw InputError("escaped code point out of range");
        ++j;
      }
      if (j >= in.size() || in[j] != U';')
        throw InputError("numeric escape missing terminating ';'");
      if (value >= 0xD800 && value <= 0xDFFF)
        throw InputError("escaped code point is a surrogate");
      out.push_back(static_cast<char32_t>(value));
      i = j + 1;
    } else {
      throw InputError("invalid escape sequence in subword text");
    }
  }
  return encode_utf8(out);
}

std::vector<SteEntry> ste_entries(const TokenCounts& counts,
                                  const std::unordered_set<char32_t>& alphabet) {
  std::vector<std::pair<std::string, uint64_t>> types;
  types.reserve(counts.entries.size());
  for (const auto& [word, c] : counts.entries)
    if (!word.empty() && c.total() > 0) types.emplace_back(word, c.total());
  std::sort(types.begin(), types.end());

  std::vector<SteEntry> entries;
  entries.reserve(types.size());
  for (const auto& [word, weight] : types) {
    std::u32string escaped = escape_body_scalars(decode_utf8(word), alphabet);
    escaped.push_back(U'_');
    entries.push_back({std::move(escaped), weight});
  }
  return entries;
}

std::vector<SteEntry> ste_entries_presplit(const TokenCounts& unit_counts,
                                           const std::unordered_set<char32_t>& alphabet) {
  std::vector<std::pair<std::string, TypeCount>> types(unit_counts.entries.begin(),
                                                       unit_counts.entries.end());
  std::sort(types.begin(), types.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<SteEntry> entries;
  for (const auto& [unit, count] : types) {
    if (unit.empty() || count.total() == 0) continue;
    const std::u32string body = escape_body_scalars(decode_utf8(unit), alphabet);
    if (count.non_final > 0) entries.push_back({body, count.non_final});
    if (count.final_count > 0) entries.push_back({body + U"_", count.final_count});
  }
  return entries;
}

uint64_t ste_max_threshold(const std::vector<SteEntry>& entries) {
  // The heaviest substring cannot outweigh the heaviest single character
  // (every occurrence of a substring is an occurrence of its first scalar),
  // so this caps every threshold a refinement round could distinguish.
  std::unordered_map<char32_t, uint64_t> weights;
  for (const SteEntry& e : entries)
    for (char32_t c : e.escaped) weights[c] += e.weight;
  uint64_t max_weight = 1;
  for (const auto& [_, w] : weights) max_weight = std::max(max_weight, w);
  return max_weight;
}

void SubwordVocab::rebuild_index() {
  lookup.clear();
  alphabet.clear();
  max_subtoken_scalars = 1;
  for (const std::string& sub : subtokens) {
    if (sub.empty()) throw InputError("empty subtoken in vocabulary");
    std::u32string scalars = decode_utf8(sub);
    max_subtoken_scalars = std::max(max_subtoken_scalars, scalars.size());
    if (scalars.size() == 1) alphabet.insert(scalars[0]);
    if (!lookup.insert(std::move(scalars)).second)
      throw InputError("duplicate subtoken in vocabulary: " + sub);
  }
}

SubwordVocab ste_char_vocab(const std::unordered_set<char32_t>& alphabet) {
  std::vector<char32_t> chars(alphabet.begin(), alphabet.end());
  std::sort(chars.begin(), chars.end());
  SubwordVocab vocab;
  vocab.subtokens.reserve(chars.size());
  for (char32_t c : chars) {
    std::string s;
    append_utf8(s, c);
    vocab.subtokens.push_back(std::move(s));
  }
  vocab.rebuild_index();
  return vocab;
}

namespace {

// Greedy longest-prefix match positions over an escaped string; returns the
// segment start offsets.
std::vector<size_t> segment_starts(std::u32string_view escaped, const SubwordVocab& vocab) {
  std::vector<size_t> starts;
  size_t pos = 0;
  while (pos < escaped.size()) {
    starts.push_back(pos);
    size_t len = std::min(vocab.max_subtoken_scalars, escaped.size() - pos);
    for (; len > 1; --len) {
      if (vocab.lookup.count(std::u32string(escaped.substr(pos, len)))) break;
    }
    if (len == 1 && !vocab.lookup.count(std::u32string(escaped.substr(pos, 1))))
      throw InputError("vocabulary is missing an alphabet character");
    pos += len;
  }
  return starts;
}

using WeightMap = std::unordered_map<std::u32string, uint64_t>;

}  // namespace

SubwordVocab ste_refine(const std::vector<SteEntry>& entries, const SubwordVocab& current,
                        uint64_t min_count, const SteBuildConfig& cfg,
                        const std::unordered_set<char32_t>& alphabet, int threads) {
  std::vector<WeightMap> partial(static_cast<size_t>(resolve_threads(threads)));
  std::vector<std::exception_ptr> errors(partial.size());
  parallel_chunks(entries.size(), threads, [&](size_t chunk, size_t begin, size_t end) {
    try {
      WeightMap& weights = partial[chunk];
      for (size_t i = begin; i < end; ++i) {
        const SteEntry& entry = entries[i];
        const std::u32string& esc = entry.escaped;
        for (size_t start : segment_starts(esc, current)) {
          const size_t max_len = std::min(cfg.max_subtoken_length, esc.size() - start);
          for (size_t len = 1; len <= max_len; ++len)
            weights[esc.substr(start, len)] += entry.weight;
        }
      }
    } catch (...) {
      errors[chunk] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  WeightMap weights;
  for (auto& m : partial) {
    if (weights.empty()) {
      weights = std::move(m);
      continue;
    }
    for (auto& [sub, w] : m) weights[sub] += w;
  }

  struct Candidate {
    std::u32string sub;
    uint64_t weight;
  };
  std::vector<Candidate> kept;
  kept.reserve(weights.size() / 4 + alphabet.size());
  for (const auto& [sub, w] : weights)
    if (w >= min_count) kept.push_back({sub, w});
  for (char32_t c : alphabet) {
    const std::u32string s(1, c);
    auto it = weights.find(s);
    const uint64_t w = it == weights.end() ? 0 : it->second;
    if (w < min_count) kept.push_back({s, w});  // below threshold but always kept
  }

  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    if (a.sub.size() != b.sub.size()) return a.sub.size() > b.sub.size();
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.sub < b.sub;
  });

  SubwordVocab vocab;
  vocab.subtokens.reserve(kept.size());
  for (const Candidate& c : kept) vocab.subtokens.push_back(encode_utf8(c.sub));
  vocab.rebuild_index();
  return vocab;
}

SubwordVocab ste_refine_vocab(const TokenCounts& counts, const SubwordVocab& current,
                              uint64_t min_count, const SteBuildConfig& cfg, int threads) {
  const auto alphabet = escaped_alphabet(counts);
  return ste_refine(ste_entries(counts, alphabet), current, min_count, cfg, alphabet,
                    threads);
}

namespace {

SubwordVocab build_from_entries(const std::vector<SteEntry>& entries,
                                const std::unordered_set<char32_t>& alphabet,
                                const SteBuildConfig& cfg, int threads) {
  if (entries.empty()) throw InputError("cannot build a vocabulary from empty counts");
  if (cfg.target_size <= alphabet.size())
    throw ConfigError("target size " + std::to_string(cfg.target_size) +
                      " does not exceed the alphabet size " +
                      std::to_string(alphabet.size()));

  const SubwordVocab chars = ste_char_vocab(alphabet);
  auto run = [&](uint64_t min_count) {
    SubwordVocab vocab = chars;
    for (int i = 0; i < cfg.num_refinement_iterations; ++i)
      vocab = ste_refine(entries, vocab, min_count, cfg, alphabet, threads);
    return vocab;
  };
  auto distance = [&](size_t size) {
    return size > cfg.target_size ? size - cfg.target_size : cfg.target_size - size;
  };

  SubwordVocab best;
  size_t best_diff = SIZE_MAX;
  uint64_t lo = 1, hi = ste_max_threshold(entries);
  while (lo <= hi) {
    const uint64_t mid = lo + (hi - lo) / 2;
    SubwordVocab vocab = run(mid);
    const size_t size = vocab.size();
    const size_t diff = distance(size);
    if (static_cast<double>(diff) * 100.0 <=
        static_cast<double>(cfg.target_size) * cfg.size_tolerance_pct)
      return vocab;
    if (diff < best_diff || (diff == best_diff && size > best.size())) {
      best_diff = diff;
      best = std::move(vocab);
    }
    if (size > cfg.target_size) {
      lo = mid + 1;
    } else {
      if (mid == 1) break;
      hi = mid - 1;
    }
  }
  return best;
}

}  // namespace

SubwordVocab ste_build_vocab(const TokenCounts& counts, const SteBuildConfig& cfg,
                             int threads) {
  const auto alphabet = escaped_alphabet(counts);
  return build_from_entries(ste_entries(counts, alphabet), alphabet, cfg, threads);
}

SubwordVocab ste_build_vocab_presplit(const TokenCounts& unit_counts,
                                      const SteBuildConfig& cfg, int threads) {
  const auto alphabet = escaped_alphabet(unit_counts);
  return build_from_entries(ste_entries_presplit(unit_counts, alphabet), alphabet, cfg,
                            threads);
}

std::vector<std::string> ste_encode_escaped(std::u32string_view escaped,
                                            const SubwordVocab& vocab) {
  std::vector<std::string> pieces;
  size_t pos = 0;
  while (pos < escaped.size()) {
    size_t len = std::min(vocab.max_subtoken_scalars, escaped.size() - pos);
    for (; len > 1; --len) {
      if (vocab.lookup.count(std::u32string(escaped.substr(pos, len)))) break;
    }
    if (len == 1 && !vocab.lookup.count(std::u32string(escaped.substr(pos, 1))))
      throw InputError("vocabulary is missing an alphabet character");
    pieces.push_back(encode_utf8(escaped.substr(pos, len)));
    pos += len;
  }
  return pieces;
}

std::vector<std::string> ste_encode_token(std::string_view token, const SubwordVocab& vocab) {
  std::u32string escaped = escape_body_scalars(decode_utf8(token), vocab.alphabet);
  escaped.push_back(U'_');
  return ste_encode_escaped(escaped, vocab);
}

std::vector<std::string> ste_encode_token_unmarked(std::string_view token,
                                                   const SubwordVocab& vocab) {
  return ste_encode_escaped(escape_body_scalars(decode_utf8(token), vocab.alphabet), vocab);
}

std::vector<std::string> ste_decode(const std::vector<std::string>& subtokens) {
  std::u32string all;
  for (const std::string& sub : subtokens) all += decode_utf8(sub);

  std::vector<std::string> tokens;
  std::u32string piece;
  for (char32_t c : all) {
    if (c == U'_') {
      tokens.push_back(ste_unescape(encode_utf8(piece)));
      piece.clear();
    } else {
      piece.push_back(c);
    }
  }
  if (!piece.empty())  // non-final-underscore interoperability
    tokens.push_back(ste_unescape(encode_utf8(piece)));
  return tokens;
}

Sentence ste_encode_sentence(const Sentence& tokens, const SubwordVocab& vocab) {
  Sentence out;
  for (const std::string& token : tokens) {
    require_markable(token);
    for (std::string& piece : ste_encode_token(token, vocab)) out.push_back(std::move(piece));
  }
  return out;
}

void ste_save(const SubwordVocab& vocab, std::ostream& out) {
  out << "#subseg-ste v1\n";
  for (const std::string& sub : vocab.subtokens) out << sub << "\n";
}

SubwordVocab ste_load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "#subseg-ste v1")
    throw InputError("not a subseg STE vocabulary (bad header)");
  SubwordVocab vocab;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      throw InputError("line " + std::to_string(line_no) + ": empty subtoken");
    vocab.subtokens.push_back(line);
  }
  vocab.rebuild_index();
  return vocab;
}

}  // namespace subseg
