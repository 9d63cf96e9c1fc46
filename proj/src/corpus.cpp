// SPDX-License-Identifier: Apache-2.0
#include "corpus.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>

#include "parallel.hpp"
#include "ste.hpp"
#include "text.hpp"

namespace subseg {

Marker parse_marker(std::string_view name) {
  if (name == "continuation") return Marker::Continuation;
  if (name == "end-marker" || name == "end_marker") return Marker::EndMarker;
  throw ConfigError("unknown marker convention: " + std::string(name));
}

uint64_t TokenCounts::total_tokens() const {
  uint64_t n = 0;
  for (const auto& [_, c] : entries) n += c.total();
  return n;
}

SentenceReader::SentenceReader(std::istream& in, std::optional<uint64_t> byte_budget)
    : in_(in), budget_(byte_budget) {}

bool SentenceReader::next(Sentence& out) {
  if (done_) return false;
  std::string line;
  if (!std::getline(in_, line)) return false;
  const uint64_t line_bytes = line.size() + (in_.eof() ? 0 : 1);

  const std::u32string scalars = decode_utf8(line, consumed_);
  (void)scalars;  // decoded only to validate; tokens stay UTF-8

  out.clear();
  for (std::string_view tok : split_tokens(line)) out.emplace_back(tok);

  consumed_ += line_bytes;
  if (budget_) {
    bytes_read_ += std::min<uint64_t>(line_bytes, *budget_ - bytes_read_);
    if (consumed_ > *budget_) done_ = true;  // first crossing line was kept whole
  } else {
    bytes_read_ = consumed_;
  }
  return true;
}

std::vector<Sentence> read_tokenized(std::istream& in, std::optional<uint64_t> byte_budget) {
  SentenceReader reader(in, byte_budget);
  std::vector<Sentence> stream;
  Sentence s;
  while (reader.next(s)) stream.push_back(s);
  return stream;
}

namespace {

using CountMap = std::unordered_map<std::string, TypeCount>;

void merge_counts(CountMap& dst, CountMap&& src) {
  if (dst.empty()) {
    dst = std::move(src);
    return;
  }
  for (auto& [word, c] : src) {
    TypeCount& t = dst[word];
    t.non_final += c.non_final;
    t.final_count += c.final_count;
  }
}

// Strips the continuation mark of a pre-split unit and validates the bare
// morph text.
std::string_view presplit_unit(std::string_view token, bool& word_final) {
  word_final = !ends_with(token, "@@");
  std::string_view bare = word_final ? token : token.substr(0, token.size() - 2);
  if (bare.empty()) throw InputError("pre-split corpus contains a bare continuation mark");
  if (bare.find("@@") != std::string_view::npos || bare.find('_') != std::string_view::npos)
    throw InputError("pre-split unit contains marker characters: " + std::string(token));
  return bare;
}

TokenCounts count_impl(const std::vector<Sentence>& stream, bool presplit, int threads) {
  std::vector<CountMap> partial(static_cast<size_t>(resolve_threads(threads)));
  std::vector<std::exception_ptr> errors(partial.size());
  parallel_chunks(stream.size(), threads, [&](size_t chunk, size_t begin, size_t end) {
    try {
      CountMap& counts = partial[chunk];
      for (size_t i = begin; i < end; ++i) {
        const Sentence& sentence = stream[i];
        for (size_t j = 0; j < sentence.size(); ++j) {
          if (presplit) {
            bool word_final = false;
            std::string_view bare = presplit_unit(sentence[j], word_final);
            TypeCount& t = counts[std::string(bare)];
            if (word_final)
              ++t.final_count;
            else
              ++t.non_final;
          } else {
            TypeCount& t = counts[sentence[j]];
            if (j + 1 == sentence.size())
              ++t.final_count;
            else
              ++t.non_final;
          }
        }
      }
    } catch (...) {
      errors[chunk] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  TokenCounts out;
  for (auto& m : partial) merge_counts(out.entries, std::move(m));
  return out;
}

}  // namespace

TokenCounts count_tokens(const std::vector<Sentence>& stream, int threads) {
  return count_impl(stream, false, threads);
}

TokenCounts count_stream(std::istream& in, std::optional<uint64_t> byte_budget,
                         bool presplit, int threads) {
  SentenceReader reader(in, byte_budget);
  std::vector<Sentence> stream;
  Sentence s;
  while (reader.next(s)) stream.push_back(std::move(s));
  TokenCounts counts = count_impl(stream, presplit, threads);
  counts.bytes_read = reader.bytes_read();
  return counts;
}

TokenCounts count_file(const std::string& path, std::optional<uint64_t> byte_budget,
                       bool presplit, int threads) {
  if (std::filesystem::is_directory(path)) throw IoError(path + " is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return count_stream(in, byte_budget, presplit, threads);
}

TokenCounts counts_union(const TokenCounts& a, const TokenCounts& b) {
  TokenCounts out = a;
  for (const auto& [word, c] : b.entries) {
    TypeCount& t = out.entries[word];
    t.non_final += c.non_final;
    t.final_count += c.final_count;
  }
  out.bytes_read = a.bytes_read + b.bytes_read;
  return out;
}

void require_markable(std::string_view token) {
  if (token.find("@@") != std::string_view::npos)
    throw InputError("token contains the continuation marker \"@@\": " + std::string(token));
  if (token.find('_') != std::string_view::npos)
    throw InputError("token contains the end marker '_': " + std::string(token));
}

namespace {

void emit_word(Sentence& out, std::string&& word, bool unescape) {
  if (word.empty()) return;
  out.push_back(unescape ? ste_unescape(word) : std::move(word));
}

}  // namespace

Sentence undo_splits(const Sentence& stream, Marker convention, bool unescape) {
  Sentence out;
  std::string word;
  if (convention == Marker::Continuation) {
    for (const std::string& piece : stream) {
      if (ends_with(piece, "@@")) {
        word.append(piece, 0, piece.size() - 2);
        continue;
      }
      word += piece;
      if (ends_with(word, "_")) word.pop_back();
      emit_word(out, std::move(word), unescape);
      word.clear();
    }
    if (!word.empty()) {  // dangling continuation at sentence end
      if (ends_with(word, "_")) word.pop_back();
      emit_word(out, std::move(word), unescape);
    }
  } else {
    for (const std::string& piece : stream) {
      if (ends_with(piece, "_")) {
        word.append(piece, 0, piece.size() - 1);
        emit_word(out, std::move(word), unescape);
        word.clear();
      } else if (ends_with(piece, "@@")) {
        word.append(piece, 0, piece.size() - 2);  // morph-unit glue from composition
      } else {
        word += piece;
      }
    }
    emit_word(out, std::move(word), unescape);  // sentence boundary ends the last word
  }
  return out;
}

std::string undo_splits_line(const std::string& line, Marker convention, bool unescape) {
  Sentence pieces;
  for (std::string_view tok : split_tokens(line)) pieces.emplace_back(tok);
  return join_tokens(undo_splits(pieces, convention, unescape));
}

CorpusStats corpus_stats(const TokenCounts& src, const TokenCounts& tgt) {
  CorpusStats s;
  s.tokens_src = src.total_tokens();
  s.tokens_tgt = tgt.total_tokens();
  s.types_src = src.entries.size();
  s.types_tgt = tgt.entries.size();
  uint64_t shared = 0;
  const TokenCounts& small = src.entries.size() <= tgt.entries.size() ? src : tgt;
  const TokenCounts& large = src.entries.size() <= tgt.entries.size() ? tgt : src;
  for (const auto& [word, _] : small.entries)
    if (large.entries.count(word)) ++shared;
  const uint64_t unioned = s.types_src + s.types_tgt - shared;
  s.shared_pct = unioned == 0 ? 0.0 : 100.0 * static_cast<double>(shared) / static_cast<double>(unioned);
  return s;
}

std::string stats_tsv(const CorpusStats& s) {
  std::string out;
  out += "tokens_src\t" + std::to_string(s.tokens_src) + "\n";
  out += "tokens_tgt\t" + std::to_string(s.tokens_tgt) + "\n";
  out += "types_src\t" + std::to_string(s.types_src) + "\n";
  out += "types_tgt\t" + std::to_string(s.types_tgt) + "\n";
  out += "shared_pct\t" + format_fixed(s.shared_pct, 2) + "\n";
  return out;
}

}  // namespace subseg
