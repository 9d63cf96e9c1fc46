// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "corpus.hpp"
#include "test_support.hpp"
#include "text.hpp"

using namespace subseg;

namespace {

std::vector<Sentence> parse(const std::string& text,
                            std::optional<uint64_t> budget = {}) {
  std::istringstream in(text);
  return read_tokenized(in, budget);
}

}  // namespace

TEST_CASE("read_tokenized parses sentences in order") {
  CHECK(parse("a b\nc\n") == std::vector<Sentence>{{"a", "b"}, {"c"}});
  CHECK(parse("") == std::vector<Sentence>{});
  CHECK(parse("a\n\nb\n") == std::vector<Sentence>{{"a"}, {}, {"b"}});
  CHECK(parse("a b") == std::vector<Sentence>{{"a", "b"}});  // no trailing newline
  CHECK(parse("a b\r\nc\r\n") == std::vector<Sentence>{{"a", "b"}, {"c"}});  // CRLF
}

TEST_CASE("read_tokenized byte budget keeps the crossing line whole") {
  CHECK(parse("a b\nc\n", 2) == std::vector<Sentence>{{"a", "b"}});
  CHECK(parse("a b\nc\n", 0) == std::vector<Sentence>{{"a", "b"}});
  // First line fits exactly, so the second line is the crossing one.
  CHECK(parse("a b\nc\nd\n", 4) == std::vector<Sentence>{{"a", "b"}, {"c"}});
  CHECK(parse("a b\nc\n", 1000) == std::vector<Sentence>{{"a", "b"}, {"c"}});
}

TEST_CASE("SentenceReader never charges more than the budget") {
  std::istringstream in("aaaa bbbb\ncccc\n");
  SentenceReader reader(in, 3);
  Sentence s;
  while (reader.next(s)) {
  }
  CHECK(reader.bytes_read() <= 3);
}

TEST_CASE("read_tokenized rejects invalid UTF-8 with a byte offset") {
  CHECK_THROWS_WITH_AS(parse("\xff"), doctest::Contains("byte offset 0"), InputError);
  CHECK_THROWS_WITH_AS(parse("ab\n\x80x"), doctest::Contains("byte offset 3"), InputError);
  CHECK_THROWS_AS(parse("\xc3\x28"), InputError);          // bad continuation
  CHECK_THROWS_AS(parse("\xc0\xaf"), InputError);          // overlong
  CHECK_THROWS_AS(parse("\xed\xa0\x80"), InputError);      // surrogate
  CHECK_THROWS_AS(parse("\xf4\x90\x80\x80"), InputError);  // above U+10FFFF
}

TEST_CASE("canonical text round-trips byte for byte") {
  std::mt19937 rng(42);
  for (int iter = 0; iter < 50; ++iter) {
    std::string text;
    for (const Sentence& s : testsup::random_stream(rng, 10, 6, 5))
      text += testsup::join(s) + "\n";
    std::string again;
    for (const Sentence& s : parse(text)) again += testsup::join(s) + "\n";
    CHECK(again == text);
  }
}

TEST_CASE("count_tokens separates sentence-final occurrences") {
  TokenCounts c = count_tokens({{"a", "b"}, {"a"}});
  CHECK(c.entries.at("a").non_final == 1);
  CHECK(c.entries.at("a").final_count == 1);
  CHECK(c.entries.at("b").non_final == 0);
  CHECK(c.entries.at("b").final_count == 1);

  CHECK(count_tokens({}).entries.empty());

  TokenCounts x = count_tokens({{"x", "x", "x"}});
  CHECK(x.entries.at("x").non_final == 2);
  CHECK(x.entries.at("x").final_count == 1);
}

TEST_CASE("count totals match the token count and sharding is exact") {
  std::mt19937 rng(7);
  for (int iter = 0; iter < 20; ++iter) {
    const auto stream = testsup::random_stream(rng, 40, 8, 5);
    uint64_t tokens = 0;
    for (const Sentence& s : stream) tokens += s.size();
    const TokenCounts single = count_tokens(stream, 1);
    CHECK(single.total_tokens() == tokens);
    for (int threads : {2, 3, 7}) {
      const TokenCounts sharded = count_tokens(stream, threads);
      CHECK(sharded.entries.size() == single.entries.size());
      for (const auto& [word, c] : single.entries) {
        CHECK(sharded.entries.at(word).non_final == c.non_final);
        CHECK(sharded.entries.at(word).final_count == c.final_count);
      }
    }
  }
}

TEST_CASE("presplit counting tallies units by word finality") {
  std::istringstream in("tram@@ vaj@@ e tram@@ vaj\n");
  const TokenCounts c = count_stream(in, {}, true, 1);
  CHECK(c.entries.at("tram").non_final == 2);
  CHECK(c.entries.at("tram").final_count == 0);
  CHECK(c.entries.at("vaj").non_final == 1);
  CHECK(c.entries.at("vaj").final_count == 1);
  CHECK(c.entries.at("e").final_count == 1);

  std::istringstream bad("a@@ @@\n");
  CHECK_THROWS_AS(count_stream(bad, {}, true, 1), InputError);
  std::istringstream bad2("a_b\n");
  CHECK_THROWS_AS(count_stream(bad2, {}, true, 1), InputError);
}

TEST_CASE("undo_splits inverts the continuation convention") {
  CHECK(undo_splits({"tram@@", "vaj", "."}, Marker::Continuation) ==
        Sentence{"tramvaj", "."});
  CHECK(undo_splits({"a"}, Marker::Continuation) == Sentence{"a"});
  // Underscore-mode output keeps the zero-suffix symbol on the last piece.
  CHECK(undo_splits({"Z_", "tram@@", "va@@", "je_", "._"}, Marker::Continuation) ==
        Sentence{"Z", "tramvaje", "."});
  CHECK(undo_splits({"x@@", "_"}, Marker::Continuation) == Sentence{"x"});
}

TEST_CASE("undo_splits inverts the end-marker convention") {
  CHECK(undo_splits({"tramvaj_", "._"}, Marker::EndMarker) == Sentence{"tramvaj", "."});
  CHECK(undo_splits({"tramvaj", "_", "._"}, Marker::EndMarker) == Sentence{"tramvaj", "."});
  // Sentence boundary closes the last word (non-final underscore mode).
  CHECK(undo_splits({"a_", "b"}, Marker::EndMarker) == Sentence{"a", "b"});
  // Composed output: "@@" closes a morph unit while the word continues.
  CHECK(undo_splits({"Z_", "tra", "m@@", "vaj@@", "e_", "._"}, Marker::EndMarker) ==
        Sentence{"Z", "tramvaje", "."});
}

TEST_CASE("undo_splits_line is a plain line filter") {
  CHECK(undo_splits_line("tram@@ vaj .", Marker::Continuation) == "tramvaj .");
  CHECK(undo_splits_line("", Marker::Continuation) == "");
  CHECK(undo_splits_line("a\\u b_", Marker::EndMarker, true) == "a_b");
}

TEST_CASE("undo_splits survives arbitrary marker soup") {
  std::mt19937 rng(271);
  const std::vector<std::string> soup_chars = {"a", "@", "_", "\\", "b", "@@"};
  for (int iter = 0; iter < 500; ++iter) {
    Sentence pieces;
    const size_t n = rng() % 6;
    for (size_t i = 0; i < n; ++i) {
      std::string piece;
      const size_t len = 1 + rng() % 4;
      for (size_t k = 0; k < len; ++k) piece += soup_chars[rng() % soup_chars.size()];
      pieces.push_back(std::move(piece));
    }
    for (Marker convention : {Marker::Continuation, Marker::EndMarker}) {
      CHECK_NOTHROW(undo_splits(pieces, convention));  // marker-level undo never throws
      try {
        undo_splits(pieces, convention, true);  // unescaping may reject bad escapes
      } catch (const InputError&) {
      }
    }
  }
}

TEST_CASE("require_markable rejects marker collisions") {
  CHECK_THROWS_AS(require_markable("a@@b"), InputError);
  CHECK_THROWS_AS(require_markable("a_b"), InputError);
  CHECK_THROWS_AS(require_markable("_"), InputError);
  CHECK_NOTHROW(require_markable("a@b"));
  CHECK_NOTHROW(require_markable("tramvaj"));
}

TEST_CASE("corpus_stats computes shared types over the union") {
  using testsup::make_counts;
  CorpusStats s = corpus_stats(make_counts({{"a", 0, 1}}), make_counts({{"a", 0, 1}}));
  CHECK(s.shared_pct == doctest::Approx(100.0));

  s = corpus_stats(make_counts({{"a", 0, 1}}), make_counts({{"b", 0, 1}}));
  CHECK(s.shared_pct == doctest::Approx(0.0));

  s = corpus_stats(make_counts({{"a", 1, 1}, {"b", 0, 1}}),
                   make_counts({{"b", 2, 1}, {"c", 0, 1}}));
  CHECK(s.tokens_src == 3);
  CHECK(s.tokens_tgt == 4);
  CHECK(s.types_src == 2);
  CHECK(s.types_tgt == 2);
  CHECK(s.shared_pct == doctest::Approx(100.0 / 3.0));
  CHECK(stats_tsv(s) ==
        "tokens_src\t3\ntokens_tgt\t4\ntypes_src\t2\ntypes_tgt\t2\nshared_pct\t33.33\n");
}
