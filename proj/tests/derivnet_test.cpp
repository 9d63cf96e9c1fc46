// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "derivnet.hpp"
#include "test_support.hpp"
#include "text.hpp"

using namespace subseg;

namespace {

std::u32string u32(const char* s) { return decode_utf8(s); }

DerivGraph wave_fixture() {
  // mávat—mávnout, mávat—mávající
  DerivGraph g;
  const uint32_t mavat = g.add_node("mávat");
  const uint32_t mavnout = g.add_node("mávnout");
  const uint32_t mavajici = g.add_node("mávající");
  g.add_edge(mavnout, mavat, EdgeKind::Derivation);
  g.add_edge(mavajici, mavat, EdgeKind::Derivation);
  return g;
}

std::vector<uint32_t> bounds(const DerivGraph& g, const std::string& surface) {
  for (const auto& node : g.nodes)
    if (node.surface == surface)
      return std::vector<uint32_t>(node.boundaries.begin(), node.boundaries.end());
  FAIL("no node ", surface);
  return {};
}

}  // namespace

TEST_CASE("lcs_align finds the leftmost longest common substring") {
  auto check = [](const char* a, const char* b, uint32_t oa, uint32_t ob, uint32_t len) {
    const LcsAlignment al = lcs_align(u32(a), u32(b));
    CHECK(al.offset_a == oa);
    CHECK(al.offset_b == ob);
    CHECK(al.length == len);
  };
  check("mávat", "mávnout", 0, 0, 3);   // máv
  check("mávat", "mávající", 0, 0, 4);  // máva
  check("abc", "xyz", 0, 0, 0);
  check("abab", "ab", 0, 0, 2);   // tie on length: leftmost in the first word
  check("xaby", "ab", 1, 0, 2);
  check("ab", "abab", 0, 0, 2);   // then leftmost in the second word
  check("vat", "at", 1, 0, 2);
}

TEST_CASE("stemming splits both edge endpoints at the substring ends") {
  DerivGraph g = wave_fixture();
  stem_edges(g);
  CHECK(bounds(g, "mávat") == std::vector<uint32_t>{3, 4});
  CHECK(bounds(g, "mávnout") == std::vector<uint32_t>{3});
  CHECK(bounds(g, "mávající") == std::vector<uint32_t>{4});
}

TEST_CASE("a zero-length or degenerate alignment adds no boundaries") {
  DerivGraph g;
  const uint32_t a = g.add_node("abc");
  const uint32_t b = g.add_node("xyz");
  g.add_edge(a, b, EdgeKind::Derivation);
  const uint32_t w1 = g.add_node("stejný");
  const uint32_t w2 = g.add_node("stejný");
  g.add_edge(w1, w2, EdgeKind::Inflection);
  stem_edges(g);
  propagate_boundaries(g);
  for (const auto& node : g.nodes) CHECK(node.boundaries.empty());
}

TEST_CASE("stemming the abc—abd edge splits both words at position 2") {
  DerivGraph g;
  const uint32_t a = g.add_node("abc");
  const uint32_t b = g.add_node("abd");
  g.add_edge(a, b, EdgeKind::Derivation);
  stem_edges(g);
  CHECK(bounds(g, "abc") == std::vector<uint32_t>{2});
  CHECK(bounds(g, "abd") == std::vector<uint32_t>{2});
}

TEST_CASE("propagation completes the worked segmentation") {
  DerivGraph g = wave_fixture();
  stem_edges(g);
  propagate_boundaries(g);
  CHECK(bounds(g, "mávat") == std::vector<uint32_t>{3, 4});
  CHECK(bounds(g, "mávnout") == std::vector<uint32_t>{3});
  CHECK(bounds(g, "mávající") == std::vector<uint32_t>{3, 4});  // máv-a-jící
}

TEST_CASE("boundaries on the alignment edge never propagate") {
  // máv|nout's boundary 3 sits exactly at the end of the "máv" alignment, so
  // nothing new reaches mávat through that edge.
  DerivGraph g;
  const uint32_t u = g.add_node("abcd");
  const uint32_t v = g.add_node("abce");
  g.add_edge(u, v, EdgeKind::Derivation);
  stem_edges(g);  // both get {3}
  g.nodes[u].boundaries.insert(1);
  propagate_boundaries(g);
  CHECK(bounds(g, "abce") == std::vector<uint32_t>{1, 3});  // 1 is interior
  g.nodes[u].boundaries.clear();
  g.nodes[v].boundaries.clear();
  g.nodes[u].boundaries.insert(3);  // exactly at the alignment edge
  propagate_boundaries(g);
  CHECK(bounds(g, "abce").empty());
}

TEST_CASE("a boundary crosses a chain one edge per round") {
  DerivGraph g;
  const uint32_t a = g.add_node("xay");
  const uint32_t d = g.add_node("xby");
  const uint32_t b = g.add_node("xayz");
  const uint32_t c = g.add_node("xayzw");
  g.add_edge(a, d, EdgeKind::Derivation);
  g.add_edge(a, b, EdgeKind::Derivation);
  g.add_edge(b, c, EdgeKind::Derivation);
  stem_edges(g);
  propagate_boundaries(g);
  CHECK(bounds(g, "xay") == std::vector<uint32_t>{1});
  CHECK(bounds(g, "xby") == std::vector<uint32_t>{1});
  CHECK(bounds(g, "xayz") == std::vector<uint32_t>{1, 3});
  CHECK(bounds(g, "xayzw") == std::vector<uint32_t>{1, 3, 4});
}

TEST_CASE("the final boundary sets are independent of edge order") {
  std::mt19937 rng(77);
  for (int iter = 0; iter < 10; ++iter) {
    // A random forest over words sharing a stem pool.
    DerivGraph base;
    const size_t n = 12;
    std::vector<std::string> words;
    for (size_t i = 0; i < n; ++i) {
      std::string w = testsup::random_token(rng, 2, 4, {"m", "á", "v"});
      w += testsup::random_token(rng, 1, 3, {"a", "t", "e", "í"});
      words.push_back(w);
      base.add_node(w);
    }
    for (size_t i = 1; i < n; ++i)
      base.add_edge(static_cast<uint32_t>(i), static_cast<uint32_t>(rng() % i),
                    rng() % 2 ? EdgeKind::Derivation : EdgeKind::Inflection);

    DerivGraph reference = base;
    stem_edges(reference);
    propagate_boundaries(reference);

    for (int order = 0; order < 5; ++order) {
      DerivGraph shuffled = base;
      std::shuffle(shuffled.edges.begin(), shuffled.edges.end(), rng);
      stem_edges(shuffled);
      propagate_boundaries(shuffled);
      for (size_t i = 0; i < n; ++i)
        CHECK(shuffled.nodes[i].boundaries == reference.nodes[i].boundaries);
    }
  }
}

TEST_CASE("exported lexicon entries reconstruct their words") {
  std::mt19937 rng(101);
  DerivGraph g;
  const size_t n = 20;
  for (size_t i = 0; i < n; ++i) g.add_node(testsup::random_token(rng, 1, 7));
  for (size_t i = 1; i < n; ++i)
    g.add_edge(static_cast<uint32_t>(i), static_cast<uint32_t>(rng() % i),
               EdgeKind::Derivation);
  stem_edges(g);
  propagate_boundaries(g);
  const SegmentationLexicon lexicon = export_lexicon(g);
  for (const auto& [word, bounds] : lexicon.entries()) {
    std::string joined;
    for (const std::string& m : split_morphs(word, bounds)) joined += m;
    CHECK(joined == word);
  }
}

TEST_CASE("duplicate surfaces merge by boundary union") {
  DerivGraph g;
  g.add_node("pec");
  g.add_node("pec");
  g.nodes[0].boundaries.insert(1);
  g.nodes[1].boundaries.insert(2);
  const SegmentationLexicon lexicon = export_lexicon(g);
  CHECK(lexicon.entries().at("pec") == std::vector<uint32_t>{1, 2});

  CHECK(export_lexicon(DerivGraph{}).empty());
}

TEST_CASE("lexicon application follows the worked example") {
  DerivGraph g = wave_fixture();
  stem_edges(g);
  propagate_boundaries(g);
  const SegmentationLexicon lexicon = export_lexicon(g);

  CHECK(testsup::join(apply_lexicon({"mávat"}, lexicon, Marker::Continuation)) ==
        "máv@@ a@@ t");
  CHECK(testsup::join(apply_lexicon({"xyz"}, lexicon, Marker::Continuation)) == "xyz");
  // Case-folded fallback maps boundaries positionally.
  CHECK(testsup::join(apply_lexicon({"Mávat"}, lexicon, Marker::Continuation)) ==
        "Máv@@ a@@ t");
  CHECK(testsup::join(apply_lexicon({"mávat", "."}, lexicon, Marker::EndMarker)) ==
        "máv a t_ ._");
}

TEST_CASE("build_graph reads both derivation formats") {
  const char* three_cols = "1\tmávat\t\n2\tmávnout\t1\n3\tmávající\t1\n";
  const char* five_cols =
      "1\tmávat\tmávat-V\tV\t\n2\tmávnout\tmávnout-V\tV\t1\n3\tmávající\tmávající-A\tA\t1\n";
  for (const char* text : {three_cols, five_cols}) {
    std::istringstream deriv(text);
    std::istringstream infl("");
    const SegmentationLexicon lexicon = derivnet_build(deriv, infl);
    CHECK(lexicon.entries().at("mávat") == std::vector<uint32_t>{3, 4});
    CHECK(lexicon.entries().at("mávnout") == std::vector<uint32_t>{3});
    CHECK(lexicon.entries().at("mávající") == std::vector<uint32_t>{3, 4});
  }
}

TEST_CASE("inflections attach to their lemma or form isolated components") {
  std::istringstream deriv("1\tmávat\t\n");
  std::istringstream infl("mávat\tmávám\nletět\tletím\n");
  DerivGraph g = build_graph(deriv, infl);
  REQUIRE(g.nodes.size() == 4);  // mávat, mávám, letět, letím
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].kind == EdgeKind::Inflection);

  stem_edges(g);
  propagate_boundaries(g);
  const SegmentationLexicon lexicon = export_lexicon(g);
  CHECK(lexicon.entries().count("letět") == 1);
  CHECK(lexicon.entries().count("letím") == 1);
  CHECK(lexicon.entries().at("mávám") == std::vector<uint32_t>{3});  // máv|ám
}

TEST_CASE("build_graph rejects malformed networks") {
  {
    std::istringstream deriv("1\ta\t2\n2\tb\t1\n");
    std::istringstream infl("");
    CHECK_THROWS_WITH_AS(build_graph(deriv, infl), doctest::Contains("cycle"), InputError);
  }
  {
    std::istringstream deriv("1\ta\t9\n");
    std::istringstream infl("");
    CHECK_THROWS_WITH_AS(build_graph(deriv, infl), doctest::Contains("unknown parent"),
                         InputError);
  }
  {
    std::istringstream deriv("1\ta\t\n1\tb\t\n");
    std::istringstream infl("");
    CHECK_THROWS_WITH_AS(build_graph(deriv, infl), doctest::Contains("duplicate"),
                         InputError);
  }
  {
    std::istringstream deriv("1\ta\n");
    std::istringstream infl("");
    CHECK_THROWS_AS(build_graph(deriv, infl), InputError);
  }
  {
    std::istringstream deriv("1\ta\t\n");
    std::istringstream infl("only-one-column\n");
    CHECK_THROWS_AS(build_graph(deriv, infl), InputError);
  }
}

TEST_CASE("lexicon files verify the concatenation invariant") {
  std::istringstream good("mávat\tmáv a t\nxyz\txyz\n");
  const SegmentationLexicon lexicon = lexicon_load(good);
  CHECK(lexicon.entries().at("mávat") == std::vector<uint32_t>{3, 4});
  CHECK(lexicon.entries().at("xyz").empty());

  std::ostringstream out;
  lexicon_save(lexicon, out);
  CHECK(out.str() == "mávat\tmáv a t\nxyz\txyz\n");

  std::istringstream bad("abc\tab d\n");
  CHECK_THROWS_WITH_AS(lexicon_load(bad), doctest::Contains("line 1"), InputError);
  std::istringstream bad2("ok\tok\nabc\tab c d\n");
  CHECK_THROWS_WITH_AS(lexicon_load(bad2), doctest::Contains("line 2"), InputError);
}
