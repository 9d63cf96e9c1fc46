// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexicon.hpp"

namespace subseg {

// A maximum-length common contiguous substring. Offsets and length are in
// Unicode scalar values.
struct LcsAlignment {
  uint32_t offset_a = 0;
  uint32_t offset_b = 0;
  uint32_t length = 0;
};

// Ties resolve to the smallest offset_a, then the smallest offset_b; no
// common character yields (0, 0, 0).
LcsAlignment lcs_align(std::u32string_view a, std::u32string_view b);

enum class EdgeKind : uint8_t { Derivation, Inflection };

// Word-form graph: a derivation forest over lemmas with inflected forms
// attached as leaves. Boundary sets only ever grow.
struct DerivGraph {
  struct Node {
    std::string surface;
    std::u32string scalars;
    std::set<uint32_t> boundaries;  // strictly internal split positions
  };
  struct Edge {
    uint32_t u = 0;
    uint32_t v = 0;
    EdgeKind kind = EdgeKind::Derivation;
    LcsAlignment align;
    bool aligned = false;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;

  uint32_t add_node(std::string surface);
  void add_edge(uint32_t u, uint32_t v, EdgeKind kind);
};

// Derivations: TSV "id<TAB>lemma<TAB>parent_id" or
// "id<TAB>lemma<TAB>techlemma<TAB>pos<TAB>parent_id" (extra columns ignored),
// parent empty for roots; parent cycles are rejected. Inflections: TSV
// "lemma<TAB>form"; forms whose lemma has no derivation node become isolated
// two-node components.
DerivGraph build_graph(std::istream& derivations, std::istream& inflections);

// Aligns every edge by longest common substring and splits both endpoints at
// the substring's ends (positions 0 and word length are discarded).
void stem_edges(DerivGraph& graph, int threads = 1);

// Closure of: a boundary strictly inside an edge's aligned substring maps
// into the other word. Iterates over edges in stored order until stable; the
// result is order-independent because the rule is a monotone closure.
void propagate_boundaries(DerivGraph& graph);

SegmentationLexicon export_lexicon(const DerivGraph& graph);

// Convenience pipeline: build, stem, propagate, export.
SegmentationLexicon derivnet_build(std::istream& derivations, std::istream& inflections,
                                   int threads = 1);

}  // namespace subseg
