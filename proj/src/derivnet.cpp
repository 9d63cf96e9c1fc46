// SPDX-License-Identifier: Apache-2.0
#include "derivnet.hpp"

#include <algorithm>
#include <unordered_map>

#include "parallel.hpp"
#include "text.hpp"

namespace subseg {

LcsAlignment lcs_align(std::u32string_view a, std::u32string_view b) {
  LcsAlignment best;
  if (a.empty() || b.empty()) return best;

  // Rolling-row DP over common suffixes ending at (i, j).
  std::vector<uint32_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] != b[j - 1]) {
        cur[j] = 0;
        continue;
      }
      cur[j] = prev[j - 1] + 1;
      if (cur[j] > best.length) {
        best.length = cur[j];
        best.offset_a = static_cast<uint32_t>(i) - cur[j];
        best.offset_b = static_cast<uint32_t>(j) - cur[j];
      } else if (cur[j] == best.length && best.length > 0) {
        const uint32_t oa = static_cast<uint32_t>(i) - cur[j];
        const uint32_t ob = static_cast<uint32_t>(j) - cur[j];
        if (oa < best.offset_a || (oa == best.offset_a && ob < best.offset_b)) {
          best.offset_a = oa;
          best.offset_b = ob;
        }
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

uint32_t DerivGraph::add_node(std::string surface) {
  Node node;
  node.scalars = decode_utf8(surface);
  node.surface = std::move(surface);
  nodes.push_back(std::move(node));
  return static_cast<uint32_t>(nodes.size() - 1);
}

void DerivGraph::add_edge(uint32_t u, uint32_t v, EdgeKind kind) {
  Edge e;
  e.u = u;
  e.v = v;
  e.kind = kind;
  edges.push_back(e);
}

namespace {

std::vector<std::string> tab_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void check_surface(const std::string& word, size_t line_no, const char* what) {
  if (word.empty())
    throw InputError("line " + std::to_string(line_no) + ": empty " + what);
  if (word.find(' ') != std::string::npos || word.find('\t') != std::string::npos)
    throw InputError("line " + std::to_string(line_no) + ": " + what +
                     " contains whitespace: " + word);
}

}  // namespace

DerivGraph build_graph(std::istream& derivations, std::istream& inflections) {
  DerivGraph graph;

  struct Row {
    std::string id, lemma, parent;
    size_t line_no;
  };
  std::vector<Row> rows;
  std::string line;
  size_t line_no = 0;
  size_t columns = 0;
  while (std::getline(derivations, line)) {
    ++line_no;
    if (line.empty()) continue;
    decode_utf8(line);
    std::vector<std::string> fields = tab_fields(line);
    if (columns == 0) {
      if (fields.size() != 3 && fields.size() != 5)
        throw InputError("line " + std::to_string(line_no) +
                         ": derivation file must have 3 or 5 columns");
      columns = fields.size();
    }
    if (fields.size() != columns)
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns) + " columns");
    Row row;
    row.id = fields[0];
    row.lemma = fields[1];
    row.parent = fields.back();
    row.line_no = line_no;
    if (row.id.empty())
      throw InputError("line " + std::to_string(line_no) + ": empty node id");
    check_surface(row.lemma, line_no, "lemma");
    rows.push_back(std::move(row));
  }

  std::unordered_map<std::string, uint32_t> by_id;
  std::unordered_map<std::string, uint32_t> lemma_node;  // first node per surface
  for (const Row& row : rows) {
    if (by_id.count(row.id))
      throw InputError("line " + std::to_string(row.line_no) + ": duplicate node id " + row.id);
    const uint32_t idx = graph.add_node(row.lemma);
    by_id.emplace(row.id, idx);
    lemma_node.try_emplace(row.lemma, idx);
  }

  // parent[i] over derivation nodes, for cycle detection.
  std::vector<int64_t> parent(rows.size(), -1);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].parent.empty()) continue;
    auto it = by_id.find(rows[i].parent);
    if (it == by_id.end())
      throw InputError("line " + std::to_string(rows[i].line_no) + ": unknown parent id " +
                       rows[i].parent);
    parent[i] = it->second;
    graph.add_edge(static_cast<uint32_t>(i), it->second, EdgeKind::Derivation);
  }
  std::vector<uint8_t> state(rows.size(), 0);  // 0 new, 1 on path, 2 done
  for (size_t i = 0; i < rows.size(); ++i) {
    size_t n = i;
    std::vector<size_t> path;
    while (state[n] == 0) {
      state[n] = 1;
      path.push_back(n);
      if (parent[n] < 0) break;
      n = static_cast<size_t>(parent[n]);
      if (state[n] == 1)
        throw InputError("derivation parent cycle involving id " + rows[n].id);
    }
    for (size_t p : path) state[p] = 2;
  }

  std::string infl_line;
  size_t infl_no = 0;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(inflections, infl_line)) {
    ++infl_no;
    if (infl_line.empty()) continue;
    decode_utf8(infl_line);
    std::vector<std::string> fields = tab_fields(infl_line);
    if (fields.size() != 2)
      throw InputError("line " + std::to_string(infl_no) +
                       ": inflection file must have 2 columns (lemma<TAB>form)");
    check_surface(fields[0], infl_no, "lemma");
    check_surface(fields[1], infl_no, "form");
    if (!seen.emplace(fields[0], fields[1]).second) continue;

    uint32_t lemma_idx;
    auto it = lemma_node.find(fields[0]);
    if (it != lemma_node.end()) {
      lemma_idx = it->second;
    } else {
      lemma_idx = graph.add_node(fields[0]);  // isolated two-node component
      lemma_node.emplace(fields[0], lemma_idx);
    }
    const uint32_t form_idx = graph.add_node(fields[1]);
    graph.add_edge(form_idx, lemma_idx, EdgeKind::Inflection);
  }
  return graph;
}

void stem_edges(DerivGraph& graph, int threads) {
  parallel_chunks(graph.edges.size(), threads, [&](size_t, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      DerivGraph::Edge& e = graph.edges[i];
      e.align = lcs_align(graph.nodes[e.u].scalars, graph.nodes[e.v].scalars);
      e.aligned = true;
    }
  });

  auto add_internal = [&](DerivGraph::Node& node, uint32_t pos) {
    if (pos > 0 && pos < node.scalars.size()) node.boundaries.insert(pos);
  };
  for (const DerivGraph::Edge& e : graph.edges) {
    if (e.align.length == 0) continue;
    add_internal(graph.nodes[e.u], e.align.offset_a);
    add_internal(graph.nodes[e.u], e.align.offset_a + e.align.length);
    add_internal(graph.nodes[e.v], e.align.offset_b);
    add_internal(graph.nodes[e.v], e.align.offset_b + e.align.length);
  }
}

void propagate_boundaries(DerivGraph& graph) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const DerivGraph::Edge& e : graph.edges) {
      if (!e.aligned || e.align.length == 0) continue;
      DerivGraph::Node& nu = graph.nodes[e.u];
      DerivGraph::Node& nv = graph.nodes[e.v];
      const uint32_t au = e.align.offset_a, av = e.align.offset_b, len = e.align.length;
      for (uint32_t p : nu.boundaries) {
        if (p > au && p < au + len) changed |= nv.boundaries.insert(av + (p - au)).second;
      }
      for (uint32_t p : nv.boundaries) {
        if (p > av && p < av + len) changed |= nu.boundaries.insert(au + (p - av)).second;
      }
    }
  }
}

SegmentationLexicon export_lexicon(const DerivGraph& graph) {
  SegmentationLexicon lexicon;
  for (const DerivGraph::Node& node : graph.nodes)
    lexicon.add(node.surface,
                std::vector<uint32_t>(node.boundaries.begin(), node.boundaries.end()));
  return lexicon;
}

SegmentationLexicon derivnet_build(std::istream& derivations, std::istream& inflections,
                                   int threads) {
  DerivGraph graph = build_graph(derivations, inflections);
  stem_edges(graph, threads);
  propagate_boundaries(graph);
  return export_lexicon(graph);
}

}  // namespace subseg
