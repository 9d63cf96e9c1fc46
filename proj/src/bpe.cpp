// SPDX-License-Identifier: Apache-2.0
#include "bpe.hpp"

#include <algorithm>
#include <unordered_set>

#include "parallel.hpp"
#include "text.hpp"

namespace subseg {

UnderscoreMode parse_underscore_mode(std::string_view name) {
  if (name == "none") return UnderscoreMode::None;
  if (name == "every") return UnderscoreMode::Every;
  if (name == "non_final" || name == "non-final") return UnderscoreMode::NonFinal;
  throw ConfigError("unknown underscore mode: " + std::string(name));
}

std::string_view underscore_mode_name(UnderscoreMode mode) {
  switch (mode) {
    case UnderscoreMode::None: return "none";
    case UnderscoreMode::Every: return "every";
    case UnderscoreMode::NonFinal: return "non_final";
  }
  return "none";
}

namespace {

using SymbolPair = std::pair<std::string, std::string>;

struct PairHash {
  size_t operator()(const SymbolPair& p) const {
    const size_t h1 = std::hash<std::string>{}(p.first);
    const size_t h2 = std::hash<std::string>{}(p.second);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

struct PairStat {
  int64_t count = 0;
  std::unordered_set<uint32_t> entries;  // indices that may contain the pair
};

using PairStats = std::unordered_map<SymbolPair, PairStat, PairHash>;

std::vector<std::string> word_symbols(std::string_view word) {
  std::vector<std::string> symbols;
  for (char32_t c : decode_utf8(word)) {
    std::string s;
    append_utf8(s, c);
    symbols.push_back(std::move(s));
  }
  return symbols;
}

// Leftmost, non-overlapping replacement of (left, right) by their join.
bool rewrite_pair(std::vector<std::string>& symbols, const std::string& left,
                  const std::string& right) {
  size_t write = 0, read = 0;
  bool changed = false;
  while (read < symbols.size()) {
    if (read + 1 < symbols.size() && symbols[read] == left && symbols[read + 1] == right) {
      symbols[write] = left + right;
      read += 2;
      changed = true;
    } else {
      if (write != read) symbols[write] = std::move(symbols[read]);
      ++read;
    }
    ++write;
  }
  if (changed) symbols.resize(write);
  return changed;
}

void add_adjacencies(PairStats& stats, const std::vector<std::string>& symbols,
                     int64_t weight, uint32_t entry_idx) {
  for (size_t i = 0; i + 1 < symbols.size(); ++i) {
    PairStat& st = stats[{symbols[i], symbols[i + 1]}];
    st.count += weight;
    st.entries.insert(entry_idx);
  }
}

void remove_adjacencies(PairStats& stats, const std::vector<std::string>& symbols,
                        int64_t weight) {
  for (size_t i = 0; i + 1 < symbols.size(); ++i) {
    auto it = stats.find({symbols[i], symbols[i + 1]});
    if (it != stats.end()) it->second.count -= weight;
  }
}

}  // namespace

std::vector<SymbolPair> bpe_learn_merges(std::vector<TrainEntry> entries,
                                         size_t num_merges, int threads) {
  std::vector<SymbolPair> merges;
  if (num_merges == 0 || entries.empty()) return merges;

  // Initial adjacency counts, sharded by entry and merged in chunk order.
  std::vector<PairStats> partial(static_cast<size_t>(resolve_threads(threads)));
  parallel_chunks(entries.size(), threads, [&](size_t chunk, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      if (entries[i].weight == 0) continue;
      add_adjacencies(partial[chunk], entries[i].symbols,
                      static_cast<int64_t>(entries[i].weight), static_cast<uint32_t>(i));
    }
  });
  PairStats stats;
  for (auto& m : partial) {
    if (stats.empty()) {
      stats = std::move(m);
      continue;
    }
    for (auto& [pair, st] : m) {
      PairStat& dst = stats[pair];
      dst.count += st.count;
      dst.entries.merge(st.entries);
    }
  }

  while (merges.size() < num_merges) {
    const SymbolPair* best = nullptr;
    int64_t best_count = 1;  // a merge must occur at least twice
    for (const auto& [pair, st] : stats) {
      if (st.count > best_count || (st.count == best_count && best && pair < *best)) {
        best = &pair;
        best_count = st.count;
      }
    }
    if (!best) break;
    const SymbolPair merge = *best;
    merges.push_back(merge);

    std::vector<uint32_t> touched(stats[merge].entries.begin(), stats[merge].entries.end());
    for (uint32_t idx : touched) {
      TrainEntry& entry = entries[idx];
      std::vector<std::string> old_symbols = entry.symbols;
      if (!rewrite_pair(entry.symbols, merge.first, merge.second)) continue;  // stale index
      const int64_t w = static_cast<int64_t>(entry.weight);
      remove_adjacencies(stats, old_symbols, w);
      add_adjacencies(stats, entry.symbols, w, idx);
    }
    stats.erase(merge);
  }
  return merges;
}

std::vector<TrainEntry> bpe_entries(const TokenCounts& counts, UnderscoreMode mode) {
  std::vector<std::pair<std::string, TypeCount>> types(counts.entries.begin(),
                                                       counts.entries.end());
  std::sort(types.begin(), types.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<TrainEntry> entries;
  entries.reserve(types.size() * (mode == UnderscoreMode::NonFinal ? 2 : 1));
  for (const auto& [word, count] : types) {
    if (word.empty() || count.total() == 0) continue;
    if (mode != UnderscoreMode::None && word.find('_') != std::string::npos)
      throw InputError("type contains '_', which underscore modes reserve: " + word);
    std::vector<std::string> symbols = word_symbols(word);
    switch (mode) {
      case UnderscoreMode::None:
        entries.push_back({symbols, count.total()});
        break;
      case UnderscoreMode::Every: {
        symbols.push_back("_");
        entries.push_back({std::move(symbols), count.total()});
        break;
      }
      case UnderscoreMode::NonFinal: {
        if (count.non_final > 0) {
          std::vector<std::string> marked = symbols;
          marked.push_back("_");
          entries.push_back({std::move(marked), count.non_final});
        }
        if (count.final_count > 0) entries.push_back({std::move(symbols), count.final_count});
        break;
      }
    }
  }
  return entries;
}

std::vector<TrainEntry> bpe_entries_presplit(const TokenCounts& unit_counts) {
  std::vector<std::pair<std::string, TypeCount>> types(unit_counts.entries.begin(),
                                                       unit_counts.entries.end());
  std::sort(types.begin(), types.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<TrainEntry> entries;
  for (const auto& [unit, count] : types) {
    if (unit.empty() || count.total() == 0) continue;
    std::vector<std::string> symbols = word_symbols(unit);
    if (count.non_final > 0) entries.push_back({symbols, count.non_final});
    if (count.final_count > 0) {
      symbols.push_back("_");
      entries.push_back({std::move(symbols), count.final_count});
    }
  }
  return entries;
}

MergeTable bpe_train(const TokenCounts& counts, size_t num_merges, UnderscoreMode mode,
                     int threads) {
  MergeTable table;
  table.mode = mode;
  table.merges = bpe_learn_merges(bpe_entries(counts, mode), num_merges, threads);
  return table;
}

MergeTable bpe_train_presplit(const TokenCounts& unit_counts, size_t num_merges,
                              int threads) {
  MergeTable table;
  table.mode = UnderscoreMode::Every;
  table.merges = bpe_learn_merges(bpe_entries_presplit(unit_counts), num_merges, threads);
  return table;
}

std::vector<std::string> bpe_encode_word(std::string_view word, const MergeTable& table,
                                         bool end_symbol) {
  if (word.empty()) return {};
  std::vector<std::string> symbols = word_symbols(word);
  if (end_symbol) symbols.push_back("_");
  for (const auto& [left, right] : table.merges) rewrite_pair(symbols, left, right);
  return symbols;
}

const std::vector<std::string>& BpeEncoder::encode_word(const std::string& word,
                                                        bool end_symbol) {
  auto& cache = end_symbol ? cache_marked_ : cache_plain_;
  auto it = cache.find(word);
  if (it == cache.end())
    it = cache.emplace(word, bpe_encode_word(word, table_, end_symbol)).first;
  return it->second;
}

Sentence BpeEncoder::encode_sentence(const Sentence& tokens, Marker convention) {
  Sentence out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    require_markable(tokens[i]);
    const bool end_symbol =
        table_.mode == UnderscoreMode::Every ||
        (table_.mode == UnderscoreMode::NonFinal && i + 1 != tokens.size());
    const std::vector<std::string>& pieces = encode_word(tokens[i], end_symbol);
    if (convention == Marker::Continuation) {
      for (size_t j = 0; j + 1 < pieces.size(); ++j) out.push_back(pieces[j] + "@@");
      out.push_back(pieces.back());
    } else {
      for (size_t j = 0; j + 1 < pieces.size(); ++j) out.push_back(pieces[j]);
      std::string last = pieces.back();
      // Without underscore symbols nothing else would mark the word end.
      if (table_.mode == UnderscoreMode::None) last += "_";
      out.push_back(std::move(last));
    }
  }
  return out;
}

Sentence bpe_encode_sentence(const Sentence& tokens, const MergeTable& table,
                             Marker convention) {
  BpeEncoder enc(table);
  return enc.encode_sentence(tokens, convention);
}

void bpe_save(const MergeTable& table, std::ostream& out) {
  out << "#subseg-bpe v1 mode=" << underscore_mode_name(table.mode) << "\n";
  for (const auto& [left, right] : table.merges) out << left << ' ' << right << "\n";
}

MergeTable bpe_load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty BPE model file");
  const std::string prefix = "#subseg-bpe v1 mode=";
  if (line.rfind(prefix, 0) != 0)
    throw InputError("not a subseg BPE model (bad header): " + line);
  MergeTable table;
  table.mode = parse_underscore_mode(line.substr(prefix.size()));

  std::unordered_set<std::string> seen;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw InputError("line " + std::to_string(line_no) + ": empty merge line");
    const size_t space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 >= line.size() ||
        line.find(' ', space + 1) != std::string::npos)
      throw InputError("line " + std::to_string(line_no) + ": expected \"left right\"");
    std::string left = line.substr(0, space);
    std::string right = line.substr(space + 1);
    if (!seen.insert(line).second)
      throw InputError("line " + std::to_string(line_no) + ": duplicate merge pair");
    table.merges.emplace_back(std::move(left), std::move(right));
  }
  return table;
}

}  // namespace subseg
