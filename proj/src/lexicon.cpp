// SPDX-License-Identifier: Apache-2.0
#include "lexicon.hpp"

#include <algorithm>

#include "text.hpp"

namespace subseg {

void SegmentationLexicon::add(const std::string& word, std::vector<uint32_t> boundaries) {
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());

  auto [it, inserted] = entries_.try_emplace(word, std::move(boundaries));
  if (!inserted) {
    std::vector<uint32_t>& existing = it->second;
    std::vector<uint32_t> merged;
    merged.reserve(existing.size() + boundaries.size());
    std::set_union(existing.begin(), existing.end(), boundaries.begin(), boundaries.end(),
                   std::back_inserter(merged));
    existing = std::move(merged);
  }

  std::string key = fold_utf8(word);
  auto [fit, fresh] = folded_.try_emplace(std::move(key), word);
  if (!fresh && word < fit->second) fit->second = word;  // deterministic representative
}

const std::vector<uint32_t>* SegmentationLexicon::find(std::string_view token) const {
  auto it = entries_.find(std::string(token));
  if (it != entries_.end()) return &it->second;
  auto fit = folded_.find(fold_utf8(token));
  if (fit == folded_.end()) return nullptr;
  it = entries_.find(fit->second);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> split_morphs(std::string_view word,
                                      const std::vector<uint32_t>& boundaries) {
  const std::u32string scalars = decode_utf8(word);
  std::vector<std::string> morphs;
  morphs.reserve(boundaries.size() + 1);
  size_t start = 0;
  for (uint32_t b : boundaries) {
    if (b == 0 || b >= scalars.size()) continue;  // non-internal positions are meaningless
    morphs.push_back(encode_utf8(std::u32string_view(scalars).substr(start, b - start)));
    start = b;
  }
  morphs.push_back(encode_utf8(std::u32string_view(scalars).substr(start)));
  return morphs;
}

std::vector<uint32_t> boundaries_from_morphs(const std::vector<std::string>& morphs) {
  std::vector<uint32_t> boundaries;
  uint32_t pos = 0;
  for (size_t i = 0; i + 1 < morphs.size(); ++i) {
    pos += static_cast<uint32_t>(scalar_length(morphs[i]));
    boundaries.push_back(pos);
  }
  return boundaries;
}

SegmentationLexicon lexicon_load(std::istream& in, bool strip_markers) {
  SegmentationLexicon lexicon;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    decode_utf8(line);  // validate early so diagnostics carry the line number
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || line.find('\t', tab + 1) != std::string::npos)
      throw InputError("line " + std::to_string(line_no) +
                       ": expected \"word<TAB>morph morph ...\"");
    const std::string word = line.substr(0, tab);
    if (word.find(' ') != std::string::npos)
      throw InputError("line " + std::to_string(line_no) + ": word contains a space");

    std::vector<std::string> morphs;
    for (std::string_view m : split_tokens(std::string_view(line).substr(tab + 1))) {
      std::string morph(m);
      if (strip_markers) {
        if (ends_with(morph, "@@"))
          morph.resize(morph.size() - 2);
        else if (ends_with(morph, "_"))
          morph.pop_back();
      }
      if (!morph.empty()) morphs.push_back(std::move(morph));
    }
    if (morphs.empty())
      throw InputError("line " + std::to_string(line_no) + ": no morphs given");

    std::string joined;
    for (const std::string& m : morphs) joined += m;
    if (joined != word)
      throw InputError("line " + std::to_string(line_no) +
                       ": morphs do not concatenate to \"" + word + "\"");
    lexicon.add(word, boundaries_from_morphs(morphs));
  }
  return lexicon;
}

void lexicon_save(const SegmentationLexicon& lexicon, std::ostream& out) {
  std::vector<const std::string*> words;
  words.reserve(lexicon.size());
  for (const auto& [word, _] : lexicon.entries()) words.push_back(&word);
  std::sort(words.begin(), words.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  for (const std::string* word : words) {
    out << *word << '\t';
    const std::vector<std::string> morphs =
        split_morphs(*word, lexicon.entries().at(*word));
    for (size_t i = 0; i < morphs.size(); ++i) {
      if (i) out << ' ';
      out << morphs[i];
    }
    out << '\n';
  }
}

Sentence apply_lexicon(const Sentence& tokens, const SegmentationLexicon& lexicon,
                       Marker convention) {
  Sentence out;
  for (const std::string& token : tokens) {
    require_markable(token);
    const std::vector<uint32_t>* boundaries = lexicon.find(token);
    std::vector<std::string> morphs =
        boundaries ? split_morphs(token, *boundaries) : std::vector<std::string>{token};
    if (convention == Marker::Continuation) {
      for (size_t i = 0; i + 1 < morphs.size(); ++i) out.push_back(morphs[i] + "@@");
      out.push_back(std::move(morphs.back()));
    } else {
      for (size_t i = 0; i + 1 < morphs.size(); ++i) out.push_back(std::move(morphs[i]));
      out.push_back(morphs.back() + "_");
    }
  }
  return out;
}

}  // namespace subseg
