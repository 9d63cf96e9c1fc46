// SPDX-License-Identifier: Apache-2.0
#include "compose.hpp"

#include <filesystem>
#include <fstream>

#include "text.hpp"

namespace subseg {

Sentence pre_split(const Sentence& tokens, const SegmentationLexicon& lexicon) {
  return apply_lexicon(tokens, lexicon, Marker::Continuation);
}

SegmentationLexicon import_external_segmentation(std::istream& in) {
  return lexicon_load(in, /*strip_markers=*/false);
}

ComposedEncoder::ComposedEncoder(ComposedModel model) : model_(std::move(model)) {
  if (model_.post_is_bpe())
    bpe_ = std::make_unique<BpeEncoder>(std::get<MergeTable>(model_.post));
}

std::vector<std::string> ComposedEncoder::post_encode(const std::string& morph,
                                                      bool word_final) {
  if (bpe_) return bpe_->encode_word(morph, word_final);
  const SubwordVocab& vocab = std::get<SubwordVocab>(model_.post);
  return word_final ? ste_encode_token(morph, vocab)
                    : ste_encode_token_unmarked(morph, vocab);
}

std::vector<std::string> ComposedEncoder::encode_word(const std::string& word) {
  require_markable(word);
  const std::vector<uint32_t>* boundaries = model_.pre.find(word);
  const std::vector<std::string> morphs =
      boundaries ? split_morphs(word, *boundaries) : std::vector<std::string>{word};

  std::vector<std::string> out;
  for (size_t i = 0; i < morphs.size(); ++i) {
    const bool word_final = i + 1 == morphs.size();
    std::vector<std::string> pieces = post_encode(morphs[i], word_final);
    if (!word_final) pieces.back() += "@@";  // the morph's continuation mark survives
    for (std::string& p : pieces) out.push_back(std::move(p));
  }
  return out;
}

size_t ComposedEncoder::piece_count(const std::string& word) {
  return encode_word(word).size();
}

Sentence ComposedEncoder::encode_sentence(const Sentence& tokens) {
  Sentence out;
  for (const std::string& token : tokens)
    for (std::string& piece : encode_word(token)) out.push_back(std::move(piece));
  return out;
}

Sentence compose_encode(const Sentence& tokens, const ComposedModel& model) {
  ComposedEncoder enc(model);
  return enc.encode_sentence(tokens);
}

Sentence compose_decode(const Sentence& pieces, const ComposedModel& model) {
  return undo_splits(pieces, Marker::EndMarker, /*unescape=*/!model.post_is_bpe());
}

Sentence compose_decode_units(const Sentence& pieces, const ComposedModel& model) {
  const bool unescape = !model.post_is_bpe();
  Sentence units;
  std::string unit;
  auto close = [&](bool continuation) {
    if (unit.empty()) return;
    std::string text = unescape ? ste_unescape(unit) : unit;
    if (continuation) text += "@@";
    units.push_back(std::move(text));
    unit.clear();
  };
  for (const std::string& piece : pieces) {
    if (ends_with(piece, "_")) {
      unit.append(piece, 0, piece.size() - 1);
      close(false);
    } else if (ends_with(piece, "@@")) {
      unit.append(piece, 0, piece.size() - 2);
      close(true);
    } else {
      unit += piece;
    }
  }
  close(false);  // sentence boundary ends the last word
  return units;
}

void manifest_save(const std::string& lexicon_path, const std::string& post_path,
                   std::ostream& out) {
  out << "#subseg-composed v1\n";
  out << "lexicon\t" << lexicon_path << "\n";
  out << "post\t" << post_path << "\n";
  out << "markers\tcontinuation+end_marker\n";
}

namespace {

std::string resolve_path(const std::string& base_file, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_file).parent_path() / p).string();
}

std::string manifest_value(const std::string& line, const std::string& key, size_t line_no) {
  const std::string prefix = key + "\t";
  if (line.rfind(prefix, 0) != 0)
    throw InputError("manifest line " + std::to_string(line_no) + ": expected \"" + key +
                     "<TAB>...\"");
  std::string value = line.substr(prefix.size());
  if (value.empty())
    throw InputError("manifest line " + std::to_string(line_no) + ": empty " + key);
  return value;
}

}  // namespace

ComposedModel manifest_load(const std::string& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + manifest_path);
  std::string line;
  if (!std::getline(in, line) || line != "#subseg-composed v1")
    throw InputError("not a subseg composed-model manifest (bad header)");

  std::string lexicon_path, post_path;
  if (!std::getline(in, line)) throw InputError("manifest truncated");
  lexicon_path = manifest_value(line, "lexicon", 2);
  if (!std::getline(in, line)) throw InputError("manifest truncated");
  post_path = manifest_value(line, "post", 3);
  if (!std::getline(in, line) || line != "markers\tcontinuation+end_marker")
    throw InputError("manifest line 4: unsupported marker plan");

  lexicon_path = resolve_path(manifest_path, lexicon_path);
  post_path = resolve_path(manifest_path, post_path);

  std::ifstream lex_in(lexicon_path, std::ios::binary);
  if (!lex_in) throw IoError("cannot open " + lexicon_path);
  ComposedModel model;
  model.pre = lexicon_load(lex_in);

  LoadedModel post = load_any_model(post_path);
  if (post.kind == ModelKind::Bpe)
    model.post = std::get<MergeTable>(std::move(post.model));
  else if (post.kind == ModelKind::Ste)
    model.post = std::get<SubwordVocab>(std::move(post.model));
  else
    throw InputError("composed post-splitter must be a BPE or STE model: " + post_path);
  return model;
}

LoadedModel load_any_model(const std::string& path) {
  if (std::filesystem::is_directory(path)) throw IoError(path + " is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string first;
  std::getline(in, first);
  in.clear();
  in.seekg(0);

  if (first.rfind("#subseg-bpe ", 0) == 0) return {ModelKind::Bpe, bpe_load(in)};
  if (first == "#subseg-ste v1") return {ModelKind::Ste, ste_load(in)};
  if (first == "#subseg-composed v1") {
    in.close();
    return {ModelKind::Composed, manifest_load(path)};
  }
  return {ModelKind::Lexicon, lexicon_load(in)};
}

}  // namespace subseg
