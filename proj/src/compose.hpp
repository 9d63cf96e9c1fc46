// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <variant>

#include "bpe.hpp"
#include "lexicon.hpp"
#include "ste.hpp"

namespace subseg {

// Marker algebra of composed output: a bare piece continues the current
// morph, a piece ending in "@@" closes a morph while the word continues, and
// a piece ending in '_' closes the word. A piece never carries both marks.
struct ComposedModel {
  SegmentationLexicon pre;
  std::variant<MergeTable, SubwordVocab> post;
  bool post_is_bpe() const { return std::holds_alternative<MergeTable>(post); }
};

// Morph units for downstream training: every word becomes its morph sequence
// with "@@" on non-final morphs. Identical to lexicon application under the
// continuation convention.
Sentence pre_split(const Sentence& tokens, const SegmentationLexicon& lexicon);

// Third-party segmenter integration point; the lexicon TSV format with the
// concatenation invariant enforced per line.
SegmentationLexicon import_external_segmentation(std::istream& in);

class ComposedEncoder {
 public:
  explicit ComposedEncoder(ComposedModel model);

  const ComposedModel& model() const { return model_; }
  Sentence encode_sentence(const Sentence& tokens);
  std::vector<std::string> encode_word(const std::string& word);
  size_t piece_count(const std::string& word);

 private:
  std::vector<std::string> post_encode(const std::string& morph, bool word_final);

  ComposedModel model_;
  std::unique_ptr<BpeEncoder> bpe_;  // set when the post-splitter is a merge table
};

Sentence compose_encode(const Sentence& tokens, const ComposedModel& model);

// Inverse of compose_encode in one pass (end-marker undo; unescapes when the
// post-splitter is the wordpiece encoder).
Sentence compose_decode(const Sentence& pieces, const ComposedModel& model);
// Post-splitter layer only: reconstructs the pre-split morph unit stream,
// continuation marks intact. compose_decode == undo_splits(continuation) of
// this stream.
Sentence compose_decode_units(const Sentence& pieces, const ComposedModel& model);

// Manifest format: "#subseg-composed v1", then "lexicon<TAB>path",
// "post<TAB>path", "markers<TAB>continuation+end_marker". Relative paths are
// resolved against the manifest's directory on load.
void manifest_save(const std::string& lexicon_path, const std::string& post_path,
                   std::ostream& out);
ComposedModel manifest_load(const std::string& manifest_path);

enum class ModelKind { Bpe, Ste, Lexicon, Composed };

struct LoadedModel {
  ModelKind kind;
  std::variant<MergeTable, SubwordVocab, SegmentationLexicon, ComposedModel> model;
};

// Detects the model type from the file header ("#subseg-..."); anything else
// must parse as a segmentation lexicon.
LoadedModel load_any_model(const std::string& path);

}  // namespace subseg
