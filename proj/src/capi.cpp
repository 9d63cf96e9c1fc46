// SPDX-License-Identifier: Apache-2.0
#include "subseg/subseg.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "compose.hpp"
#include "derivnet.hpp"
#include "eval.hpp"
#include "text.hpp"

using namespace subseg;

struct subseg_counts {
  TokenCounts counts;
};

struct subseg_encoder {
  ModelKind kind;
  std::optional<BpeEncoder> bpe;
  std::optional<SubwordVocab> ste;
  std::optional<SegmentationLexicon> lexicon;
  std::optional<ComposedEncoder> composed;
};

namespace {

thread_local std::string g_last_error;

subseg_status fail(subseg_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
subseg_status guarded(Fn&& fn) {
  try {
    fn();
    return SUBSEG_OK;
  } catch (const ConfigError& e) {
    return fail(SUBSEG_ERR_CONFIG, e.what());
  } catch (const InputError& e) {
    return fail(SUBSEG_ERR_INPUT, e.what());
  } catch (const IoError& e) {
    return fail(SUBSEG_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SUBSEG_ERR_INTERNAL, e.what());
  }
}

char* copy_out(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::optional<uint64_t> budget_of(int64_t byte_budget) {
  if (byte_budget < 0) return std::nullopt;
  return static_cast<uint64_t>(byte_budget);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

Sentence line_tokens(const char* line) {
  const std::string_view text(line);
  decode_utf8(text);
  Sentence tokens;
  for (std::string_view tok : split_tokens(text)) tokens.emplace_back(tok);
  return tokens;
}

std::unordered_set<std::string> load_subword_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string first;
  std::getline(in, first);
  std::unordered_set<std::string> out;
  if (first == "#subseg-ste v1") {
    in.clear();
    in.seekg(0);
    for (const std::string& sub : ste_load(in).subtokens) out.insert(sub);
    return out;
  }
  // Plain list or segmented text: every whitespace-separated field is a type.
  in.clear();
  in.seekg(0);
  std::string line;
  uint64_t offset = 0;
  while (std::getline(in, line)) {
    decode_utf8(line, offset);
    offset += line.size() + 1;
    for (std::string_view tok : split_tokens(line)) out.emplace(tok);
  }
  return out;
}

}  // namespace

extern "C" {

const char* subseg_last_error(void) { return g_last_error.c_str(); }

void subseg_string_free(char* s) { delete[] s; }

subseg_status subseg_counts_read(const char* path, int64_t byte_budget, int presplit,
                                 int threads, subseg_counts** out) {
  if (!path || !out) return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<subseg_counts>();
    handle->counts = count_file(path, budget_of(byte_budget), presplit != 0, threads);
    *out = handle.release();
  });
}

subseg_status subseg_counts_union(const subseg_counts* a, const subseg_counts* b,
                                  subseg_counts** out) {
  if (!a || !b || !out) return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<subseg_counts>();
    handle->counts = counts_union(a->counts, b->counts);
    *out = handle.release();
  });
}

void subseg_counts_free(subseg_counts* counts) { delete counts; }

subseg_status subseg_stats_tsv(const subseg_counts* src, const subseg_counts* tgt,
                               char** out_tsv) {
  if (!src || !tgt || !out_tsv) return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] { *out_tsv = copy_out(stats_tsv(corpus_stats(src->counts, tgt->counts))); });
}

subseg_status subseg_undo_line(const char* line, const char* convention, int unescape,
                               char** out_line) {
  if (!line || !convention || !out_line) return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    decode_utf8(line);
    *out_line = copy_out(undo_splits_line(line, parse_marker(convention), unescape != 0));
  });
}

subseg_status subseg_bpe_train_file(const subseg_counts* counts, int64_t num_merges,
                                    const char* mode, int presplit, int threads,
                                    const char* out_path) {
  if (!counts || !out_path) return fail(SUBSEG_ERR_CONFIG, "null argument");
  if (num_merges < 0) return fail(SUBSEG_ERR_CONFIG, "num_merges must be non-negative");
  return guarded([&] {
    MergeTable table;
    if (presplit) {
      table = bpe_train_presplit(counts->counts, static_cast<size_t>(num_merges), threads);
    } else {
      if (!mode) throw ConfigError("underscore mode is required");
      table = bpe_train(counts->counts, static_cast<size_t>(num_merges),
                        parse_underscore_mode(mode), threads);
    }
    std::ostringstream buf;
    bpe_save(table, buf);
    write_file(out_path, buf.str());
  });
}

subseg_status subseg_ste_train_file(const subseg_counts* counts, int64_t target_size,
                                    double tolerance_pct, int iterations,
                                    int64_t max_subtoken_len, int presplit, int threads,
                                    const char* out_path) {
  if (!counts || !out_path) return fail(SUBSEG_ERR_CONFIG, "null argument");
  if (target_size <= 0) return fail(SUBSEG_ERR_CONFIG, "target_size must be positive");
  return guarded([&] {
    SteBuildConfig cfg;
    cfg.target_size = static_cast<size_t>(target_size);
    if (tolerance_pct > 0) cfg.size_tolerance_pct = tolerance_pct;
    if (iterations > 0) cfg.num_refinement_iterations = iterations;
    if (max_subtoken_len > 0) cfg.max_subtoken_length = static_cast<size_t>(max_subtoken_len);
    const SubwordVocab vocab = presplit
                                   ? ste_build_vocab_presplit(counts->counts, cfg, threads)
                                   : ste_build_vocab(counts->counts, cfg, threads);
    std::ostringstream buf;
    ste_save(vocab, buf);
    write_file(out_path, buf.str());
  });
}

subseg_status subseg_derivnet_build_file(const char* derivations_path,
                                         const char* inflections_path, int threads,
                                         const char* out_path) {
  if (!derivations_path || !inflections_path || !out_path)
    return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    std::ifstream deriv(derivations_path, std::ios::binary);
    if (!deriv) throw IoError(std::string("cannot open ") + derivations_path);
    std::ifstream infl(inflections_path, std::ios::binary);
    if (!infl) throw IoError(std::string("cannot open ") + inflections_path);
    const SegmentationLexicon lexicon = derivnet_build(deriv, infl, threads);
    std::ostringstream buf;
    lexicon_save(lexicon, buf);
    write_file(out_path, buf.str());
  });
}

subseg_status subseg_import_segmentation_file(const char* input_path, const char* out_path) {
  if (!input_path || !out_path) return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    std::ifstream in(input_path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open ") + input_path);
    const SegmentationLexicon lexicon = import_external_segmentation(in);
    std::ostringstream buf;
    lexicon_save(lexicon, buf);
    write_file(out_path, buf.str());
  });
}

subseg_status subseg_compose_write_manifest(const char* lexicon_path,
                                            const char* post_model_path,
                                            const char* out_path) {
  if (!lexicon_path || !post_model_path || !out_path)
    return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    namespace fs = std::filesystem;
    // Manifest paths resolve against the manifest's own directory, so
    // relative inputs are rewritten to stay valid from there.
    const fs::path manifest_dir = fs::absolute(fs::path(out_path)).parent_path();
    auto stored = [&](const char* given) -> std::string {
      const fs::path p(given);
      if (p.is_absolute()) return given;
      std::error_code ec;
      const fs::path rel = fs::relative(fs::absolute(p), manifest_dir, ec);
      return (ec || rel.empty()) ? fs::absolute(p).string() : rel.string();
    };
    std::ostringstream buf;
    manifest_save(stored(lexicon_path), stored(post_model_path), buf);
    write_file(out_path, buf.str());
    manifest_load(out_path);  // fail fast if either part does not load
  });
}

subseg_status subseg_encoder_open(const char* model_path, subseg_encoder** out) {
  if (!model_path || !out) return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    LoadedModel loaded = load_any_model(model_path);
    auto enc = std::make_unique<subseg_encoder>();
    enc->kind = loaded.kind;
    switch (loaded.kind) {
      case ModelKind::Bpe:
        enc->bpe.emplace(std::get<MergeTable>(std::move(loaded.model)));
        break;
      case ModelKind::Ste:
        enc->ste.emplace(std::get<SubwordVocab>(std::move(loaded.model)));
        break;
      case ModelKind::Lexicon:
        enc->lexicon.emplace(std::get<SegmentationLexicon>(std::move(loaded.model)));
        break;
      case ModelKind::Composed:
        enc->composed.emplace(std::get<ComposedModel>(std::move(loaded.model)));
        break;
    }
    *out = enc.release();
  });
}

int subseg_encoder_kind(const subseg_encoder* enc) {
  if (!enc) return 0;
  switch (enc->kind) {
    case ModelKind::Bpe: return SUBSEG_MODEL_BPE;
    case ModelKind::Ste: return SUBSEG_MODEL_STE;
    case ModelKind::Lexicon: return SUBSEG_MODEL_LEXICON;
    case ModelKind::Composed: return SUBSEG_MODEL_COMPOSED;
  }
  return 0;
}

subseg_status subseg_encode_line(subseg_encoder* enc, const char* line,
                                 const char* convention, char** out_line) {
  if (!enc || !line || !out_line) return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    const Sentence tokens = line_tokens(line);
    Sentence pieces;
    switch (enc->kind) {
      case ModelKind::Bpe:
        pieces = enc->bpe->encode_sentence(
            tokens, convention ? parse_marker(convention) : Marker::Continuation);
        break;
      case ModelKind::Ste:
        if (convention)
          throw ConfigError("STE output defines its own marking; drop the convention");
        pieces = ste_encode_sentence(tokens, *enc->ste);
        break;
      case ModelKind::Lexicon:
        pieces = apply_lexicon(tokens, *enc->lexicon,
                               convention ? parse_marker(convention) : Marker::Continuation);
        break;
      case ModelKind::Composed:
        if (convention)
          throw ConfigError("composed output defines its own marking; drop the convention");
        pieces = enc->composed->encode_sentence(tokens);
        break;
    }
    *out_line = copy_out(join_tokens(pieces));
  });
}

void subseg_encoder_free(subseg_encoder* enc) { delete enc; }

subseg_status subseg_eval_tsv(const char* gold_path, const char* pred_path, char** out_tsv) {
  if (!gold_path || !pred_path || !out_tsv) return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    std::ifstream gold_in(gold_path, std::ios::binary);
    if (!gold_in) throw IoError(std::string("cannot open ") + gold_path);
    std::ifstream pred_in(pred_path, std::ios::binary);
    if (!pred_in) throw IoError(std::string("cannot open ") + pred_path);
    const SegmentationLexicon gold = lexicon_load(gold_in);
    const SegmentationLexicon pred = lexicon_load(pred_in, /*strip_markers=*/true);
    *out_tsv = copy_out(metrics_tsv(eval_segmentation(gold, pred)));
  });
}

subseg_status subseg_overlap_shared_tsv(const char* vocab_path, const char* src_used_path,
                                        const char* tgt_used_path, char** out_tsv) {
  if (!vocab_path || !src_used_path || !tgt_used_path || !out_tsv)
    return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    const double pct = vocab_overlap_shared(load_subword_set(vocab_path),
                                            load_subword_set(src_used_path),
                                            load_subword_set(tgt_used_path));
    *out_tsv = copy_out("overlap_pct\t" + format_fixed(pct, 2) + "\n");
  });
}

subseg_status subseg_overlap_jaccard_tsv(const char* vocab_a_path, const char* vocab_b_path,
                                         char** out_tsv) {
  if (!vocab_a_path || !vocab_b_path || !out_tsv)
    return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    const double pct = vocab_overlap_jaccard(load_subword_set(vocab_a_path),
                                             load_subword_set(vocab_b_path));
    *out_tsv = copy_out("overlap_pct\t" + format_fixed(pct, 2) + "\n");
  });
}

subseg_status subseg_histogram_tsv(const char* model_path, const char* corpus_path,
                                   int threads, char** out_tsv) {
  if (!model_path || !corpus_path || !out_tsv)
    return fail(SUBSEG_ERR_CONFIG, "null argument");
  return guarded([&] {
    subseg_encoder* enc = nullptr;
    const subseg_status st = subseg_encoder_open(model_path, &enc);
    if (st != SUBSEG_OK) throw InputError(g_last_error);
    std::unique_ptr<subseg_encoder> owner(enc);

    const TokenCounts counts = count_file(corpus_path, std::nullopt, false, threads);
    PieceCounter pieces = [&](const std::string& word) -> size_t {
      switch (enc->kind) {
        case ModelKind::Bpe: {
          const bool end = enc->bpe->table().mode != UnderscoreMode::None;
          return enc->bpe->encode_word(word, end).size();
        }
        case ModelKind::Ste:
          return ste_encode_token(word, *enc->ste).size();
        case ModelKind::Lexicon: {
          const std::vector<uint32_t>* b = enc->lexicon->find(word);
          return b ? b->size() + 1 : 1;
        }
        case ModelKind::Composed:
          return enc->composed->piece_count(word);
      }
      return 1;
    };
    *out_tsv = copy_out(histogram_tsv(split_histogram(counts, pieces)));
  });
}

}  // extern "C"
