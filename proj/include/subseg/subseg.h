/* SPDX-License-Identifier: Apache-2.0
 *
 * subseg — subword segmentation toolkit for MT preprocessing.
 *
 * C interface of libsubseg. All functions return a subseg_status; on any
 * failure subseg_last_error() carries a human-readable message for the
 * calling thread. Strings returned through char** out-parameters are
 * allocated by the library and must be released with subseg_string_free().
 * Handles are opaque and must be released with their matching *_free().
 */
#ifndef SUBSEG_H
#define SUBSEG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum subseg_status {
  SUBSEG_OK = 0,
  SUBSEG_ERR_INPUT = 1,  /* malformed data: bad UTF-8, marker collisions, bad model files */
  SUBSEG_ERR_CONFIG = 2, /* unusable parameters, e.g. target size below alphabet size */
  SUBSEG_ERR_IO = 3,
  SUBSEG_ERR_INTERNAL = 4
} subseg_status;

typedef enum subseg_model_kind {
  SUBSEG_MODEL_BPE = 1,
  SUBSEG_MODEL_STE = 2,
  SUBSEG_MODEL_LEXICON = 3,
  SUBSEG_MODEL_COMPOSED = 4
} subseg_model_kind;

/* Last error message of the calling thread; empty string when none. The
 * pointer stays valid until the next failing call on the same thread. */
const char* subseg_last_error(void);

void subseg_string_free(char* s);

/* ---- corpus ------------------------------------------------------------ */

/* Word-type counts with separate sentence-final / non-final tallies. */
typedef struct subseg_counts subseg_counts;

/* Reads a tokenized corpus (UTF-8, one sentence per line, space-separated
 * tokens). byte_budget < 0 means unlimited; otherwise reading stops after the
 * first line that crosses the budget, keeping that line whole. With
 * presplit != 0 the input is a continuation-marked morph corpus and counts
 * are per bare unit, split into word-final and continuing occurrences. */
subseg_status subseg_counts_read(const char* path, int64_t byte_budget, int presplit,
                                 int threads, subseg_counts** out);
subseg_status subseg_counts_union(const subseg_counts* a, const subseg_counts* b,
                                  subseg_counts** out);
void subseg_counts_free(subseg_counts* counts);

/* TSV with keys tokens_src, tokens_tgt, types_src, types_tgt, shared_pct. */
subseg_status subseg_stats_tsv(const subseg_counts* src, const subseg_counts* tgt,
                               char** out_tsv);

/* Reverses toolkit segmentation at the marker level. convention is
 * "continuation" or "end-marker"; unescape != 0 additionally reverses the
 * wordpiece escaping (for STE output). */
subseg_status subseg_undo_line(const char* line, const char* convention, int unescape,
                               char** out_line);

/* ---- training ----------------------------------------------------------- */

/* mode: "none", "every" or "non_final". presplit != 0 trains on pre-split
 * unit counts (mode is ignored and recorded as "every"). */
subseg_status subseg_bpe_train_file(const subseg_counts* counts, int64_t num_merges,
                                    const char* mode, int presplit, int threads,
                                    const char* out_path);

/* tolerance_pct, iterations and max_subtoken_len <= 0 pick the defaults
 * (1%, 4 rounds, 20 scalars). */
subseg_status subseg_ste_train_file(const subseg_counts* counts, int64_t target_size,
                                    double tolerance_pct, int iterations,
                                    int64_t max_subtoken_len, int presplit, int threads,
                                    const char* out_path);

/* Builds the derivational-network segmentation lexicon from a derivation
 * forest TSV and an inflection TSV. */
subseg_status subseg_derivnet_build_file(const char* derivations_path,
                                         const char* inflections_path, int threads,
                                         const char* out_path);

/* Validates an external segmenter's lexicon TSV and rewrites it canonically. */
subseg_status subseg_import_segmentation_file(const char* input_path, const char* out_path);

/* Writes a composed-model manifest after checking that both parts load. */
subseg_status subseg_compose_write_manifest(const char* lexicon_path,
                                            const char* post_model_path,
                                            const char* out_path);

/* ---- encoding ----------------------------------------------------------- */

typedef struct subseg_encoder subseg_encoder;

/* Opens any model file, detecting its kind from the content. */
subseg_status subseg_encoder_open(const char* model_path, subseg_encoder** out);
int subseg_encoder_kind(const subseg_encoder* enc);

/* Segments one line. convention ("continuation" / "end-marker") applies to
 * BPE and lexicon models; pass NULL for the default (continuation). STE and
 * composed models define their own marking and reject a convention. */
subseg_status subseg_encode_line(subseg_encoder* enc, const char* line,
                                 const char* convention, char** out_line);
void subseg_encoder_free(subseg_encoder* enc);

/* ---- evaluation ---------------------------------------------------------- */

/* TSV with keys morph_p, morph_r, morph_f1, bnd_p, bnd_r, bnd_f1, word_acc.
 * Both files are segmentation lexicon TSVs; predicted morphs may carry
 * residual "@@"/"_" markers, which are stripped. */
subseg_status subseg_eval_tsv(const char* gold_path, const char* pred_path, char** out_tsv);

/* Joint vocabulary: share of entries used on both sides. vocab_path is an
 * STE vocabulary or a plain one-subword-per-line list; the *_used files are
 * segmented text. */
subseg_status subseg_overlap_shared_tsv(const char* vocab_path, const char* src_used_path,
                                        const char* tgt_used_path, char** out_tsv);
/* Separate vocabularies: |A∩B| / |A∪B|. */
subseg_status subseg_overlap_jaccard_tsv(const char* vocab_a_path, const char* vocab_b_path,
                                         char** out_tsv);

/* Splits-per-word by frequency rank, bucketed at powers of two. TSV columns:
 * rank_lo, rank_hi, mean_subwords, n_types. */
subseg_status subseg_histogram_tsv(const char* model_path, const char* corpus_path,
                                   int threads, char** out_tsv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SUBSEG_H */
