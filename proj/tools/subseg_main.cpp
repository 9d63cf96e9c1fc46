// SPDX-License-Identifier: Apache-2.0
//
// subseg — one binary, subcommand style, pipeline friendly: every apply-*
// subcommand is a pure line filter (n lines in, n lines out). Data goes to
// stdout, diagnostics to stderr. Exit codes: 0 ok, 1 input error, 2 usage.

#include <subseg/subseg.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

struct StringOut {
  char* s = nullptr;
  ~StringOut() { subseg_string_free(s); }
};

struct CountsHandle {
  subseg_counts* h = nullptr;
  ~CountsHandle() { subseg_counts_free(h); }
};

struct EncoderHandle {
  subseg_encoder* h = nullptr;
  ~EncoderHandle() { subseg_encoder_free(h); }
};

int report_failure() {
  std::cerr << "subseg: " << subseg_last_error() << "\n";
  return 1;
}

int write_text(const std::string& out_path, const char* text) {
  if (out_path.empty()) {
    std::cout << text;
    return std::cout ? 0 : 1;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "subseg: cannot write " << out_path << "\n";
    return 1;
  }
  return 0;
}

// Applies fn to every input line, preserving line count.
int run_filter(const std::string& in_path, const std::string& out_path,
               const std::function<subseg_status(const std::string&, StringOut&)>& fn) {
  std::ifstream file_in;
  if (!in_path.empty()) {
    file_in.open(in_path, std::ios::binary);
    if (!file_in) {
      std::cerr << "subseg: cannot open " << in_path << "\n";
      return 1;
    }
  }
  std::istream& in = in_path.empty() ? std::cin : file_in;

  std::ofstream file_out;
  if (!out_path.empty()) {
    file_out.open(out_path, std::ios::binary);
    if (!file_out) {
      std::cerr << "subseg: cannot write " << out_path << "\n";
      return 1;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file_out;

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StringOut result;
    if (fn(line, result) != SUBSEG_OK) {
      std::cerr << "subseg: line " << line_no << ": " << subseg_last_error() << "\n";
      return 1;
    }
    out << result.s << "\n";
  }
  if (!out) {
    std::cerr << "subseg: write failed\n";
    return 1;
  }
  return 0;
}

int read_counts(const std::vector<std::string>& paths, int64_t budget, bool presplit,
                int threads, CountsHandle& out) {
  CountsHandle acc;
  for (const std::string& path : paths) {
    CountsHandle one;
    if (subseg_counts_read(path.c_str(), budget, presplit ? 1 : 0, threads, &one.h) !=
        SUBSEG_OK)
      return report_failure();
    if (!acc.h) {
      std::swap(acc.h, one.h);
    } else {
      CountsHandle merged;
      if (subseg_counts_union(acc.h, one.h, &merged.h) != SUBSEG_OK) return report_failure();
      std::swap(acc.h, merged.h);
    }
  }
  std::swap(out.h, acc.h);
  return 0;
}

int open_model(const std::string& path, subseg_model_kind expected, const char* what,
               EncoderHandle& enc) {
  if (subseg_encoder_open(path.c_str(), &enc.h) != SUBSEG_OK) return report_failure();
  if (subseg_encoder_kind(enc.h) != expected) {
    std::cerr << "subseg: " << path << " is not " << what << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subseg — subword segmentation toolkit for MT preprocessing"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand too

  int threads = 1;
  app.add_option("--threads", threads, "worker threads (never changes output bytes)")
      ->envname("SUBSEG_THREADS")
      ->check(CLI::Range(1, 64));

  std::function<int()> run;

  // ---- stats ----
  {
    auto* cmd = app.add_subcommand("stats", "corpus statistics for two sides");
    auto src = std::make_shared<std::string>();
    auto tgt = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--src", *src, "source corpus")->required();
    cmd->add_option("--tgt", *tgt, "target corpus")->required();
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([&, src, tgt, out] {
      run = [&, src, tgt, out]() -> int {
        CountsHandle s, t;
        if (int rc = read_counts({*src}, -1, false, threads, s)) return rc;
        if (int rc = read_counts({*tgt}, -1, false, threads, t)) return rc;
        StringOut tsv;
        if (subseg_stats_tsv(s.h, t.h, &tsv.s) != SUBSEG_OK) return report_failure();
        return write_text(*out, tsv.s);
      };
    });
  }

  // ---- train-bpe ----
  {
    auto* cmd = app.add_subcommand("train-bpe", "learn a BPE merge table");
    auto merges = std::make_shared<int64_t>(0);
    auto underscore = std::make_shared<std::string>("none");
    auto src = std::make_shared<std::string>();
    auto tgt = std::make_shared<std::string>();
    auto input = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto presplit = std::make_shared<bool>(false);
    cmd->add_option("--merges", *merges, "number of merges to learn")
        ->required()
        ->check(CLI::NonNegativeNumber);
    auto* underscore_opt =
        cmd->add_option("--underscore", *underscore, "zero-suffix mode")
            ->check(CLI::IsMember({"none", "every", "non-final"}));
    auto* src_opt = cmd->add_option("--src", *src, "source corpus (trains a shared table)");
    auto* tgt_opt = cmd->add_option("--tgt", *tgt, "target corpus");
    auto* input_opt = cmd->add_option("--input", *input, "single training corpus");
    cmd->add_option("-o,--output", *out, "model file")->required();
    auto* presplit_flag = cmd->add_flag(
        "--presplit", *presplit, "input is a continuation-marked morph corpus");
    src_opt->needs(tgt_opt);
    tgt_opt->needs(src_opt);
    input_opt->excludes(src_opt)->excludes(tgt_opt);
    presplit_flag->excludes(underscore_opt);
    cmd->callback([&, merges, underscore, src, tgt, input, out, presplit, src_opt, input_opt] {
      run = [&, merges, underscore, src, tgt, input, out, presplit, src_opt, input_opt]() -> int {
        std::vector<std::string> paths;
        if (*input_opt) paths.push_back(*input);
        if (*src_opt) {
          paths.push_back(*src);
          paths.push_back(*tgt);
        }
        if (paths.empty()) {
          std::cerr << "subseg: train-bpe needs --input or --src/--tgt\n";
          return 2;
        }
        CountsHandle counts;
        if (int rc = read_counts(paths, -1, *presplit, threads, counts)) return rc;
        std::string mode = *underscore == "non-final" ? "non_final" : *underscore;
        if (subseg_bpe_train_file(counts.h, *merges, mode.c_str(), *presplit ? 1 : 0,
                                  threads, out->c_str()) != SUBSEG_OK)
          return report_failure();
        return 0;
      };
    });
  }

  // ---- apply-bpe ----
  {
    auto* cmd = app.add_subcommand("apply-bpe", "segment text with a BPE model");
    auto model = std::make_shared<std::string>();
    auto convention = std::make_shared<std::string>("continuation");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--model", *model, "BPE model file")->required();
    cmd->add_option("--convention", *convention, "output marking")
        ->check(CLI::IsMember({"continuation", "end-marker"}));
    cmd->add_option("-i,--input", *in, "input file (default stdin)");
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([&, model, convention, in, out] {
      run = [&, model, convention, in, out]() -> int {
        EncoderHandle enc;
        if (int rc = open_model(*model, SUBSEG_MODEL_BPE, "a BPE model", enc)) return rc;
        return run_filter(*in, *out, [&](const std::string& line, StringOut& result) {
          return subseg_encode_line(enc.h, line.c_str(), convention->c_str(), &result.s);
        });
      };
    });
  }

  // ---- train-ste ----
  {
    auto* cmd = app.add_subcommand("train-ste", "build a wordpiece vocabulary");
    auto target = std::make_shared<int64_t>(0);
    auto budget = std::make_shared<int64_t>(-1);
    auto iters = std::make_shared<int>(4);
    auto max_len = std::make_shared<int64_t>(20);
    auto tol = std::make_shared<double>(1.0);
    auto inputs = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    auto presplit = std::make_shared<bool>(false);
    cmd->add_option("--target-size", *target, "desired vocabulary size")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--byte-budget", *budget, "corpus sampling budget in bytes")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--iters", *iters, "refinement rounds")->check(CLI::PositiveNumber);
    cmd->add_option("--max-len", *max_len, "max subtoken length in scalars")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", *tol, "size tolerance percent")->check(CLI::PositiveNumber);
    cmd->add_option("--input", *inputs, "training corpus (repeat to share the vocabulary)")
        ->required()
        ->expected(1, 2);
    cmd->add_option("-o,--output", *out, "vocabulary file")->required();
    cmd->add_flag("--presplit", *presplit, "input is a continuation-marked morph corpus");
    cmd->callback([&, target, budget, iters, max_len, tol, inputs, out, presplit] {
      run = [&, target, budget, iters, max_len, tol, inputs, out, presplit]() -> int {
        CountsHandle counts;
        if (int rc = read_counts(*inputs, *budget, *presplit, threads, counts)) return rc;
        if (subseg_ste_train_file(counts.h, *target, *tol, *iters, *max_len,
                                  *presplit ? 1 : 0, threads, out->c_str()) != SUBSEG_OK)
          return report_failure();
        return 0;
      };
    });
  }

  // ---- apply-ste ----
  {
    auto* cmd = app.add_subcommand("apply-ste", "segment text with a wordpiece vocabulary");
    auto vocab = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--vocab", *vocab, "vocabulary file")->required();
    cmd->add_option("-i,--input", *in, "input file (default stdin)");
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([&, vocab, in, out] {
      run = [&, vocab, in, out]() -> int {
        EncoderHandle enc;
        if (int rc = open_model(*vocab, SUBSEG_MODEL_STE, "an STE vocabulary", enc))
          return rc;
        return run_filter(*in, *out, [&](const std::string& line, StringOut& result) {
          return subseg_encode_line(enc.h, line.c_str(), nullptr, &result.s);
        });
      };
    });
  }

  // ---- build-derinet ----
  {
    auto* cmd = app.add_subcommand("build-derinet",
                                   "build a segmentation lexicon from a derivation network");
    auto derivations = std::make_shared<std::string>();
    auto inflections = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--derivations", *derivations, "derivation forest TSV")->required();
    cmd->add_option("--inflections", *inflections, "lemma<TAB>form TSV")->required();
    cmd->add_option("-o,--output", *out, "lexicon file")->required();
    cmd->callback([&, derivations, inflections, out] {
      run = [&, derivations, inflections, out]() -> int {
        if (subseg_derivnet_build_file(derivations->c_str(), inflections->c_str(), threads,
                                       out->c_str()) != SUBSEG_OK)
          return report_failure();
        return 0;
      };
    });
  }

  // ---- apply-lexicon ----
  {
    auto* cmd = app.add_subcommand("apply-lexicon", "segment text with a lexicon");
    auto lexicon = std::make_shared<std::string>();
    auto convention = std::make_shared<std::string>("continuation");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--lexicon", *lexicon, "segmentation lexicon TSV")->required();
    cmd->add_option("--convention", *convention, "output marking")
        ->check(CLI::IsMember({"continuation", "end-marker"}));
    cmd->add_option("-i,--input", *in, "input file (default stdin)");
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([&, lexicon, convention, in, out] {
      run = [&, lexicon, convention, in, out]() -> int {
        EncoderHandle enc;
        if (int rc = open_model(*lexicon, SUBSEG_MODEL_LEXICON, "a segmentation lexicon", enc))
          return rc;
        return run_filter(*in, *out, [&](const std::string& line, StringOut& result) {
          return subseg_encode_line(enc.h, line.c_str(), convention->c_str(), &result.s);
        });
      };
    });
  }

  // ---- import-segmentation ----
  {
    auto* cmd = app.add_subcommand("import-segmentation",
                                   "validate and import an external segmenter's lexicon");
    auto input = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--input", *input, "lexicon TSV from an external tool")->required();
    cmd->add_option("-o,--output", *out, "canonical lexicon file")->required();
    cmd->callback([&, input, out] {
      run = [&, input, out]() -> int {
        if (subseg_import_segmentation_file(input->c_str(), out->c_str()) != SUBSEG_OK)
          return report_failure();
        return 0;
      };
    });
  }

  // ---- compose ----
  {
    auto* cmd = app.add_subcommand("compose", "chain a lexicon with a trained splitter");
    auto lexicon = std::make_shared<std::string>();
    auto post = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--lexicon", *lexicon, "pre-splitter lexicon")->required();
    cmd->add_option("--post", *post, "post-splitter model (BPE or STE)")->required();
    cmd->add_option("-o,--output", *out, "manifest file")->required();
    cmd->callback([&, lexicon, post, out] {
      run = [&, lexicon, post, out]() -> int {
        if (subseg_compose_write_manifest(lexicon->c_str(), post->c_str(), out->c_str()) !=
            SUBSEG_OK)
          return report_failure();
        return 0;
      };
    });
  }

  // ---- apply-composed ----
  {
    auto* cmd = app.add_subcommand("apply-composed", "segment text with a composed model");
    auto manifest = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--manifest", *manifest, "composed-model manifest")->required();
    cmd->add_option("-i,--input", *in, "input file (default stdin)");
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([&, manifest, in, out] {
      run = [&, manifest, in, out]() -> int {
        EncoderHandle enc;
        if (int rc = open_model(*manifest, SUBSEG_MODEL_COMPOSED, "a composed model", enc))
          return rc;
        return run_filter(*in, *out, [&](const std::string& line, StringOut& result) {
          return subseg_encode_line(enc.h, line.c_str(), nullptr, &result.s);
        });
      };
    });
  }

  // ---- undo-splits ----
  {
    auto* cmd = app.add_subcommand("undo-splits", "remove subword markers");
    auto convention = std::make_shared<std::string>();
    auto unescape = std::make_shared<bool>(false);
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--convention", *convention, "marking of the input")
        ->required()
        ->check(CLI::IsMember({"continuation", "end-marker"}));
    cmd->add_flag("--unescape", *unescape, "also reverse wordpiece escaping (STE output)");
    cmd->add_option("-i,--input", *in, "input file (default stdin)");
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([&, convention, unescape, in, out] {
      run = [&, convention, unescape, in, out]() -> int {
        return run_filter(*in, *out, [&](const std::string& line, StringOut& result) {
          return subseg_undo_line(line.c_str(), convention->c_str(), *unescape ? 1 : 0,
                                  &result.s);
        });
      };
    });
  }

  // ---- eval ----
  {
    auto* cmd = app.add_subcommand("eval", "score a segmentation against a gold lexicon");
    auto gold = std::make_shared<std::string>();
    auto pred = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--gold", *gold, "gold lexicon TSV")->required();
    cmd->add_option("--pred", *pred, "predicted lexicon TSV")->required();
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([&, gold, pred, out] {
      run = [&, gold, pred, out]() -> int {
        StringOut tsv;
        if (subseg_eval_tsv(gold->c_str(), pred->c_str(), &tsv.s) != SUBSEG_OK)
          return report_failure();
        return write_text(*out, tsv.s);
      };
    });
  }

  // ---- overlap ----
  {
    auto* cmd = app.add_subcommand("overlap", "vocabulary overlap between two sides");
    auto vocab = std::make_shared<std::string>();
    auto src_used = std::make_shared<std::string>();
    auto tgt_used = std::make_shared<std::string>();
    auto vocab_a = std::make_shared<std::string>();
    auto vocab_b = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto* vocab_opt =
        cmd->add_option("--vocab", *vocab, "joint vocabulary (STE file or plain list)");
    auto* src_opt = cmd->add_option("--src-used", *src_used, "segmented source text");
    auto* tgt_opt = cmd->add_option("--tgt-used", *tgt_used, "segmented target text");
    auto* a_opt = cmd->add_option("--vocab-a", *vocab_a, "first separate vocabulary");
    auto* b_opt = cmd->add_option("--vocab-b", *vocab_b, "second separate vocabulary");
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    vocab_opt->needs(src_opt)->needs(tgt_opt);
    a_opt->needs(b_opt)->excludes(vocab_opt);
    b_opt->needs(a_opt);
    cmd->callback([&, vocab, src_used, tgt_used, vocab_a, vocab_b, out, vocab_opt, a_opt] {
      run = [&, vocab, src_used, tgt_used, vocab_a, vocab_b, out, vocab_opt, a_opt]() -> int {
        StringOut tsv;
        if (*vocab_opt) {
          if (subseg_overlap_shared_tsv(vocab->c_str(), src_used->c_str(),
                                        tgt_used->c_str(), &tsv.s) != SUBSEG_OK)
            return report_failure();
        } else if (*a_opt) {
          if (subseg_overlap_jaccard_tsv(vocab_a->c_str(), vocab_b->c_str(), &tsv.s) !=
              SUBSEG_OK)
            return report_failure();
        } else {
          std::cerr << "subseg: overlap needs --vocab/--src-used/--tgt-used or "
                       "--vocab-a/--vocab-b\n";
          return 2;
        }
        return write_text(*out, tsv.s);
      };
    });
  }

  // ---- histogram ----
  {
    auto* cmd = app.add_subcommand("histogram", "splits per word by frequency rank");
    auto model = std::make_shared<std::string>();
    auto counts = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--model", *model, "any trained model file")->required();
    cmd->add_option("--counts", *counts, "tokenized corpus providing the frequencies")
        ->required();
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([&, model, counts, out] {
      run = [&, model, counts, out]() -> int {
        StringOut tsv;
        if (subseg_histogram_tsv(model->c_str(), counts->c_str(), threads, &tsv.s) !=
            SUBSEG_OK)
          return report_failure();
        return write_text(*out, tsv.s);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }
  return run ? run() : 2;
}
