// SPDX-License-Identifier: Apache-2.0
//
// Exercises libsubseg through the C surface only, the way the CLI and any
// foreign-language binding would.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <subseg/subseg.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("subseg_capi_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const std::string p = (path / name).string();
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct Out {
  char* s = nullptr;
  ~Out() { subseg_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

}  // namespace

TEST_CASE("counts, stats and undo through the C API") {
  TempDir dir;
  const std::string src = dir.file("src.txt", "a b\na\n");
  const std::string tgt = dir.file("tgt.txt", "b c\n");

  subseg_counts *cs = nullptr, *ct = nullptr;
  REQUIRE(subseg_counts_read(src.c_str(), -1, 0, 2, &cs) == SUBSEG_OK);
  REQUIRE(subseg_counts_read(tgt.c_str(), -1, 0, 1, &ct) == SUBSEG_OK);

  Out tsv;
  REQUIRE(subseg_stats_tsv(cs, ct, &tsv.s) == SUBSEG_OK);
  CHECK(tsv.str() ==
        "tokens_src\t3\ntokens_tgt\t2\ntypes_src\t2\ntypes_tgt\t2\nshared_pct\t33.33\n");

  subseg_counts* both = nullptr;
  REQUIRE(subseg_counts_union(cs, ct, &both) == SUBSEG_OK);
  Out tsv2;
  REQUIRE(subseg_stats_tsv(both, both, &tsv2.s) == SUBSEG_OK);
  CHECK(tsv2.str().find("types_src\t3") != std::string::npos);

  Out undone;
  REQUIRE(subseg_undo_line("tram@@ vaj .", "continuation", 0, &undone.s) == SUBSEG_OK);
  CHECK(undone.str() == "tramvaj .");

  subseg_counts_free(cs);
  subseg_counts_free(ct);
  subseg_counts_free(both);
}

TEST_CASE("the full training and encoding pipeline through the C API") {
  TempDir dir;
  const std::string corpus =
      dir.file("corpus.txt", "mávat mávnout tramvaj .\nmávat tramvaje .\nmávat mávat\n");

  subseg_counts* counts = nullptr;
  REQUIRE(subseg_counts_read(corpus.c_str(), -1, 0, 1, &counts) == SUBSEG_OK);

  SUBCASE("BPE") {
    const std::string model = dir.at("model.bpe");
    REQUIRE(subseg_bpe_train_file(counts, 10, "non_final", 0, 1, model.c_str()) ==
            SUBSEG_OK);
    CHECK(slurp(model).rfind("#subseg-bpe v1 mode=non_final\n", 0) == 0);

    subseg_encoder* enc = nullptr;
    REQUIRE(subseg_encoder_open(model.c_str(), &enc) == SUBSEG_OK);
    CHECK(subseg_encoder_kind(enc) == SUBSEG_MODEL_BPE);

    Out line;
    REQUIRE(subseg_encode_line(enc, "mávat tramvaj", "continuation", &line.s) == SUBSEG_OK);
    Out back;
    REQUIRE(subseg_undo_line(line.s, "continuation", 0, &back.s) == SUBSEG_OK);
    CHECK(back.str() == "mávat tramvaj");

    CHECK(subseg_encode_line(enc, "bad_token", "continuation", &line.s) ==
          SUBSEG_ERR_INPUT);
    CHECK(std::string(subseg_last_error()).find("end marker") != std::string::npos);
    subseg_encoder_free(enc);
  }

  SUBCASE("STE") {
    const std::string vocab = dir.at("vocab.ste");
    REQUIRE(subseg_ste_train_file(counts, 40, 0, 0, 0, 0, 1, vocab.c_str()) == SUBSEG_OK);
    CHECK(slurp(vocab).rfind("#subseg-ste v1\n", 0) == 0);

    subseg_encoder* enc = nullptr;
    REQUIRE(subseg_encoder_open(vocab.c_str(), &enc) == SUBSEG_OK);
    CHECK(subseg_encoder_kind(enc) == SUBSEG_MODEL_STE);

    Out line;
    REQUIRE(subseg_encode_line(enc, "mávat tramvaje", nullptr, &line.s) == SUBSEG_OK);
    Out back;
    REQUIRE(subseg_undo_line(line.s, "end-marker", 1, &back.s) == SUBSEG_OK);
    CHECK(back.str() == "mávat tramvaje");

    CHECK(subseg_encode_line(enc, "x", "continuation", &line.s) == SUBSEG_ERR_CONFIG);
    subseg_encoder_free(enc);
  }

  subseg_counts_free(counts);
}

TEST_CASE("derivnet, composition and histogram through the C API") {
  TempDir dir;
  const std::string deriv =
      dir.file("deriv.tsv", "1\tmávat\t\n2\tmávnout\t1\n3\tmávající\t1\n");
  const std::string infl = dir.file("infl.tsv", "mávat\tmává\n");
  const std::string lexicon = dir.at("derinet.lex");
  REQUIRE(subseg_derivnet_build_file(deriv.c_str(), infl.c_str(), 1, lexicon.c_str()) ==
          SUBSEG_OK);
  CHECK(slurp(lexicon).find("mávat\tmáv a t\n") != std::string::npos);

  subseg_encoder* lex_enc = nullptr;
  REQUIRE(subseg_encoder_open(lexicon.c_str(), &lex_enc) == SUBSEG_OK);
  CHECK(subseg_encoder_kind(lex_enc) == SUBSEG_MODEL_LEXICON);
  Out seg;
  REQUIRE(subseg_encode_line(lex_enc, "mávat .", "continuation", &seg.s) == SUBSEG_OK);
  CHECK(seg.str() == "máv@@ a@@ t .");
  subseg_encoder_free(lex_enc);

  // Train the post-splitter on the pre-split corpus, then compose.
  const std::string corpus = dir.file("corpus.txt", "mávat mávnout .\nmávající mávat\n");
  const std::string presplit = dir.file(
      "presplit.txt", "máv@@ a@@ t máv@@ nout .\nmáv@@ a@@ jící máv@@ a@@ t\n");
  subseg_counts* units = nullptr;
  REQUIRE(subseg_counts_read(presplit.c_str(), -1, 1, 1, &units) == SUBSEG_OK);
  const std::string post = dir.at("post.ste");
  REQUIRE(subseg_ste_train_file(units, 30, 0, 0, 0, 1, 1, post.c_str()) == SUBSEG_OK);
  subseg_counts_free(units);

  // The manifest lands in a subdirectory; stored paths must still resolve.
  std::filesystem::create_directories(dir.path / "models");
  const std::string manifest = dir.at("models/model.manifest");
  REQUIRE(subseg_compose_write_manifest(lexicon.c_str(), post.c_str(), manifest.c_str()) ==
          SUBSEG_OK);

  subseg_encoder* composed = nullptr;
  REQUIRE(subseg_encoder_open(manifest.c_str(), &composed) == SUBSEG_OK);
  CHECK(subseg_encoder_kind(composed) == SUBSEG_MODEL_COMPOSED);
  Out line;
  REQUIRE(subseg_encode_line(composed, "mávat mávnout .", nullptr, &line.s) == SUBSEG_OK);
  Out back;
  REQUIRE(subseg_undo_line(line.s, "end-marker", 1, &back.s) == SUBSEG_OK);
  CHECK(back.str() == "mávat mávnout .");
  subseg_encoder_free(composed);

  Out hist;
  REQUIRE(subseg_histogram_tsv(lexicon.c_str(), corpus.c_str(), 1, &hist.s) == SUBSEG_OK);
  CHECK(hist.str().find("1\t1\t") == 0);
}

TEST_CASE("evaluation and overlap through the C API") {
  TempDir dir;
  const std::string gold = dir.file("gold.tsv", "mávat\tmáv a t\n");
  const std::string pred = dir.file("pred.tsv", "mávat\tmáva t\n");
  Out tsv;
  REQUIRE(subseg_eval_tsv(gold.c_str(), pred.c_str(), &tsv.s) == SUBSEG_OK);
  CHECK(tsv.str().find("morph_f1\t40.00") != std::string::npos);
  CHECK(tsv.str().find("bnd_f1\t66.67") != std::string::npos);
  CHECK(tsv.str().find("word_acc\t0.00") != std::string::npos);

  // Marker residue in predictions is stripped before scoring.
  const std::string marked = dir.file("pred2.tsv", "mávat\tmáv@@ a@@ t\n");
  Out tsv2;
  REQUIRE(subseg_eval_tsv(gold.c_str(), marked.c_str(), &tsv2.s) == SUBSEG_OK);
  CHECK(tsv2.str().find("word_acc\t100.00") != std::string::npos);

  const std::string vocab = dir.file("vocab.txt", "máv\nat\nnout\n");
  const std::string src_used = dir.file("src_used.txt", "máv at\nmáv nout\n");
  const std::string tgt_used = dir.file("tgt_used.txt", "máv at\n");
  Out shared;
  REQUIRE(subseg_overlap_shared_tsv(vocab.c_str(), src_used.c_str(), tgt_used.c_str(),
                                    &shared.s) == SUBSEG_OK);
  CHECK(shared.str() == "overlap_pct\t66.67\n");

  const std::string va = dir.file("va.txt", "a\nb\n");
  const std::string vb = dir.file("vb.txt", "b\nc\n");
  Out jaccard;
  REQUIRE(subseg_overlap_jaccard_tsv(va.c_str(), vb.c_str(), &jaccard.s) == SUBSEG_OK);
  CHECK(jaccard.str() == "overlap_pct\t33.33\n");
}

TEST_CASE("failures set a status and a message") {
  TempDir dir;
  subseg_counts* counts = nullptr;
  CHECK(subseg_counts_read((dir.path / "missing.txt").string().c_str(), -1, 0, 1,
                           &counts) == SUBSEG_ERR_IO);
  CHECK(std::strlen(subseg_last_error()) > 0);

  const std::string junk = dir.file("junk.model", "no such header\n");
  subseg_encoder* enc = nullptr;
  CHECK(subseg_encoder_open(junk.c_str(), &enc) == SUBSEG_ERR_INPUT);

  const std::string bad_utf8 = dir.file("bad.txt", "a \xff b\n");
  CHECK(subseg_counts_read(bad_utf8.c_str(), -1, 0, 1, &counts) == SUBSEG_ERR_INPUT);
  CHECK(std::string(subseg_last_error()).find("byte offset") != std::string::npos);

  CHECK(subseg_undo_line("a", "sideways", 0, nullptr) == SUBSEG_ERR_CONFIG);

  subseg_counts* c = nullptr;
  const std::string tiny = dir.file("tiny.txt", "a a\n");
  REQUIRE(subseg_counts_read(tiny.c_str(), -1, 0, 1, &c) == SUBSEG_OK);
  CHECK(subseg_bpe_train_file(c, -1, "none", 0, 1, dir.at("x.bpe").c_str()) ==
        SUBSEG_ERR_CONFIG);
  CHECK(subseg_ste_train_file(c, 3, 0, 0, 0, 0, 1, dir.at("x.ste").c_str()) ==
        SUBSEG_ERR_CONFIG);  // target below the alphabet size
  subseg_counts_free(c);
}
