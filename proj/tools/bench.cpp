// Benchmark: OpenMP kernels vs their serial reference implementations, on
// synthetic data. Also verifies that both produce identical output.
//
//   btaug-bench [--lines N] [--vocab N] [--merges N] [--jobs N]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "bt/corpus.hpp"
#include "bt/eval.hpp"
#include "bt/lexicon.hpp"
#include "bt/reference.hpp"
#include "bt/rng.hpp"
#include "bt/runtime.hpp"
#include "bt/subword.hpp"

using namespace bt;

namespace {

double seconds(std::function<void()> fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// "reference" is the plain serial implementation from bt::reference; "kernel"
// is the shipped OpenMP path, so the ratio includes algorithmic wins (word
// caching, banding) on top of threading.
void report(const char* kernel, double reference, double optimized, bool equal) {
  std::printf("%-18s %10.3fs %10.3fs %8.2fx   %s\n", kernel, reference, optimized,
              reference / optimized, equal ? "outputs identical" : "OUTPUT MISMATCH");
}

std::string word(rng::SplitMix64& g, std::string_view alphabet, std::size_t lo,
                 std::size_t hi) {
  std::string w;
  for (std::size_t i = 0, n = lo + g.below(hi - lo + 1); i < n; ++i)
    w.push_back(alphabet[g.below(alphabet.size())]);
  return w;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t lines = 50000, vocab_words = 2000, merges = 500;
  int jobs = 0;
  for (int i = 1; i < argc; ++i) {
    auto next = [&](std::size_t& out) {
      if (i + 1 < argc) out = std::stoull(argv[++i]);
    };
    if (!std::strcmp(argv[i], "--lines")) next(lines);
    else if (!std::strcmp(argv[i], "--vocab")) next(vocab_words);
    else if (!std::strcmp(argv[i], "--merges")) next(merges);
    else if (!std::strcmp(argv[i], "--jobs") && i + 1 < argc) jobs = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: btaug-bench [--lines N] [--vocab N] [--merges N] [--jobs N]\n");
      return 1;
    }
  }
  set_max_threads(jobs);
  std::printf("btaug-bench: %zu lines, %zu word types, %zu merges, %d threads\n\n", lines,
              vocab_words, merges, max_threads());
  std::printf("%-18s %11s %11s %9s\n", "kernel", "reference", "kernel", "ratio");

  rng::SplitMix64 g(7);
  std::vector<std::string> lexemes;
  for (std::size_t i = 0; i < vocab_words; ++i) lexemes.push_back(word(g, "abcdefgh", 2, 10));

  corpus::Corpus dirty{"ti", {}};
  for (std::size_t i = 0; i < lines; ++i) {
    std::string s;
    for (std::size_t k = 0, n = 1 + g.below(20); k < n; ++k) {
      s += lexemes[g.below(lexemes.size())];
      s += g.below(8) == 0 ? "   " : " ";
    }
    if (g.below(50) == 0) s += '\x01';
    dirty.sentences.push_back(std::move(s));
  }

  {
    corpus::CleanRules rules;
    corpus::Corpus out_par, out_ser;
    const double tp = seconds([&] { out_par = corpus::clean(dirty, rules); });
    const double ts = seconds([&] { out_ser = reference::clean(dirty, rules); });
    report("clean", ts, tp, out_par.sentences == out_ser.sentences);
  }

  corpus::Corpus clean_corpus = corpus::clean(dirty, corpus::CleanRules{});
  subword::Vocabulary vocab = subword::build_vocab(clean_corpus);
  const subword::BpeModel model = subword::bpe_learn(vocab, merges);

  {
    corpus::Corpus out_par, out_ser;
    const double tp = seconds([&] { out_par = subword::bpe_apply_corpus(model, clean_corpus); });
    const double ts =
        seconds([&] { out_ser = reference::bpe_apply_corpus(model, clean_corpus); });
    report("bpe-apply", ts, tp, out_par.sentences == out_ser.sentences);
  }

  {
    // Smaller vocabularies: the brute-force reference is quadratic.
    subword::Vocabulary vt, vr;
    for (std::size_t i = 0; i < std::min<std::size_t>(vocab_words, 1500); ++i) {
      vt.entries[word(g, "abcdef", 3, 8)] += 5;
      vr.entries[word(g, "abcdef", 3, 8)] += 5;
    }
    lexicon::InduceOptions opts{.max_dist = 2, .min_count = 1};
    lexicon::BilingualDictionary out_par, out_ser;
    const double tp =
        seconds([&] { out_par = lexicon::induce_dictionary(vt, "ti", vr, "am", opts); });
    const double ts =
        seconds([&] { out_ser = reference::induce_dictionary(vt, "ti", vr, "am", opts); });
    report("dict-induce", ts, tp, out_par.pairs == out_ser.pairs);
  }

  {
    corpus::Corpus hyp{"x", {}}, ref{"x", {}};
    for (std::size_t i = 0; i < lines; ++i) {
      std::string h, r;
      for (std::size_t k = 0, n = 3 + g.below(25); k < n; ++k) {
        if (k) h.push_back(' ');
        h += lexemes[g.below(200)];
      }
      for (std::size_t k = 0, n = 3 + g.below(25); k < n; ++k) {
        if (k) r.push_back(' ');
        r += lexemes[g.below(200)];
      }
      hyp.sentences.push_back(std::move(h));
      ref.sentences.push_back(std::move(r));
    }
    eval::BleuReport out_par, out_ser;
    const double tp = seconds([&] { out_par = eval::bleu(hyp, ref); });
    const double ts = seconds([&] { out_ser = reference::bleu(hyp, ref); });
    report("bleu", ts, tp,
           out_par.bleu == out_ser.bleu && out_par.hyp_len == out_ser.hyp_len &&
               out_par.precisions[3].matched == out_ser.precisions[3].matched);
  }
  return 0;
}
