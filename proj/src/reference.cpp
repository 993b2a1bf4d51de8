#include "bt/reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "bt/errors.hpp"
#include "bt/textnorm.hpp"
#include "bt/utf8.hpp"

namespace bt::reference {

namespace {

bool ref_is_space_cp(char32_t cp) { return utf8::is_space(cp); }

std::vector<std::string> simple_tokens(const std::string& line) {
  std::vector<std::string> toks;
  std::string cur;
  std::size_t i = 0;
  char32_t cp;
  while (i < line.size()) {
    std::size_t n = utf8::decode_one(line, i, cp);
    if (n == 0) {
      cp = 0xFFFD;
      n = 1;
    }
    if (ref_is_space_cp(cp)) {
      if (!cur.empty()) toks.push_back(cur);
      cur.clear();
    } else {
      cur.append(line, i, n);
    }
    i += n;
  }
  if (!cur.empty()) toks.push_back(cur);
  return toks;
}

bool ref_in_script(char32_t cp, const std::string& script) {
  if (script == "ethiopic")
    return (cp >= 0x1200 && cp <= 0x139F) || (cp >= 0x2D80 && cp <= 0x2DDF) ||
           (cp >= 0xAB00 && cp <= 0xAB2F);
  if (script == "latin")
    return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z') ||
           (cp >= 0xC0 && cp <= 0x24F);
  return true;
}

}  // namespace

corpus::Corpus clean(const corpus::Corpus& c, const corpus::CleanRules& rules,
                     corpus::CleanStats* stats) {
  corpus::Corpus out;
  out.lang = c.lang;
  corpus::CleanStats st;
  st.input = c.sentences.size();
  for (const auto& line : c.sentences) {
    bool control = false;
    for (unsigned char ch : line)
      if (ch < 0x20 && ch != '\t') control = true;
    if (rules.drop_control && control) {
      ++st.dropped_control;
      continue;
    }
    std::string text = line;
    if (rules.collapse_whitespace) {
      std::string joined;
      for (const auto& tok : simple_tokens(line)) {
        if (!joined.empty()) joined.push_back(' ');
        joined += tok;
      }
      text = joined;
    }
    const bool empty = simple_tokens(text).empty();
    if (rules.drop_empty && empty) {
      ++st.dropped_empty;
      continue;
    }
    if (rules.max_tokens > 0 && simple_tokens(text).size() > rules.max_tokens) {
      ++st.dropped_too_long;
      continue;
    }
    if (!rules.script.empty()) {
      std::size_t word_chars = 0, matching = 0;
      std::size_t i = 0;
      char32_t cp;
      while (i < text.size()) {
        std::size_t n = utf8::decode_one(text, i, cp);
        if (n == 0) {
          cp = 0xFFFD;
          n = 1;
        }
        i += n;
        if (utf8::is_space(cp) || utf8::is_punct(cp) || (cp >= '0' && cp <= '9')) continue;
        ++word_chars;
        if (ref_in_script(cp, rules.script)) ++matching;
      }
      if (word_chars > 0 && static_cast<double>(matching) <
                                rules.min_script_fraction * static_cast<double>(word_chars)) {
        ++st.dropped_script;
        continue;
      }
    }
    ++st.kept;
    out.sentences.push_back(text);
  }
  if (stats) *stats = st;
  return out;
}

namespace {

unsigned lev_rec(const std::u32string& a, const std::u32string& b, std::size_t i,
                 std::size_t j, std::vector<int>& memo, std::size_t width) {
  if (i == a.size()) return static_cast<unsigned>(b.size() - j);
  if (j == b.size()) return static_cast<unsigned>(a.size() - i);
  int& slot = memo[i * width + j];
  if (slot >= 0) return static_cast<unsigned>(slot);
  const unsigned del = lev_rec(a, b, i + 1, j, memo, width) + 1;
  const unsigned ins = lev_rec(a, b, i, j + 1, memo, width) + 1;
  const unsigned sub =
      lev_rec(a, b, i + 1, j + 1, memo, width) + (a[i] != b[j] ? 1u : 0u);
  slot = static_cast<int>(std::min({del, ins, sub}));
  return static_cast<unsigned>(slot);
}

}  // namespace

unsigned levenshtein_recursive(std::string_view a, std::string_view b) {
  const std::u32string ua = utf8::decode_lossy(a);
  const std::u32string ub = utf8::decode_lossy(b);
  std::vector<int> memo((ua.size() + 1) * (ub.size() + 1), -1);
  return lev_rec(ua, ub, 0, 0, memo, ub.size() + 1);
}

lexicon::BilingualDictionary induce_dictionary(const subword::Vocabulary& vocab_tgt,
                                               std::string tgt_lang,
                                               const subword::Vocabulary& vocab_rel,
                                               std::string rel_lang,
                                               const lexicon::InduceOptions& opts) {
  lexicon::BilingualDictionary dict;
  dict.tgt_lang = std::move(tgt_lang);
  dict.rel_lang = std::move(rel_lang);
  std::unordered_map<std::string, std::uint64_t> rel_count;
  for (const auto& [t, tc] : vocab_tgt.entries) {
    if (tc < opts.min_count) continue;
    const std::string tn = textnorm::strip_vowel_marks(t);
    for (const auto& [r, rc] : vocab_rel.entries) {
      if (rc < opts.min_count) continue;
      const unsigned d = levenshtein_recursive(tn, textnorm::strip_vowel_marks(r));
      if (d <= opts.max_dist) {
        dict.pairs.push_back({t, r, d});
        rel_count[r] = rc;
      }
    }
  }
  std::sort(dict.pairs.begin(), dict.pairs.end(),
            [&rel_count](const lexicon::DictEntry& a, const lexicon::DictEntry& b) {
              if (a.tgt_word != b.tgt_word) return a.tgt_word < b.tgt_word;
              if (a.distance != b.distance) return a.distance < b.distance;
              const auto ca = rel_count.at(a.rel_word), cb = rel_count.at(b.rel_word);
              if (ca != cb) return ca > cb;
              return a.rel_word < b.rel_word;
            });
  return dict;
}

namespace {

using Pair = std::pair<std::string, std::string>;

std::vector<std::string> chars_with_eow(const std::string& word, const std::string& eow) {
  std::vector<std::string> syms;
  std::size_t i = 0;
  char32_t cp;
  while (i < word.size()) {
    std::size_t n = utf8::decode_one(word, i, cp);
    if (n == 0) n = 1;
    syms.push_back(word.substr(i, n));
    i += n;
  }
  if (!syms.empty()) syms.back() += eow;
  return syms;
}

bool apply_everywhere(std::vector<std::string>& syms, const Pair& p) {
  bool any = false;
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < syms.size()) {
    if (i + 1 < syms.size() && syms[i] == p.first && syms[i + 1] == p.second) {
      out.push_back(p.first + p.second);
      i += 2;
      any = true;
    } else {
      out.push_back(syms[i]);
      ++i;
    }
  }
  syms = std::move(out);
  return any;
}

}  // namespace

subword::BpeModel bpe_learn(const subword::Vocabulary& vocab, std::size_t num_merges,
                            std::string eow_marker) {
  subword::BpeModel model;
  model.eow_marker = std::move(eow_marker);
  std::vector<std::pair<std::string, std::uint64_t>> items(vocab.entries.begin(),
                                                           vocab.entries.end());
  std::sort(items.begin(), items.end());
  std::vector<std::vector<std::string>> words;
  std::vector<std::uint64_t> freqs;
  for (const auto& [w, f] : items) {
    words.push_back(chars_with_eow(w, model.eow_marker));
    freqs.push_back(f);
  }

  for (std::size_t step = 0; step < num_merges; ++step) {
    std::map<Pair, std::uint64_t> counts;  // ordered: smallest pair found first
    for (std::size_t w = 0; w < words.size(); ++w)
      for (std::size_t i = 0; i + 1 < words[w].size(); ++i)
        counts[{words[w][i], words[w][i + 1]}] += freqs[w];
    if (counts.empty()) break;
    Pair best;
    std::uint64_t best_count = 0;
    for (const auto& [p, c] : counts) {
      if (c > best_count) {  // strict: the earliest (smallest) pair wins ties
        best = p;
        best_count = c;
      }
    }
    model.merges.push_back(best);
    for (auto& syms : words) apply_everywhere(syms, best);
  }
  return model;
}

std::vector<std::string> bpe_apply(const subword::BpeModel& m,
                                   const textnorm::TokenizedSentence& t) {
  std::vector<std::string> out;
  for (const auto& word : t) {
    auto syms = chars_with_eow(word, m.eow_marker);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& p : m.merges) {
        if (apply_everywhere(syms, p)) {
          changed = true;
          break;  // restart from the highest-priority merge
        }
      }
    }
    out.insert(out.end(), syms.begin(), syms.end());
  }
  return out;
}

corpus::Corpus bpe_apply_corpus(const subword::BpeModel& m, const corpus::Corpus& tokenized) {
  corpus::Corpus out;
  out.lang = tokenized.lang;
  for (const auto& line : tokenized.sentences) {
    const auto segs = reference::bpe_apply(m, simple_tokens(line));
    std::string joined;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (i) joined.push_back(' ');
      joined += segs[i];
    }
    out.sentences.push_back(std::move(joined));
  }
  return out;
}

eval::BleuReport bleu(const corpus::Corpus& hyps, const corpus::Corpus& refs) {
  if (hyps.sentences.size() != refs.sentences.size())
    throw DataError("hypothesis/reference corpora are not aligned");
  if (hyps.sentences.empty()) throw DataError("empty hypothesis corpus");

  eval::BleuReport r;
  for (std::size_t s = 0; s < hyps.sentences.size(); ++s) {
    const auto ht = simple_tokens(hyps.sentences[s]);
    const auto rt = simple_tokens(refs.sentences[s]);
    r.hyp_len += ht.size();
    r.ref_len += rt.size();
    for (unsigned n = 1; n <= 4; ++n) {
      if (ht.size() < n) continue;
      auto grams = [n](const std::vector<std::string>& toks) {
        std::map<std::string, std::uint64_t> g;
        for (std::size_t i = 0; i + n <= toks.size(); ++i) {
          std::string key;
          for (std::size_t k = 0; k < n; ++k) {
            if (k) key.push_back('\x1f');
            key += toks[i + k];
          }
          ++g[key];
        }
        return g;
      };
      const auto hg = grams(ht);
      const auto rg = rt.size() >= n ? grams(rt) : std::map<std::string, std::uint64_t>{};
      r.precisions[n - 1].total += ht.size() - n + 1;
      for (const auto& [g, hc] : hg) {
        auto it = rg.find(g);
        if (it != rg.end()) r.precisions[n - 1].matched += std::min(hc, it->second);
      }
    }
  }
  if (r.hyp_len == 0) throw DataError("hypothesis corpus has no tokens");
  r.brevity_penalty =
      r.hyp_len > r.ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(r.ref_len) / static_cast<double>(r.hyp_len));
  double log_sum = 0.0;
  bool zero = false;
  for (const auto& p : r.precisions) {
    if (p.total == 0) continue;
    if (p.matched == 0) {
      zero = true;
      break;
    }
    log_sum += std::log(static_cast<double>(p.matched) / static_cast<double>(p.total));
  }
  r.bleu = zero ? 0.0 : 100.0 * r.brevity_penalty * std::exp(log_sum / 4.0);
  return r;
}

}  // namespace bt::reference
