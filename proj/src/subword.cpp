#include "bt/subword.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <queue>

#include "bt/errors.hpp"
#include "bt/utf8.hpp"

namespace bt::subword {

namespace {

using Pair = std::pair<std::string, std::string>;

struct PairHash {
  std::size_t operator()(const Pair& p) const {
    const std::size_t h1 = std::hash<std::string>()(p.first);
    const std::size_t h2 = std::hash<std::string>()(p.second);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ull + (h1 << 6) + (h1 >> 2));
  }
};

// Word -> character symbols, end-of-word marker glued onto the last one.
std::vector<std::string> to_symbols(std::string_view word, const std::string& eow) {
  std::vector<std::string> syms;
  std::size_t i = 0;
  char32_t cp;
  while (i < word.size()) {
    std::size_t n = utf8::decode_one(word, i, cp);
    if (n == 0) n = 1;  // malformed byte kept as a one-byte symbol
    syms.emplace_back(word.substr(i, n));
    i += n;
  }
  if (!syms.empty()) syms.back() += eow;
  return syms;
}

// Merge every (left, right) occurrence, greedy left to right.
std::vector<std::string> merge_word(const std::vector<std::string>& syms, const Pair& p) {
  std::vector<std::string> out;
  out.reserve(syms.size());
  std::size_t i = 0;
  while (i < syms.size()) {
    if (i + 1 < syms.size() && syms[i] == p.first && syms[i + 1] == p.second) {
      out.push_back(p.first + p.second);
      i += 2;
    } else {
      out.push_back(syms[i]);
      ++i;
    }
  }
  return out;
}

bool contains_pair(const std::vector<std::string>& syms, const Pair& p) {
  for (std::size_t i = 0; i + 1 < syms.size(); ++i)
    if (syms[i] == p.first && syms[i + 1] == p.second) return true;
  return false;
}

struct HeapEntry {
  std::int64_t count;
  Pair pair;
};

// Max count first; ties broken toward the lexicographically smallest pair.
struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.count != b.count) return a.count < b.count;
    return a.pair > b.pair;
  }
};

void split_tokens(const std::string& line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < n && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.emplace_back(line.data() + start, i - start);
  }
}

}  // namespace

Vocabulary build_vocab(const corpus::Corpus& tokenized) {
  Vocabulary v;
  add_to_vocab(v, tokenized);
  return v;
}

void add_to_vocab(Vocabulary& vocab, const corpus::Corpus& tokenized) {
  std::vector<std::string_view> toks;
  for (const auto& line : tokenized.sentences) {
    split_tokens(line, toks);
    for (auto t : toks) ++vocab.entries[std::string(t)];
  }
}

BpeModel bpe_learn(const Vocabulary& vocab, std::size_t num_merges, std::string eow_marker) {
  if (eow_marker.empty()) throw ConfigError("end-of-word marker must be non-empty");
  BpeModel model;
  model.eow_marker = std::move(eow_marker);

  // Sorted word list: iteration order must not depend on hash-table layout.
  std::vector<std::pair<std::string, std::uint64_t>> items(vocab.entries.begin(),
                                                           vocab.entries.end());
  std::sort(items.begin(), items.end());

  std::vector<std::vector<std::string>> words;
  std::vector<std::uint64_t> freqs;
  words.reserve(items.size());
  for (auto& [word, freq] : items) {
    auto syms = to_symbols(word, model.eow_marker);
    if (syms.size() < 2) continue;  // single-symbol words never produce a pair
    words.push_back(std::move(syms));
    freqs.push_back(freq);
  }

  std::unordered_map<Pair, std::int64_t, PairHash> counts;
  std::unordered_map<Pair, std::vector<std::uint32_t>, PairHash> occurs_in;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;

  for (std::uint32_t w = 0; w < words.size(); ++w) {
    const auto& syms = words[w];
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      Pair p{syms[i], syms[i + 1]};
      counts[p] += static_cast<std::int64_t>(freqs[w]);
      auto& lst = occurs_in[p];
      if (lst.empty() || lst.back() != w) lst.push_back(w);
    }
  }
  for (const auto& [p, c] : counts) heap.push({c, p});

  std::unordered_map<Pair, std::int64_t, PairHash> delta;
  while (model.merges.size() < num_merges) {
    Pair best;
    bool found = false;
    while (!heap.empty()) {
      const HeapEntry top = heap.top();
      auto it = counts.find(top.pair);
      if (it == counts.end() || it->second <= 0 || it->second != top.count) {
        heap.pop();  // stale entry, a fresher one is (or was) in the heap
        continue;
      }
      best = top.pair;
      found = true;
      heap.pop();
      break;
    }
    if (!found) break;  // exhausted: no adjacent pair left anywhere
    model.merges.push_back(best);

    auto occ_it = occurs_in.find(best);
    std::vector<std::uint32_t> ids;
    if (occ_it != occurs_in.end()) {
      ids = std::move(occ_it->second);
      occurs_in.erase(occ_it);
    }
    for (std::uint32_t w : ids) {
      auto& syms = words[w];
      if (!contains_pair(syms, best)) continue;  // stale listing
      const std::int64_t f = static_cast<std::int64_t>(freqs[w]);
      delta.clear();
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) --delta[{syms[i], syms[i + 1]}];
      syms = merge_word(syms, best);
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) ++delta[{syms[i], syms[i + 1]}];
      for (const auto& [p, d] : delta) {
        if (d == 0) continue;
        std::int64_t& c = counts[p];
        c += d * f;
        if (d > 0) {
          auto& lst = occurs_in[p];
          if (lst.empty() || lst.back() != w) lst.push_back(w);
        }
        if (c <= 0) {
          counts.erase(p);
        } else {
          heap.push({c, p});
        }
      }
    }
    counts.erase(best);
  }
  return model;
}

namespace {

// Read-only segmenter shared across threads.
class Applier {
 public:
  explicit Applier(const BpeModel& m) : model_(m) {
    rank_.reserve(m.merges.size());
    for (std::size_t r = 0; r < m.merges.size(); ++r) rank_.emplace(m.merges[r], r);
  }

  std::vector<std::string> segment(std::string_view word) const {
    auto syms = to_symbols(word, model_.eow_marker);
    if (rank_.empty()) return syms;
    while (syms.size() > 1) {
      std::size_t best = SIZE_MAX;
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        auto it = rank_.find({syms[i], syms[i + 1]});
        if (it != rank_.end() && it->second < best) best = it->second;
      }
      if (best == SIZE_MAX) break;
      syms = merge_word(syms, model_.merges[best]);
    }
    return syms;
  }

 private:
  const BpeModel& model_;
  std::unordered_map<Pair, std::size_t, PairHash> rank_;
};

}  // namespace

std::vector<std::string> bpe_apply(const BpeModel& m, const textnorm::TokenizedSentence& t) {
  const Applier ap(m);
  std::vector<std::string> out;
  for (const auto& word : t) {
    auto syms = ap.segment(word);
    out.insert(out.end(), std::make_move_iterator(syms.begin()),
               std::make_move_iterator(syms.end()));
  }
  return out;
}

textnorm::TokenizedSentence bpe_decode(std::span<const std::string> subwords,
                                       const std::string& eow_marker) {
  if (eow_marker.empty()) throw ConfigError("end-of-word marker must be non-empty");
  textnorm::TokenizedSentence out;
  std::string word;
  for (const auto& sw : subwords) {
    if (sw.size() >= eow_marker.size() &&
        std::memcmp(sw.data() + sw.size() - eow_marker.size(), eow_marker.data(),
                    eow_marker.size()) == 0) {
      word.append(sw, 0, sw.size() - eow_marker.size());
      if (word.empty()) throw FormatError("subword sequence reconstructs an empty token");
      out.push_back(std::move(word));
      word.clear();
    } else {
      word += sw;
    }
  }
  if (!word.empty())
    throw FormatError("dangling subwords: sequence ends without the end-of-word marker");
  return out;
}

corpus::Corpus bpe_apply_corpus(const BpeModel& m, const corpus::Corpus& tokenized) {
  const Applier ap(m);

  // Segment each distinct word once, in parallel; then rebuild the lines.
  std::unordered_map<std::string_view, std::uint32_t> word_id;
  std::vector<std::string_view> uniq;
  std::vector<std::vector<std::uint32_t>> line_words(tokenized.sentences.size());
  std::vector<std::string_view> toks;
  for (std::size_t li = 0; li < tokenized.sentences.size(); ++li) {
    split_tokens(tokenized.sentences[li], toks);
    auto& ids = line_words[li];
    ids.reserve(toks.size());
    for (auto t : toks) {
      auto [it, inserted] = word_id.emplace(t, static_cast<std::uint32_t>(uniq.size()));
      if (inserted) uniq.push_back(t);
      ids.push_back(it->second);
    }
  }

  std::vector<std::string> segged(uniq.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < static_cast<long long>(uniq.size()); ++i) {
    const auto syms = ap.segment(uniq[i]);
    std::string joined;
    for (std::size_t k = 0; k < syms.size(); ++k) {
      if (k) joined.push_back(' ');
      joined += syms[k];
    }
    segged[i] = std::move(joined);
  }

  corpus::Corpus out;
  out.lang = tokenized.lang;
  out.sentences.resize(tokenized.sentences.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (long long li = 0; li < static_cast<long long>(line_words.size()); ++li) {
    std::string line;
    for (std::size_t k = 0; k < line_words[li].size(); ++k) {
      if (k) line.push_back(' ');
      line += segged[line_words[li][k]];
    }
    out.sentences[li] = std::move(line);
  }
  return out;
}

corpus::Corpus bpe_decode_corpus(const corpus::Corpus& subword_corpus,
                                 const std::string& eow_marker) {
  corpus::Corpus out;
  out.lang = subword_corpus.lang;
  out.sentences.reserve(subword_corpus.sentences.size());
  std::vector<std::string_view> toks;
  for (std::size_t li = 0; li < subword_corpus.sentences.size(); ++li) {
    split_tokens(subword_corpus.sentences[li], toks);
    std::vector<std::string> subwords(toks.begin(), toks.end());
    try {
      out.sentences.push_back(textnorm::join(bpe_decode(subwords, eow_marker)));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(li + 1) + ": " + e.what());
    }
  }
  return out;
}

void save_model(const BpeModel& m, const std::string& path) {
  if (m.eow_marker.empty()) throw ConfigError("end-of-word marker must be non-empty");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "bpe v1 " << m.eow_marker << '\n';
  for (const auto& [l, r] : m.merges) out << l << '\t' << r << '\n';
  if (!out.flush()) throw IoError("write failed: " + path);
}

BpeModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("bpe v1 ", 0) != 0 || line.size() <= 7)
    throw FormatError(path + ": missing 'bpe v1 <marker>' header");
  BpeModel m;
  m.eow_marker = line.substr(7);
  std::unordered_map<Pair, std::size_t, PairHash> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos)
      throw FormatError(path + ": expected 'left<TAB>right' on line " + std::to_string(lineno));
    Pair p{line.substr(0, tab), line.substr(tab + 1)};
    if (!seen.emplace(p, lineno).second)
      throw FormatError(path + ": duplicate merge on line " + std::to_string(lineno));
    m.merges.push_back(std::move(p));
  }
  return m;
}

}  // namespace bt::subword
