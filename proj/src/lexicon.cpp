#include "bt/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "bt/errors.hpp"
#include "bt/textnorm.hpp"
#include "bt/utf8.hpp"

namespace bt::lexicon {

namespace {

constexpr unsigned kInf = std::numeric_limits<unsigned>::max() / 2;

unsigned lev_u32(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return static_cast<unsigned>(m);
  if (m == 0) return static_cast<unsigned>(n);
  std::vector<unsigned> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<unsigned>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<unsigned>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const unsigned sub = prev[j - 1] + (a[i - 1] != b[j - 1] ? 1u : 0u);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::optional<unsigned> lev_within_u32(std::u32string_view a, std::u32string_view b,
                                       unsigned max_d) {
  const std::size_t n = a.size(), m = b.size();
  const std::size_t gap = n > m ? n - m : m - n;
  if (gap > max_d) return std::nullopt;
  if (n == 0) return static_cast<unsigned>(m);
  if (m == 0) return static_cast<unsigned>(n);

  std::vector<unsigned> prev(m + 1, kInf), cur(m + 1, kInf);
  for (std::size_t j = 0; j <= std::min<std::size_t>(m, max_d); ++j)
    prev[j] = static_cast<unsigned>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    std::fill(cur.begin(), cur.end(), kInf);
    const std::size_t lo = i > max_d ? i - max_d : 1;
    const std::size_t hi = std::min(m, i + max_d);
    if (lo == 1 && i <= max_d) cur[0] = static_cast<unsigned>(i);
    unsigned row_min = kInf;
    for (std::size_t j = lo; j <= hi; ++j) {
      const unsigned sub = prev[j - 1] + (a[i - 1] != b[j - 1] ? 1u : 0u);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > max_d) return std::nullopt;
    std::swap(prev, cur);
  }
  if (prev[m] > max_d) return std::nullopt;
  return prev[m];
}

}  // namespace

unsigned levenshtein(std::string_view a, std::string_view b) {
  return lev_u32(utf8::decode_lossy(a), utf8::decode_lossy(b));
}

std::optional<unsigned> levenshtein_within(std::string_view a, std::string_view b,
                                           unsigned max_d) {
  return lev_within_u32(utf8::decode_lossy(a), utf8::decode_lossy(b), max_d);
}

BilingualDictionary induce_dictionary(const subword::Vocabulary& vocab_tgt,
                                      std::string tgt_lang,
                                      const subword::Vocabulary& vocab_rel,
                                      std::string rel_lang, const InduceOptions& opts) {
  struct Item {
    std::string word;
    std::u32string norm;
    std::uint64_t count;
  };
  auto collect = [&](const subword::Vocabulary& v) {
    std::vector<Item> items;
    for (const auto& [w, c] : v.entries)
      if (c >= opts.min_count)
        items.push_back({w, utf8::decode_lossy(textnorm::strip_vowel_marks(w)), c});
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.word < b.word; });
    return items;
  };
  const std::vector<Item> tgt = collect(vocab_tgt);
  const std::vector<Item> rel = collect(vocab_rel);

  // Only rel words whose normalized length is within max_dist can match.
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_len;
  for (std::size_t r = 0; r < rel.size(); ++r) by_len[rel[r].norm.size()].push_back(r);

  std::vector<std::vector<DictEntry>> local(tgt.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long t = 0; t < static_cast<long long>(tgt.size()); ++t) {
    const std::size_t len = tgt[t].norm.size();
    const std::size_t from = len > opts.max_dist ? len - opts.max_dist : 0;
    for (std::size_t L = from; L <= len + opts.max_dist; ++L) {
      auto it = by_len.find(L);
      if (it == by_len.end()) continue;
      for (std::size_t r : it->second) {
        auto d = lev_within_u32(tgt[t].norm, rel[r].norm, opts.max_dist);
        if (d) local[t].push_back({tgt[t].word, rel[r].word, *d});
      }
    }
  }

  BilingualDictionary dict;
  dict.tgt_lang = std::move(tgt_lang);
  dict.rel_lang = std::move(rel_lang);
  for (auto& v : local)
    dict.pairs.insert(dict.pairs.end(), std::make_move_iterator(v.begin()),
                      std::make_move_iterator(v.end()));

  std::unordered_map<std::string_view, std::uint64_t> rel_count;
  rel_count.reserve(rel.size());
  for (const auto& it : rel) rel_count.emplace(it.word, it.count);
  std::sort(dict.pairs.begin(), dict.pairs.end(),
            [&rel_count](const DictEntry& a, const DictEntry& b) {
              if (a.tgt_word != b.tgt_word) return a.tgt_word < b.tgt_word;
              if (a.distance != b.distance) return a.distance < b.distance;
              const auto ca = rel_count.at(a.rel_word), cb = rel_count.at(b.rel_word);
              if (ca != cb) return ca > cb;
              return a.rel_word < b.rel_word;
            });
  return dict;
}

void save_dictionary(const BilingualDictionary& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& e : d.pairs)
    out << e.tgt_word << '\t' << e.rel_word << '\t' << e.distance << '\n';
  if (!out.flush()) throw IoError("write failed: " + path);
}

BilingualDictionary load_dictionary(const std::string& path, std::string tgt_lang,
                                    std::string rel_lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  BilingualDictionary d;
  d.tgt_lang = std::move(tgt_lang);
  d.rel_lang = std::move(rel_lang);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      throw FormatError(path + ": expected three tab-separated columns on line " +
                        std::to_string(lineno));
    DictEntry e;
    e.tgt_word = line.substr(0, t1);
    e.rel_word = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string dist = line.substr(t2 + 1);
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(dist, &pos);
      if (pos != dist.size()) throw std::invalid_argument(dist);
      e.distance = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw FormatError(path + ": bad distance '" + dist + "' on line " +
                        std::to_string(lineno));
    }
    d.pairs.push_back(std::move(e));
  }
  return d;
}

}  // namespace bt::lexicon
