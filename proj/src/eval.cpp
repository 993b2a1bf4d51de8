#include "bt/eval.hpp"

#include <cmath>
#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "bt/errors.hpp"

namespace bt::eval {

namespace {

std::vector<std::string_view> tokens_of(const std::string& s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.emplace_back(s.data() + start, i - start);
  }
  return out;
}

std::string ngram_key(const std::vector<std::string_view>& toks, std::size_t start,
                      std::size_t n) {
  std::string key;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) key.push_back(' ');
    key += toks[start + k];
  }
  return key;
}

struct SentenceCounts {
  std::array<std::uint64_t, 4> matched{}, total{};
  std::uint64_t hyp_len = 0, ref_len = 0;
};

SentenceCounts count_sentence(const std::string& hyp, const std::string& ref,
                              unsigned max_n) {
  SentenceCounts c;
  const auto ht = tokens_of(hyp);
  const auto rt = tokens_of(ref);
  c.hyp_len = ht.size();
  c.ref_len = rt.size();
  for (unsigned n = 1; n <= max_n; ++n) {
    if (ht.size() < n) break;
    std::unordered_map<std::string, std::uint64_t> ref_counts;
    if (rt.size() >= n)
      for (std::size_t i = 0; i + n <= rt.size(); ++i) ++ref_counts[ngram_key(rt, i, n)];
    std::unordered_map<std::string, std::uint64_t> hyp_counts;
    for (std::size_t i = 0; i + n <= ht.size(); ++i) ++hyp_counts[ngram_key(ht, i, n)];
    c.total[n - 1] = ht.size() - n + 1;
    for (const auto& [g, hc] : hyp_counts) {
      auto it = ref_counts.find(g);
      if (it != ref_counts.end()) c.matched[n - 1] += std::min(hc, it->second);
    }
  }
  return c;
}

double brevity_penalty(std::uint64_t hyp_len, std::uint64_t ref_len) {
  if (hyp_len > ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
}

}  // namespace

BleuReport bleu(const corpus::Corpus& hyps, const corpus::Corpus& refs) {
  if (hyps.sentences.size() != refs.sentences.size())
    throw DataError("hypothesis/reference corpora are not aligned: " +
                    std::to_string(hyps.sentences.size()) + " vs " +
                    std::to_string(refs.sentences.size()) + " sentences");
  if (hyps.sentences.empty()) throw DataError("empty hypothesis corpus");

  const long long n = static_cast<long long>(hyps.sentences.size());
  std::uint64_t m1 = 0, m2 = 0, m3 = 0, m4 = 0, t1 = 0, t2 = 0, t3 = 0, t4 = 0;
  std::uint64_t hlen = 0, rlen = 0;

#pragma omp parallel for schedule(dynamic, 64) \
    reduction(+ : m1, m2, m3, m4, t1, t2, t3, t4, hlen, rlen)
  for (long long i = 0; i < n; ++i) {
    const SentenceCounts c = count_sentence(hyps.sentences[i], refs.sentences[i], 4);
    m1 += c.matched[0];
    m2 += c.matched[1];
    m3 += c.matched[2];
    m4 += c.matched[3];
    t1 += c.total[0];
    t2 += c.total[1];
    t3 += c.total[2];
    t4 += c.total[3];
    hlen += c.hyp_len;
    rlen += c.ref_len;
  }

  BleuReport r;
  r.precisions = {Precision{m1, t1}, Precision{m2, t2}, Precision{m3, t3},
                  Precision{m4, t4}};
  r.hyp_len = hlen;
  r.ref_len = rlen;
  if (hlen == 0) throw DataError("hypothesis corpus has no tokens");
  r.brevity_penalty = brevity_penalty(hlen, rlen);

  double log_sum = 0.0;
  bool zero = false;
  for (const auto& p : r.precisions) {
    if (p.total == 0) continue;  // order longer than every hypothesis: no evidence
    if (p.matched == 0) {
      zero = true;
      break;
    }
    log_sum += std::log(static_cast<double>(p.matched) / static_cast<double>(p.total));
  }
  r.bleu = zero ? 0.0 : 100.0 * r.brevity_penalty * std::exp(log_sum / 4.0);
  return r;
}

double sentence_bleu(const std::string& hyp, const std::string& ref) {
  const SentenceCounts c = count_sentence(hyp, ref, 4);
  if (c.hyp_len == 0) return 0.0;
  if (c.matched[0] == 0) return 0.0;
  double log_sum =
      std::log(static_cast<double>(c.matched[0]) / static_cast<double>(c.total[0]));
  for (int k = 1; k < 4; ++k) {
    log_sum += std::log(static_cast<double>(c.matched[k] + 1) /
                        static_cast<double>(c.total[k] + 1));
  }
  return 100.0 * brevity_penalty(c.hyp_len, c.ref_len) * std::exp(log_sum / 4.0);
}

std::vector<PhraseRow> phrase_accuracy_report(const corpus::Corpus& hyps,
                                              const corpus::Corpus& refs,
                                              const PhraseReportOptions& opts) {
  if (hyps.sentences.size() != refs.sentences.size())
    throw DataError("hypothesis/reference corpora are not aligned: " +
                    std::to_string(hyps.sentences.size()) + " vs " +
                    std::to_string(refs.sentences.size()) + " sentences");
  if (opts.n_min == 0 || opts.n_min > opts.n_max)
    throw ConfigError("phrase report needs 1 <= n_min <= n_max");

  std::unordered_map<std::string, std::pair<std::uint64_t, std::uint64_t>> rows;
  for (std::size_t i = 0; i < refs.sentences.size(); ++i) {
    const auto rt = tokens_of(refs.sentences[i]);
    const auto ht = tokens_of(hyps.sentences[i]);
    for (unsigned n = opts.n_min; n <= opts.n_max; ++n) {
      if (rt.size() < n) continue;
      std::unordered_map<std::string, std::uint64_t> rc, hc;
      for (std::size_t k = 0; k + n <= rt.size(); ++k) ++rc[ngram_key(rt, k, n)];
      if (ht.size() >= n)
        for (std::size_t k = 0; k + n <= ht.size(); ++k) ++hc[ngram_key(ht, k, n)];
      for (const auto& [g, count] : rc) {
        auto& row = rows[g];
        row.second += count;
        auto it = hc.find(g);
        if (it != hc.end()) row.first += std::min(count, it->second);
      }
    }
  }

  std::vector<PhraseRow> out;
  out.reserve(rows.size());
  for (auto& [g, cr] : rows) {
    if (cr.second < opts.min_ref_count) continue;
    PhraseRow row;
    row.ngram = g;
    row.correct = cr.first;
    row.ref_count = cr.second;
    row.accuracy = static_cast<double>(cr.first) / static_cast<double>(cr.second);
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end(), [](const PhraseRow& a, const PhraseRow& b) {
    if (a.correct != b.correct) return a.correct > b.correct;
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.ngram < b.ngram;
  });
  if (out.size() > opts.top_k) out.resize(opts.top_k);
  return out;
}

std::vector<ComparisonRow> compare_systems(const corpus::Corpus& hyps_a,
                                           const corpus::Corpus& hyps_b,
                                           const corpus::Corpus& refs) {
  if (hyps_a.sentences.size() != refs.sentences.size() ||
      hyps_b.sentences.size() != refs.sentences.size())
    throw DataError("compare_systems needs three corpora of equal length");
  std::vector<ComparisonRow> out;
  out.reserve(refs.sentences.size());
  for (std::size_t i = 0; i < refs.sentences.size(); ++i) {
    ComparisonRow row;
    row.hyp_a = hyps_a.sentences[i];
    row.hyp_b = hyps_b.sentences[i];
    row.ref = refs.sentences[i];
    row.bleu_a = sentence_bleu(row.hyp_a, row.ref);
    row.bleu_b = sentence_bleu(row.hyp_b, row.ref);
    row.delta = row.bleu_a - row.bleu_b;
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::json BleuReport::to_json() const {
  nlohmann::json j;
  j["bleu"] = bleu;
  j["brevity_penalty"] = brevity_penalty;
  j["hyp_len"] = hyp_len;
  j["ref_len"] = ref_len;
  j["tokenization"] = "whitespace";
  for (int n = 0; n < 4; ++n)
    j["precisions"].push_back(
        {{"n", n + 1}, {"matched", precisions[n].matched}, {"total", precisions[n].total}});
  return j;
}

std::string BleuReport::to_text() const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "BLEU = " << bleu << '\n';
  for (int n = 0; n < 4; ++n)
    os << "  p" << n + 1 << " = " << precisions[n].matched << "/" << precisions[n].total
       << (n == 3 ? "\n" : " ");
  os.precision(4);
  os << "  BP = " << brevity_penalty << "  hyp_len = " << hyp_len
     << "  ref_len = " << ref_len << '\n';
  return os.str();
}

}  // namespace bt::eval
