#include "bt/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "bt/errors.hpp"
#include "bt/rng.hpp"
#include "bt/utf8.hpp"

namespace bt::corpus {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& data) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t nl = data.find('\n', start);
    if (nl == std::string::npos) {
      lines.emplace_back(data.substr(start));
      break;
    }
    lines.emplace_back(data.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

void check_line(const std::string& line, std::size_t lineno, const std::string& path,
                bool keep_empty) {
  if (!utf8::valid(line))
    throw FormatError(path + ": invalid UTF-8 on line " + std::to_string(lineno));
  if (line.empty() && !keep_empty)
    throw FormatError(path + ": empty sentence at line " + std::to_string(lineno));
}

void write_lines(std::ostream& out, const std::vector<std::string>& lines,
                 const std::string& path) {
  for (const auto& s : lines) {
    if (s.find('\n') != std::string::npos)
      throw DataError("sentence contains a line break, refusing to write " + path);
    out << s << '\n';
  }
}

enum class Verdict : unsigned char { Keep, Control, Empty, TooLong, Script };

bool has_forbidden_control(const std::string& s) {
  for (unsigned char c : s)
    if (c < 0x20 && c != '\t') return true;
  return false;
}

// Malformed bytes count as opaque word characters; cleaning never throws.
std::size_t next_cp(const std::string& s, std::size_t i, char32_t& cp) {
  const std::size_t n = utf8::decode_one(s, i, cp);
  if (n == 0) {
    cp = 0xFFFD;
    return 1;
  }
  return n;
}

std::string collapse_ws(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    const std::size_t n = next_cp(s, i, cp);
    if (utf8::is_space(cp)) {
      pending = !out.empty();
    } else {
      if (pending) out.push_back(' ');
      pending = false;
      out.append(s, i, n);
    }
    i += n;
  }
  return out;
}

bool all_space(const std::string& s) {
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    i += next_cp(s, i, cp);
    if (!utf8::is_space(cp)) return false;
  }
  return true;
}

std::size_t count_tokens(const std::string& s) {
  std::size_t n = 0;
  bool in_tok = false;
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    i += next_cp(s, i, cp);
    if (utf8::is_space(cp)) {
      in_tok = false;
    } else if (!in_tok) {
      in_tok = true;
      ++n;
    }
  }
  return n;
}

bool in_script(char32_t cp, const std::string& script) {
  if (script == "ethiopic") {
    return (cp >= 0x1200 && cp <= 0x139F) || (cp >= 0x2D80 && cp <= 0x2DDF) ||
           (cp >= 0xAB00 && cp <= 0xAB2F);
  }
  if (script == "latin") {
    return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z') ||
           (cp >= 0xC0 && cp <= 0x24F);
  }
  return true;
}

bool script_fraction_ok(const std::string& s, const CleanRules& rules) {
  std::size_t word_chars = 0, matching = 0;
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    i += next_cp(s, i, cp);
    if (utf8::is_space(cp) || utf8::is_punct(cp) || (cp >= '0' && cp <= '9')) continue;
    ++word_chars;
    if (in_script(cp, rules.script)) ++matching;
  }
  if (word_chars == 0) return true;
  return static_cast<double>(matching) >=
         rules.min_script_fraction * static_cast<double>(word_chars);
}

Verdict clean_line(const std::string& in, const CleanRules& rules, std::string& out) {
  if (rules.drop_control && has_forbidden_control(in)) return Verdict::Control;
  out = rules.collapse_whitespace ? collapse_ws(in) : in;
  if (rules.drop_empty && (out.empty() || (!rules.collapse_whitespace && all_space(out))))
    return Verdict::Empty;
  if (rules.max_tokens > 0 && count_tokens(out) > rules.max_tokens) return Verdict::TooLong;
  if (!rules.script.empty() && !script_fraction_ok(out, rules)) return Verdict::Script;
  return Verdict::Keep;
}

void tally(Verdict v, CleanStats& st) {
  switch (v) {
    case Verdict::Keep: ++st.kept; break;
    case Verdict::Control: ++st.dropped_control; break;
    case Verdict::Empty: ++st.dropped_empty; break;
    case Verdict::TooLong: ++st.dropped_too_long; break;
    case Verdict::Script: ++st.dropped_script; break;
  }
}

}  // namespace

Corpus load_corpus(const std::string& path, std::string lang, bool keep_empty) {
  Corpus c;
  c.lang = std::move(lang);
  c.sentences = split_lines(read_file(path));
  for (std::size_t i = 0; i < c.sentences.size(); ++i)
    check_line(c.sentences[i], i + 1, path, keep_empty);
  return c;
}

void save_corpus(const Corpus& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_lines(out, c.sentences, path);
  if (!out.flush()) throw IoError("write failed: " + path);
}

Corpus clean(const Corpus& c, const CleanRules& rules, CleanStats* stats) {
  const std::size_t n = c.sentences.size();
  std::vector<std::string> cleaned(n);
  std::vector<Verdict> verdicts(n, Verdict::Keep);

#pragma omp parallel for schedule(dynamic, 256)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    verdicts[i] = clean_line(c.sentences[i], rules, cleaned[i]);

  Corpus out;
  out.lang = c.lang;
  CleanStats st;
  st.input = n;
  for (std::size_t i = 0; i < n; ++i) {
    tally(verdicts[i], st);
    if (verdicts[i] == Verdict::Keep) out.sentences.push_back(std::move(cleaned[i]));
  }
  if (stats) *stats = st;
  return out;
}

ParallelCorpus clean_parallel(const ParallelCorpus& p, const CleanRules& rules,
                              CleanStats* stats) {
  const std::size_t n = p.pairs.size();
  std::vector<SentencePair> cleaned(n);
  std::vector<Verdict> verdicts(n, Verdict::Keep);

#pragma omp parallel for schedule(dynamic, 256)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    Verdict a = clean_line(p.pairs[i].src, rules, cleaned[i].src);
    Verdict b = clean_line(p.pairs[i].tgt, rules, cleaned[i].tgt);
    // A pair survives only if both sides do; report the first failing side.
    verdicts[i] = a != Verdict::Keep ? a : b;
  }

  ParallelCorpus out;
  out.src_lang = p.src_lang;
  out.tgt_lang = p.tgt_lang;
  CleanStats st;
  st.input = n;
  for (std::size_t i = 0; i < n; ++i) {
    tally(verdicts[i], st);
    if (verdicts[i] == Verdict::Keep) out.pairs.push_back(std::move(cleaned[i]));
  }
  if (stats) *stats = st;
  return out;
}

Corpus dedup(const Corpus& c) {
  Corpus out;
  out.lang = c.lang;
  std::unordered_set<std::string_view> seen;
  seen.reserve(c.sentences.size());
  for (const auto& s : c.sentences)
    if (seen.insert(s).second) out.sentences.push_back(s);
  return out;
}

ParallelCorpus dedup_parallel(const ParallelCorpus& p) {
  ParallelCorpus out;
  out.src_lang = p.src_lang;
  out.tgt_lang = p.tgt_lang;
  std::unordered_set<std::string> seen;
  seen.reserve(p.pairs.size());
  for (const auto& pr : p.pairs) {
    // '\n' cannot occur inside a sentence, so it is a safe join.
    if (seen.insert(pr.src + '\n' + pr.tgt).second) out.pairs.push_back(pr);
  }
  return out;
}

SplitResult split(const ParallelCorpus& p, const SplitSpec& spec) {
  const std::size_t n = p.pairs.size();
  if (spec.dev_n + spec.test_n >= n)
    throw DataError("split sizes dev=" + std::to_string(spec.dev_n) +
                    " test=" + std::to_string(spec.test_n) +
                    " do not leave a training set for corpus of size " + std::to_string(n));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  rng::SplitMix64 g(rng::substream(spec.seed, "corpus.split"));
  rng::shuffle(idx, g);

  SplitResult r;
  for (auto* part : {&r.train, &r.dev, &r.test}) {
    part->src_lang = p.src_lang;
    part->tgt_lang = p.tgt_lang;
  }
  for (std::size_t i = 0; i < spec.dev_n; ++i) r.dev.pairs.push_back(p.pairs[idx[i]]);
  for (std::size_t i = spec.dev_n; i < spec.dev_n + spec.test_n; ++i)
    r.test.pairs.push_back(p.pairs[idx[i]]);
  for (std::size_t i = spec.dev_n + spec.test_n; i < n; ++i)
    r.train.pairs.push_back(p.pairs[idx[i]]);
  return r;
}

ParallelCorpus mix(const ParallelCorpus& authentic, const ParallelCorpus& synthetic) {
  if (authentic.src_lang != synthetic.src_lang || authentic.tgt_lang != synthetic.tgt_lang)
    throw ConfigError("cannot mix corpora with different language tags: " +
                      authentic.src_lang + "-" + authentic.tgt_lang + " vs " +
                      synthetic.src_lang + "-" + synthetic.tgt_lang);
  ParallelCorpus out;
  out.src_lang = authentic.src_lang;
  out.tgt_lang = authentic.tgt_lang;
  out.pairs.reserve(authentic.pairs.size() + synthetic.pairs.size());
  out.pairs.insert(out.pairs.end(), authentic.pairs.begin(), authentic.pairs.end());
  out.pairs.insert(out.pairs.end(), synthetic.pairs.begin(), synthetic.pairs.end());
  return out;
}

ParallelCorpus load_parallel(const std::string& src_path, const std::string& tgt_path,
                             std::string src_lang, std::string tgt_lang, bool keep_empty) {
  Corpus src = load_corpus(src_path, src_lang, keep_empty);
  Corpus tgt = load_corpus(tgt_path, tgt_lang, keep_empty);
  if (src.sentences.size() != tgt.sentences.size())
    throw FormatError("line count mismatch: " + src_path + " has " +
                      std::to_string(src.sentences.size()) + " lines, " + tgt_path +
                      " has " + std::to_string(tgt.sentences.size()));
  ParallelCorpus p;
  p.src_lang = std::move(src_lang);
  p.tgt_lang = std::move(tgt_lang);
  p.pairs.reserve(src.sentences.size());
  for (std::size_t i = 0; i < src.sentences.size(); ++i)
    p.pairs.push_back({std::move(src.sentences[i]), std::move(tgt.sentences[i])});
  return p;
}

ParallelCorpus load_parallel_tsv(const std::string& path, std::string src_lang,
                                 std::string tgt_lang, bool keep_empty) {
  ParallelCorpus p;
  p.src_lang = std::move(src_lang);
  p.tgt_lang = std::move(tgt_lang);
  const auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (!utf8::valid(line))
      throw FormatError(path + ": invalid UTF-8 on line " + std::to_string(i + 1));
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError(path + ": expected two tab-separated columns on line " +
                        std::to_string(i + 1));
    if (line.find('\t', tab + 1) != std::string::npos)
      throw FormatError(path + ": more than two columns on line " + std::to_string(i + 1));
    SentencePair pr{line.substr(0, tab), line.substr(tab + 1)};
    if (!keep_empty && (pr.src.empty() || pr.tgt.empty()))
      throw FormatError(path + ": empty sentence at line " + std::to_string(i + 1));
    p.pairs.push_back(std::move(pr));
  }
  return p;
}

void save_parallel(const ParallelCorpus& p, const std::string& src_path,
                   const std::string& tgt_path) {
  Corpus src{p.src_lang, {}}, tgt{p.tgt_lang, {}};
  src.sentences.reserve(p.pairs.size());
  tgt.sentences.reserve(p.pairs.size());
  for (const auto& pr : p.pairs) {
    src.sentences.push_back(pr.src);
    tgt.sentences.push_back(pr.tgt);
  }
  save_corpus(src, src_path);
  save_corpus(tgt, tgt_path);
}

void save_parallel_tsv(const ParallelCorpus& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& pr : p.pairs) {
    if (pr.src.find_first_of("\t\n") != std::string::npos ||
        pr.tgt.find_first_of("\t\n") != std::string::npos)
      throw DataError("sentence contains tab or line break, refusing to write TSV " + path);
    out << pr.src << '\t' << pr.tgt << '\n';
  }
  if (!out.flush()) throw IoError("write failed: " + path);
}

std::uint64_t checksum(const Corpus& c) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& s : c.sentences) {
    mix(s);
    mix("\n");
  }
  return h;
}

std::uint64_t checksum(const ParallelCorpus& p) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& pr : p.pairs) {
    mix(pr.src);
    mix("\t");
    mix(pr.tgt);
    mix("\n");
  }
  return h;
}

}  // namespace bt::corpus
