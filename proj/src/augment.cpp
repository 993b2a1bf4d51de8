#include "bt/augment.hpp"

#include <cctype>
#include <chrono>
#include <ctime>

#include "bt/errors.hpp"

namespace bt::augment {

std::string_view kind_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::Direct: return "direct";
    case StrategyKind::Indirect: return "indirect";
    case StrategyKind::PivotSup: return "pivot_sup";
    case StrategyKind::PivotUnsup: return "pivot_unsup";
  }
  return "?";
}

StrategyKind kind_from_name(std::string_view name) {
  if (name == "direct") return StrategyKind::Direct;
  if (name == "indirect") return StrategyKind::Indirect;
  if (name == "pivot_sup") return StrategyKind::PivotSup;
  if (name == "pivot_unsup") return StrategyKind::PivotUnsup;
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "' (expected direct, indirect, pivot_sup or pivot_unsup)");
}

namespace {

bool blank(const std::string& s) {
  for (unsigned char c : s)
    if (!std::isspace(c)) return false;
  return true;
}

std::size_t token_count(const std::string& s) {
  std::size_t n = 0;
  bool in_tok = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      in_tok = false;
    } else if (!in_tok) {
      in_tok = true;
      ++n;
    }
  }
  return n;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) s.push_back(digits[(v >> shift) & 0xF]);
  return s;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

BacktranslateResult backtranslate(const corpus::Corpus& mono_tgt,
                                  const translate::TranslatorPtr& backward,
                                  const BacktranslateOptions& opts) {
  if (!backward) throw ConfigError("backtranslate requires a backward translator");
  if (!opts.allow_lang_mismatch && backward->src_lang() != mono_tgt.lang)
    throw ConfigError("monolingual corpus is '" + mono_tgt.lang +
                      "' but the backward translator consumes '" + backward->src_lang() +
                      "'");

  const std::vector<std::string> hyps = backward->translate_batch(mono_tgt.sentences);

  BacktranslateResult res;
  res.synthetic.src_lang = backward->tgt_lang();
  res.synthetic.tgt_lang = mono_tgt.lang;
  res.synthetic.pairs.reserve(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (blank(hyps[i])) {
      ++res.dropped_empty;
      continue;
    }
    if (opts.length_ratio_filter) {
      const double syn = static_cast<double>(token_count(hyps[i]));
      const double tgt = static_cast<double>(token_count(mono_tgt.sentences[i]));
      const double ratio = tgt > 0 ? syn / tgt : 0.0;
      if (ratio < opts.min_ratio || ratio > opts.max_ratio) {
        ++res.dropped_ratio;
        continue;
      }
    }
    res.synthetic.pairs.push_back({hyps[i], mono_tgt.sentences[i]});
  }
  return res;
}

nlohmann::json AugmentManifest::to_json() const {
  nlohmann::json j;
  j["strategy"] = strategy;
  j["inputs"]["mono_tgt"] = {{"lang", mono_lang},
                             {"count", mono_count},
                             {"checksum", mono_checksum}};
  j["inputs"]["authentic"] = {{"langs", authentic_langs},
                              {"count", authentic_count},
                              {"checksum", authentic_checksum}};
  j["backends"]["backward"] = backward_id;
  j["notes"] = notes;
  j["dropped"] = dropped;
  j["outputs"] = {{"synthetic_count", synthetic_count},
                  {"mixed_count", mixed_count},
                  {"mixed_checksum", mixed_checksum}};
  j["seed"] = seed;
  j["timestamp"] = timestamp;
  return j;
}

RunResult run_strategy(const BtStrategy& cfg, const corpus::Corpus& mono_tgt,
                       const corpus::ParallelCorpus& authentic, std::uint64_t seed,
                       const BacktranslateOptions& opts) {
  translate::TranslatorPtr backward;
  BacktranslateOptions bt_opts = opts;
  std::vector<std::string> notes;

  switch (cfg.kind) {
    case StrategyKind::Direct:
      if (!cfg.tgt_to_src)
        throw ConfigError("strategy direct needs a tgt_to_src translator");
      backward = cfg.tgt_to_src;
      break;
    case StrategyKind::Indirect:
      if (!cfg.rel_to_src)
        throw ConfigError("strategy indirect needs a rel_to_src translator");
      backward = cfg.rel_to_src;
      // The rel->src model is fed tgt text on purpose; the shared script makes
      // this a usable proxy.
      bt_opts.allow_lang_mismatch = true;
      notes.push_back("indirect: rel->src backend applied to tgt text (" +
                      backward->src_lang() + " backend, " + mono_tgt.lang + " input)");
      break;
    case StrategyKind::PivotSup:
    case StrategyKind::PivotUnsup:
      if (!cfg.tgt_to_rel || !cfg.rel_to_src)
        throw ConfigError("strategy " + std::string(kind_name(cfg.kind)) +
                          " needs tgt_to_rel and rel_to_src translators");
      backward = translate::pivot(cfg.tgt_to_rel, cfg.rel_to_src);
      notes.push_back(std::string("pivot tgt_to_rel backend provenance: ") +
                      (cfg.kind == StrategyKind::PivotSup ? "supervised" : "unsupervised"));
      break;
  }

  if (backward->tgt_lang() != authentic.src_lang)
    throw ConfigError("backward translator produces '" + backward->tgt_lang() +
                      "' but the authentic corpus source side is '" + authentic.src_lang +
                      "'");
  if (mono_tgt.lang != authentic.tgt_lang)
    throw ConfigError("monolingual corpus is '" + mono_tgt.lang +
                      "' but the authentic corpus target side is '" + authentic.tgt_lang +
                      "'");

  const BacktranslateResult bt = backtranslate(mono_tgt, backward, bt_opts);

  RunResult r;
  r.mixed = corpus::mix(authentic, bt.synthetic);

  AugmentManifest& m = r.manifest;
  m.strategy = std::string(kind_name(cfg.kind));
  m.mono_lang = mono_tgt.lang;
  m.mono_count = mono_tgt.sentences.size();
  m.mono_checksum = hex64(corpus::checksum(mono_tgt));
  m.authentic_langs = authentic.src_lang + "-" + authentic.tgt_lang;
  m.authentic_count = authentic.pairs.size();
  m.authentic_checksum = hex64(corpus::checksum(authentic));
  m.backward_id = backward->id();
  m.notes = std::move(notes);
  m.dropped = bt.dropped();
  m.synthetic_count = bt.synthetic.pairs.size();
  m.mixed_count = r.mixed.pairs.size();
  m.mixed_checksum = hex64(corpus::checksum(r.mixed));
  m.seed = seed;
  m.timestamp = utc_now();
  return r;
}

}  // namespace bt::augment
