#include "bt/translate.hpp"

#include <cstdlib>
#include <unordered_map>

#include "bt/errors.hpp"

namespace bt::translate {

std::vector<std::string> Translator::translate_batch(
    const std::vector<std::string>& sentences) const {
  for (std::size_t i = 0; i < sentences.size(); ++i)
    if (sentences[i].find('\n') != std::string::npos)
      throw DataError("input sentence " + std::to_string(i) + " contains a line break");
  std::vector<std::string> out = do_translate(sentences);
  if (out.size() != sentences.size())
    throw ProtocolError("backend '" + id() + "' returned " + std::to_string(out.size()) +
                        " translations for " + std::to_string(sentences.size()) +
                        " sentences");
  return out;
}

namespace {

class IdentityTranslator final : public Translator {
 public:
  IdentityTranslator(std::string src, std::string tgt)
      : Translator(std::move(src), std::move(tgt), "identity") {}

 protected:
  std::vector<std::string> do_translate(const std::vector<std::string>& in) const override {
    return in;
  }
};

class DictionaryTranslator final : public Translator {
 public:
  DictionaryTranslator(const lexicon::BilingualDictionary& dict, DictDirection dir)
      : Translator(dir == DictDirection::TgtToRel ? dict.tgt_lang : dict.rel_lang,
                   dir == DictDirection::TgtToRel ? dict.rel_lang : dict.tgt_lang,
                   "dict(" + std::to_string(dict.pairs.size()) + " pairs, " +
                       (dir == DictDirection::TgtToRel ? "tgt->rel" : "rel->tgt") + ")") {
    // First entry in canonical order wins when a word has several translations.
    for (const auto& e : dict.pairs) {
      if (dir == DictDirection::TgtToRel)
        map_.emplace(e.tgt_word, e.rel_word);
      else
        map_.emplace(e.rel_word, e.tgt_word);
    }
  }

 protected:
  std::vector<std::string> do_translate(const std::vector<std::string>& in) const override {
    std::vector<std::string> out;
    out.reserve(in.size());
    for (const auto& sentence : in) out.push_back(translate_sentence(sentence));
    return out;
  }

 private:
  std::string translate_sentence(const std::string& s) const {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    bool first = true;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
      std::size_t start = i;
      while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
      if (i == start) break;
      if (!first) out.push_back(' ');
      first = false;
      const std::string word = s.substr(start, i - start);
      auto it = map_.find(word);
      out += it == map_.end() ? word : it->second;
    }
    return out;
  }

  std::unordered_map<std::string, std::string> map_;
};

class PivotTranslator final : public Translator {
 public:
  PivotTranslator(TranslatorPtr first, TranslatorPtr second)
      : Translator(first->src_lang(), second->tgt_lang(),
                   "pivot(" + first->id() + ", " + second->id() + ")"),
        first_(std::move(first)),
        second_(std::move(second)) {}

 protected:
  std::vector<std::string> do_translate(const std::vector<std::string>& in) const override {
    return stage(2, second_, stage(1, first_, in));
  }

 private:
  std::vector<std::string> stage(int n, const TranslatorPtr& t,
                                 const std::vector<std::string>& batch) const {
    try {
      return t->translate_batch(batch);
    } catch (const ProtocolError& e) {
      throw ProtocolError(stage_msg(n, t) + e.what());
    } catch (const BackendError& e) {
      throw BackendError(stage_msg(n, t) + e.what());
    }
  }

  std::string stage_msg(int n, const TranslatorPtr& t) const {
    return "pivot stage " + std::to_string(n) + " (" + t->src_lang() + "->" +
           t->tgt_lang() + "): ";
  }

  TranslatorPtr first_, second_;
};

}  // namespace

TranslatorPtr identity_translator(std::string src_lang, std::string tgt_lang) {
  return std::make_shared<IdentityTranslator>(std::move(src_lang), std::move(tgt_lang));
}

TranslatorPtr dictionary_translator(const lexicon::BilingualDictionary& dict,
                                    DictDirection direction) {
  return std::make_shared<DictionaryTranslator>(dict, direction);
}

TranslatorPtr pivot(TranslatorPtr first, TranslatorPtr second) {
  if (!first || !second) throw ConfigError("pivot requires two translators");
  if (first->tgt_lang() != second->src_lang())
    throw ConfigError("pivot chain mismatch: first stage produces '" + first->tgt_lang() +
                      "', second stage consumes '" + second->src_lang() + "'");
  return std::make_shared<PivotTranslator>(std::move(first), std::move(second));
}

namespace {

double timeout_from_env_or(double fallback) {
  const char* env = std::getenv("BTAUG_BACKEND_TIMEOUT");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0))
    throw ConfigError("invalid BTAUG_BACKEND_TIMEOUT value: " + std::string(env));
  return v;
}

}  // namespace

TranslatorPtr external_translator(const std::string& spec, std::string src_lang,
                                  std::string tgt_lang, BackendOptions opts) {
  opts.timeout_sec = timeout_from_env_or(opts.timeout_sec);
  if (opts.batch_size == 0) opts.batch_size = 1;
  if (spec.rfind("cmd:", 0) == 0)
    return subprocess_translator(spec.substr(4), std::move(src_lang), std::move(tgt_lang),
                                 opts);
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
    return service_translator(spec, std::move(src_lang), std::move(tgt_lang), opts);
  throw ConfigError("unrecognized external backend spec '" + spec +
                    "' (expected cmd:... or http(s)://...)");
}

TranslatorPtr make_translator(const std::string& spec, std::string src_lang,
                              std::string tgt_lang, BackendOptions opts) {
  if (spec == "identity")
    return identity_translator(std::move(src_lang), std::move(tgt_lang));
  if (spec.rfind("dict:", 0) == 0) {
    const std::string rest = spec.substr(5);
    const std::size_t colon = rest.rfind(':');
    if (colon == std::string::npos)
      throw ConfigError("dictionary backend spec must be dict:FILE:fwd or dict:FILE:rev");
    const std::string path = rest.substr(0, colon);
    const std::string dir = rest.substr(colon + 1);
    if (dir != "fwd" && dir != "rev")
      throw ConfigError("dictionary backend direction must be fwd or rev, got '" + dir +
                        "'");
    lexicon::BilingualDictionary dict =
        dir == "fwd" ? lexicon::load_dictionary(path, src_lang, tgt_lang)
                     : lexicon::load_dictionary(path, tgt_lang, src_lang);
    return dictionary_translator(dict, dir == "fwd" ? DictDirection::TgtToRel
                                                    : DictDirection::RelToTgt);
  }
  return external_translator(spec, std::move(src_lang), std::move(tgt_lang), opts);
}

}  // namespace bt::translate
