#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bt/lexicon.hpp"

namespace bt::translate {

// Sentence-batch transducer. Implementations are immutable and shareable
// across threads; concurrent translate_batch calls on distinct batches are
// allowed. The wire contract -- exactly one output sentence per input, in
// input order -- is enforced here, on top of whatever the backend does.
class Translator {
 public:
  virtual ~Translator() = default;
  Translator(const Translator&) = delete;
  Translator& operator=(const Translator&) = delete;

  const std::string& src_lang() const { return src_lang_; }
  const std::string& tgt_lang() const { return tgt_lang_; }
  const std::string& id() const { return id_; }

  // Throws DataError when an input contains a line break, ProtocolError when
  // the backend returns the wrong count, BackendError on backend failure.
  std::vector<std::string> translate_batch(const std::vector<std::string>& sentences) const;

 protected:
  Translator(std::string src_lang, std::string tgt_lang, std::string id)
      : src_lang_(std::move(src_lang)), tgt_lang_(std::move(tgt_lang)), id_(std::move(id)) {}

  virtual std::vector<std::string> do_translate(const std::vector<std::string>&) const = 0;

 private:
  std::string src_lang_, tgt_lang_, id_;
};

using TranslatorPtr = std::shared_ptr<const Translator>;

TranslatorPtr identity_translator(std::string src_lang, std::string tgt_lang);

enum class DictDirection { TgtToRel, RelToTgt };

// Word-by-word replacement using the first dictionary entry in canonical
// order; out-of-dictionary tokens are copied unchanged.
TranslatorPtr dictionary_translator(const lexicon::BilingualDictionary& dict,
                                    DictDirection direction);

struct BackendOptions {
  std::size_t batch_size = 64;   // internal chunking; invisible in the results
  double timeout_sec = 300.0;    // per batch; BTAUG_BACKEND_TIMEOUT overrides
};

// spec forms:
//   "cmd:<shell command>"   line-based subprocess (one sentence per line)
//   "http://..." or "https://..."  JSON service endpoint
// Constructing a subprocess backend sets the process-wide SIGPIPE disposition
// to ignored.
TranslatorPtr external_translator(const std::string& spec, std::string src_lang,
                                  std::string tgt_lang, BackendOptions opts = {});

// Composition through an intermediate language; first.tgt_lang must equal
// second.src_lang. Errors from a stage are rethrown naming that stage.
TranslatorPtr pivot(TranslatorPtr first, TranslatorPtr second);

// Backend factory for CLI/config specs: "identity", "dict:FILE:fwd",
// "dict:FILE:rev", "cmd:...", "http(s)://...".
TranslatorPtr make_translator(const std::string& spec, std::string src_lang,
                              std::string tgt_lang, BackendOptions opts = {});

// Internal constructor shared by external_translator/make_translator.
TranslatorPtr subprocess_translator(std::string command, std::string src_lang,
                                    std::string tgt_lang, BackendOptions opts);
TranslatorPtr service_translator(std::string url, std::string src_lang,
                                 std::string tgt_lang, BackendOptions opts);

}  // namespace bt::translate
