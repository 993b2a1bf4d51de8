#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "bt/rng.hpp"

namespace testutil {

// Self-deleting temporary directory.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "btaug-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path path() const { return path_; }

  std::string write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

inline std::string random_word(bt::rng::SplitMix64& g, std::size_t min_len,
                               std::size_t max_len, std::string_view alphabet = "abcdef") {
  const std::size_t len = min_len + g.below(max_len - min_len + 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(alphabet[g.below(alphabet.size())]);
  return w;
}

// Builds a word from whole pieces (multi-byte codepoints stay intact).
inline std::string random_word_from(bt::rng::SplitMix64& g,
                                    const std::vector<std::string>& pieces,
                                    std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + g.below(max_len - min_len + 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w += pieces[g.below(pieces.size())];
  return w;
}

inline std::string random_sentence(bt::rng::SplitMix64& g, std::size_t min_words,
                                   std::size_t max_words,
                                   std::string_view alphabet = "abcdef") {
  const std::size_t n = min_words + g.below(max_words - min_words + 1);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s.push_back(' ');
    s += random_word(g, 1, 8, alphabet);
  }
  return s;
}

}  // namespace testutil
