#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bt/lexicon.hpp"

namespace bt::embalign {

// Word-vector table in file order. All vectors share one dimension and all
// components are finite.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<std::string> words;
  std::vector<std::vector<double>> vectors;
  std::unordered_map<std::string, std::size_t> index;

  const std::vector<double>* find(std::string_view w) const;
  void add(std::string word, std::vector<double> vec);
};

// Row-major dim x dim orthogonal matrix.
struct OrthogonalMap {
  std::size_t dim = 0;
  std::vector<double> m;

  std::vector<double> apply(std::span<const double> x) const;
};

// Thin SVD a = u * diag(s) * v^T via one-sided Jacobi rotations: rows x cols
// input (row-major), u is rows x k, v is cols x k, k = min(rows, cols), with
// singular values sorted descending. Columns of u belonging to zero singular
// values are completed to an orthonormal set, so u and v always have
// orthonormal columns.
struct SvdResult {
  std::size_t rows = 0, cols = 0, k = 0;
  std::vector<double> u;  // row-major rows x k
  std::vector<double> s;  // k
  std::vector<double> v;  // row-major cols x k
};
SvdResult svd(std::span<const double> a, std::size_t rows, std::size_t cols);

struct AlignStats {
  std::size_t used_pairs = 0;
  std::size_t skipped_missing = 0;
  std::size_t skipped_duplicate = 0;
  std::size_t skipped_zero = 0;
};

// Solves the orthogonal Procrustes problem over the dictionary pairs: the map
// W minimizing sum ||W x_i - y_i||^2 with x from tab_tgt and y from tab_rel,
// computed as W = U V^T from the SVD of Y X^T. Vectors are unit-normalized
// first; duplicate pairs are collapsed and pairs with missing words skipped.
OrthogonalMap procrustes_align(const EmbeddingTable& tab_tgt, const EmbeddingTable& tab_rel,
                               const lexicon::BilingualDictionary& dict,
                               AlignStats* stats = nullptr);

struct Candidate {
  std::string word;
  double similarity = 0;
};

// Top-k rel words by cosine similarity to W x_word; ties broken by table order.
std::vector<Candidate> nn_translate(std::string_view word, const OrthogonalMap& map,
                                    const EmbeddingTable& tab_tgt,
                                    const EmbeddingTable& tab_rel, std::size_t k);

// Text format: header "count dim", then one "word v1 .. vdim" row per word.
EmbeddingTable load_embeddings(const std::string& path);

// Map file: "dim" header plus dim rows of dim floats.
void save_map(const OrthogonalMap& map, const std::string& path);
OrthogonalMap load_map(const std::string& path);

}  // namespace bt::embalign
