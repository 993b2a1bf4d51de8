#include "bt/embalign.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "bt/errors.hpp"

namespace bt::embalign {

const std::vector<double>* EmbeddingTable::find(std::string_view w) const {
  auto it = index.find(std::string(w));
  return it == index.end() ? nullptr : &vectors[it->second];
}

void EmbeddingTable::add(std::string word, std::vector<double> vec) {
  if (dim == 0) dim = vec.size();
  if (vec.size() != dim)
    throw ConfigError("vector for '" + word + "' has dimension " +
                      std::to_string(vec.size()) + ", table has " + std::to_string(dim));
  if (index.count(word)) throw ConfigError("duplicate word '" + word + "'");
  for (double v : vec)
    if (!std::isfinite(v)) throw ConfigError("non-finite component for '" + word + "'");
  index.emplace(word, words.size());
  words.push_back(std::move(word));
  vectors.push_back(std::move(vec));
}

std::vector<double> OrthogonalMap::apply(std::span<const double> x) const {
  std::vector<double> y(dim, 0.0);
  for (std::size_t r = 0; r < dim; ++r) {
    double acc = 0;
    const double* row = m.data() + r * dim;
    for (std::size_t c = 0; c < dim; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

namespace {

constexpr double kJacobiTol = 1e-12;
constexpr int kMaxSweeps = 64;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

SvdResult svd(std::span<const double> a, std::size_t rows, std::size_t cols) {
  if (rows * cols != a.size()) throw ConfigError("svd: shape does not match data size");
  if (rows == 0 || cols == 0) throw ConfigError("svd: empty matrix");
  if (rows < cols) {
    // Work on the transpose and swap factors back.
    std::vector<double> at(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) at[c * rows + r] = a[r * cols + c];
    SvdResult t = svd(at, cols, rows);
    SvdResult out;
    out.rows = rows;
    out.cols = cols;
    out.k = t.k;
    out.s = std::move(t.s);
    out.u = std::move(t.v);
    out.v = std::move(t.u);
    return out;
  }

  const std::size_t m = rows, n = cols;
  // Column-major working copy; B starts as A and converges to U * diag(S).
  std::vector<std::vector<double>> B(n, std::vector<double>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) B[c][r] = a[r * n + c];
  // V accumulates the right rotations, column-major as well.
  std::vector<std::vector<double>> V(n, std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < n; ++c) V[c][c] = 1.0;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(B[p], B[p]);
        const double beta = dot(B[q], B[q]);
        const double gamma = dot(B[p], B[q]);
        const double denom = std::sqrt(alpha * beta);
        if (denom == 0.0 || std::abs(gamma) <= kJacobiTol * denom) continue;
        worst = std::max(worst, std::abs(gamma) / denom);
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < m; ++r) {
          const double bp = B[p][r], bq = B[q][r];
          B[p][r] = c * bp - s * bq;
          B[q][r] = s * bp + c * bq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vp = V[p][r], vq = V[q][r];
          V[p][r] = c * vp - s * vq;
          V[q][r] = s * vp + c * vq;
        }
      }
    }
    if (worst < kJacobiTol) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t c = 0; c < n; ++c) sigma[c] = std::sqrt(dot(B[c], B[c]));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&sigma](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdResult out;
  out.rows = m;
  out.cols = n;
  out.k = n;
  out.s.resize(n);
  out.u.assign(m * n, 0.0);
  out.v.assign(n * n, 0.0);

  const double smax = sigma.empty() ? 0.0 : sigma[order[0]];
  const double zero_tol = smax * 1e-13 * static_cast<double>(std::max(m, n));

  std::vector<std::vector<double>> ucols(n);
  std::vector<bool> filled(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.s[j] = sigma[src];
    for (std::size_t r = 0; r < n; ++r) out.v[r * n + j] = V[src][r];
    if (sigma[src] > zero_tol && sigma[src] > 0.0) {
      ucols[j].resize(m);
      for (std::size_t r = 0; r < m; ++r) ucols[j][r] = B[src][r] / sigma[src];
      filled[j] = true;
    }
  }

  // Complete columns for vanished singular values to an orthonormal basis:
  // pick the canonical basis vector with the largest residual, deterministic.
  for (std::size_t j = 0; j < n; ++j) {
    if (filled[j]) continue;
    std::vector<double> bestv;
    double bestnorm = -1.0;
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<double> cand(m, 0.0);
      cand[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < n; ++i) {
          if (!filled[i]) continue;
          const double proj = dot(cand, ucols[i]);
          for (std::size_t r = 0; r < m; ++r) cand[r] -= proj * ucols[i][r];
        }
      }
      const double nrm = std::sqrt(dot(cand, cand));
      if (nrm > bestnorm) {
        bestnorm = nrm;
        bestv = std::move(cand);
      }
      if (bestnorm > 0.9) break;  // good enough, keep it deterministic and cheap
    }
    for (double& x : bestv) x /= bestnorm;
    ucols[j] = std::move(bestv);
    filled[j] = true;
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t r = 0; r < m; ++r) out.u[r * n + j] = ucols[j][r];
  return out;
}

OrthogonalMap procrustes_align(const EmbeddingTable& tab_tgt, const EmbeddingTable& tab_rel,
                               const lexicon::BilingualDictionary& dict, AlignStats* stats) {
  if (tab_tgt.dim != tab_rel.dim)
    throw ConfigError("embedding dimension mismatch: " + std::to_string(tab_tgt.dim) +
                      " vs " + std::to_string(tab_rel.dim));
  const std::size_t d = tab_tgt.dim;
  if (d == 0) throw DataError("empty embedding tables");

  AlignStats st;
  std::unordered_set<std::string> seen;
  std::vector<std::pair<const std::vector<double>*, const std::vector<double>*>> pairs;
  for (const auto& e : dict.pairs) {
    if (!seen.insert(e.tgt_word + '\t' + e.rel_word).second) {
      ++st.skipped_duplicate;
      continue;
    }
    const auto* x = tab_tgt.find(e.tgt_word);
    const auto* y = tab_rel.find(e.rel_word);
    if (!x || !y) {
      ++st.skipped_missing;
      continue;
    }
    pairs.emplace_back(x, y);
  }

  // M = sum over pairs of y_hat x_hat^T, built from unit-normalized vectors.
  std::vector<double> M(d * d, 0.0);
  for (auto [x, y] : pairs) {
    const double nx = std::sqrt(dot(*x, *x));
    const double ny = std::sqrt(dot(*y, *y));
    if (nx == 0.0 || ny == 0.0) {
      ++st.skipped_zero;
      continue;
    }
    ++st.used_pairs;
    for (std::size_t r = 0; r < d; ++r) {
      const double yr = (*y)[r] / ny;
      for (std::size_t c = 0; c < d; ++c) M[r * d + c] += yr * (*x)[c] / nx;
    }
  }
  if (st.used_pairs == 0)
    throw DataError("no usable dictionary pairs: every pair was missing from the "
                    "tables, duplicated, or zero");

  const SvdResult f = svd(M, d, d);
  OrthogonalMap map;
  map.dim = d;
  map.m.assign(d * d, 0.0);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      double acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += f.u[r * d + j] * f.v[c * d + j];
      map.m[r * d + c] = acc;
    }

  // The result must be orthogonal; a violation here is a numerical failure,
  // not a data problem.
  double dev = 0;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      double acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += map.m[j * d + r] * map.m[j * d + c];
      const double want = r == c ? 1.0 : 0.0;
      dev += (acc - want) * (acc - want);
    }
  if (std::sqrt(dev) > 1e-8)
    throw DataError("alignment produced a non-orthogonal map (deviation " +
                    std::to_string(std::sqrt(dev)) + ")");

  if (stats) *stats = st;
  return map;
}

std::vector<Candidate> nn_translate(std::string_view word, const OrthogonalMap& map,
                                    const EmbeddingTable& tab_tgt,
                                    const EmbeddingTable& tab_rel, std::size_t k) {
  const auto* x = tab_tgt.find(word);
  if (!x) throw DataError("unknown word '" + std::string(word) + "'");
  if (map.dim != tab_tgt.dim || map.dim != tab_rel.dim)
    throw ConfigError("map/table dimension mismatch");

  const std::vector<double> z = map.apply(*x);
  const double nz = std::sqrt(dot(z, z));

  std::vector<std::size_t> idx(tab_rel.words.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> sim(tab_rel.words.size(), 0.0);
  for (std::size_t i = 0; i < tab_rel.words.size(); ++i) {
    const auto& v = tab_rel.vectors[i];
    const double nv = std::sqrt(dot(v, v));
    sim[i] = (nz == 0.0 || nv == 0.0) ? 0.0 : dot(z, v) / (nz * nv);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&sim](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });
  if (k < idx.size()) idx.resize(k);

  std::vector<Candidate> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back({tab_rel.words[i], sim[i]});
  return out;
}

namespace {

double parse_double(std::string_view tok, const std::string& path, std::size_t lineno) {
  double v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw FormatError(path + ": bad number '" + std::string(tok) + "' on line " +
                      std::to_string(lineno));
  if (!std::isfinite(v))
    throw FormatError(path + ": non-finite value on line " + std::to_string(lineno));
  return v;
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": missing 'count dim' header");
  const auto head = fields(line);
  if (head.size() != 2) throw FormatError(path + ": header must be 'count dim'");
  std::size_t count = 0, dim = 0;
  try {
    count = std::stoull(std::string(head[0]));
    dim = std::stoull(std::string(head[1]));
  } catch (const std::exception&) {
    throw FormatError(path + ": header must be 'count dim'");
  }
  if (dim == 0) throw FormatError(path + ": dimension must be positive");

  EmbeddingTable tab;
  tab.dim = dim;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = fields(line);
    if (f.size() != dim + 1)
      throw FormatError(path + ": expected word plus " + std::to_string(dim) +
                        " values on line " + std::to_string(lineno));
    std::vector<double> vec(dim);
    for (std::size_t i = 0; i < dim; ++i) vec[i] = parse_double(f[i + 1], path, lineno);
    if (tab.index.count(std::string(f[0])))
      throw FormatError(path + ": duplicate word '" + std::string(f[0]) + "' on line " +
                        std::to_string(lineno));
    tab.add(std::string(f[0]), std::move(vec));
  }
  if (tab.words.size() != count)
    throw FormatError(path + ": header promises " + std::to_string(count) +
                      " rows, file has " + std::to_string(tab.words.size()));
  return tab;
}

void save_map(const OrthogonalMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << map.dim << '\n';
  out.precision(17);
  for (std::size_t r = 0; r < map.dim; ++r) {
    for (std::size_t c = 0; c < map.dim; ++c) {
      if (c) out << ' ';
      out << map.m[r * map.dim + c];
    }
    out << '\n';
  }
  if (!out.flush()) throw IoError("write failed: " + path);
}

OrthogonalMap load_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": missing dimension header");
  std::size_t dim = 0;
  try {
    dim = std::stoull(line);
  } catch (const std::exception&) {
    throw FormatError(path + ": bad dimension header");
  }
  if (dim == 0) throw FormatError(path + ": dimension must be positive");
  OrthogonalMap map;
  map.dim = dim;
  map.m.reserve(dim * dim);
  std::size_t lineno = 1;
  for (std::size_t r = 0; r < dim; ++r) {
    if (!std::getline(in, line))
      throw FormatError(path + ": expected " + std::to_string(dim) + " matrix rows");
    ++lineno;
    const auto f = fields(line);
    if (f.size() != dim)
      throw FormatError(path + ": expected " + std::to_string(dim) + " values on line " +
                        std::to_string(lineno));
    for (const auto tok : f) map.m.push_back(parse_double(tok, path, lineno));
  }
  return map;
}

}  // namespace bt::embalign
