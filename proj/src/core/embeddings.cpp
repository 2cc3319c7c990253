// Copyright 2026 The eeorder Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "eeorder/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>

#include "eeorder/error.hpp"
#include "eeorder/text.hpp"

namespace eeorder {

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocab, std::size_t dim,
                               std::vector<float> vectors)
    : vocab_(std::move(vocab)), dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ == 0) fail(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  if (vectors_.size() != vocab_.size() * dim_)
    fail(ErrorCode::kInvalidArgument, "embedding matrix does not match |V| x d");
  for (float v : vectors_)
    if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "non-finite embedding value");
  for (std::size_t i = 0; i < vocab_.size(); ++i)
    if (!index_.emplace(vocab_[i], i).second)
      fail(ErrorCode::kInvalidArgument, "duplicate vocabulary entry '" + vocab_[i] + "'");
  params.dim = dim_;
}

std::optional<std::size_t> EmbeddingTable::index_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const float>> EmbeddingTable::find(std::string_view word) const {
  if (auto i = index_of(word)) return row(*i);
  return std::nullopt;
}

UnigramSampler::UnigramSampler(const std::vector<std::uint64_t>& counts, double power) {
  const std::size_t n = counts.size();
  if (n == 0) fail(ErrorCode::kInvalidArgument, "sampler needs at least one word");
  prob_.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += prob_[i] = std::pow(static_cast<double>(counts[i]), power);
  if (!(total > 0.0)) fail(ErrorCode::kInvalidArgument, "sampler counts are all zero");
  for (double& p : prob_) p /= total;

  // Vose's alias method.
  accept_.assign(n, 1.0);
  alias_.resize(n);
  std::iota(alias_.begin(), alias_.end(), 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = prob_[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back(), l = large.back();
    small.pop_back();
    large.pop_back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
}

std::size_t UnigramSampler::operator()(Rng& rng) const {
  const std::size_t i = uniform_index(rng, prob_.size());
  return uniform01(rng) < accept_[i] ? i : alias_[i];
}

namespace {

double sigmoid(double x) {
  if (x > 30.0) return 1.0;
  if (x < -30.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

double dot(const float* a, const float* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += static_cast<double>(a[k]) * b[k];
  return s;
}

}  // namespace

EmbeddingTable train_skipgram(const Corpus& corpus, const SkipGramParams& params) {
  if (corpus.empty()) fail(ErrorCode::kInvalidArgument, "corpus is empty");
  if (params.dim == 0 || params.window == 0)
    fail(ErrorCode::kInvalidArgument, "dimension and window must be positive");

  std::map<std::string, std::uint64_t> freq;
  for (const auto& s : corpus)
    for (const auto& w : s) ++freq[w];
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [w, c] : freq)
    if (c >= params.min_count) kept.emplace_back(w, c);
  if (kept.empty())
    fail(ErrorCode::kInvalidArgument, "vocabulary is empty after min_count filtering");
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> vocab;
  std::vector<std::uint64_t> counts;
  for (auto& [w, c] : kept) {
    vocab.push_back(w);
    counts.push_back(c);
  }
  const std::size_t V = vocab.size(), d = params.dim;

  Rng rng(mix_seed(params.seed, 0xe3bed));
  std::vector<float> in(V * d);
  for (float& x : in) x = static_cast<float>((uniform01(rng) - 0.5) / static_cast<double>(d));
  std::vector<float> out(V * d, 0.0f);

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < V; ++i) index.emplace(vocab[i], i);
  std::vector<std::vector<std::size_t>> ids;
  std::uint64_t tokens = 0;
  for (const auto& s : corpus) {
    std::vector<std::size_t> row;
    for (const auto& w : s)
      if (auto it = index.find(w); it != index.end()) row.push_back(it->second);
    tokens += row.size();
    ids.push_back(std::move(row));
  }

  const UnigramSampler sampler(counts, 0.75);
  const double total = static_cast<double>(params.epochs) * static_cast<double>(tokens) + 1.0;
  std::uint64_t processed = 0;
  std::vector<double> grad(d);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (const auto& sent : ids) {
      for (std::size_t pos = 0; pos < sent.size(); ++pos, ++processed) {
        const double lr = params.learning_rate *
                          std::max(1e-4, 1.0 - static_cast<double>(processed) / total);
        const std::size_t reach = params.window - uniform_index(rng, params.window);
        const std::size_t lo = pos >= reach ? pos - reach : 0;
        const std::size_t hi = std::min(sent.size() - 1, pos + reach);
        const std::size_t center = sent[pos];
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          float* l1 = &in[sent[c] * d];
          std::fill(grad.begin(), grad.end(), 0.0);
          for (std::size_t k = 0; k <= params.negatives; ++k) {
            std::size_t target = center;
            double label = 1.0;
            if (k > 0) {
              target = sampler(rng);
              if (target == center) continue;
              label = 0.0;
            }
            float* l2 = &out[target * d];
            const double g = (label - sigmoid(dot(l1, l2, d))) * lr;
            for (std::size_t j = 0; j < d; ++j) grad[j] += g * l2[j];
            for (std::size_t j = 0; j < d; ++j) l2[j] += static_cast<float>(g * l1[j]);
          }
          for (std::size_t j = 0; j < d; ++j) l1[j] += static_cast<float>(grad[j]);
        }
      }
    }
  }

  EmbeddingTable table(std::move(vocab), d, std::move(in));
  table.params = params;
  table.trained = params.epochs > 0;
  table.context = std::move(out);
  return table;
}

double sgns_loss(const EmbeddingTable& table,
                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                 std::size_t negatives, std::uint64_t seed) {
  if (pairs.empty()) return 0.0;
  const std::size_t d = table.dim(), V = table.size();
  std::vector<float> zeros(V * d, 0.0f);
  const float* ctx = table.context.size() == V * d ? table.context.data() : zeros.data();
  Rng rng(seed);
  double loss = 0.0;
  for (const auto& [center, context] : pairs) {
    if (center >= V || context >= V) fail(ErrorCode::kInvalidArgument, "pair index out of range");
    const float* u = table.row(context).data();
    loss -= std::log(std::max(1e-12, sigmoid(dot(u, ctx + center * d, d))));
    for (std::size_t k = 0; k < negatives; ++k) {
      const std::size_t neg = uniform_index(rng, V);
      loss -= std::log(std::max(1e-12, sigmoid(-dot(u, ctx + neg * d, d))));
    }
  }
  return loss / static_cast<double>(pairs.size());
}

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) fail(ErrorCode::kInvalidArgument, "vector dimensions differ");
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    uv += static_cast<double>(u[k]) * v[k];
    uu += static_cast<double>(u[k]) * u[k];
    vv += static_cast<double>(v[k]) * v[k];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
}

double cosine(const EmbeddingTable& emb, std::string_view w1, std::string_view w2) {
  auto u = emb.find(w1);
  if (!u) fail(ErrorCode::kOutOfVocabulary, "'" + std::string(w1) + "' is not in the vocabulary");
  auto v = emb.find(w2);
  if (!v) fail(ErrorCode::kOutOfVocabulary, "'" + std::string(w2) + "' is not in the vocabulary");
  return cosine(*u, *v);
}

std::vector<Neighbor> neighbors(const EmbeddingTable& emb, std::string_view word,
                                std::size_t k) {
  auto self = emb.index_of(word);
  if (!self) fail(ErrorCode::kOutOfVocabulary, "'" + std::string(word) + "' is not in the vocabulary");
  std::vector<Neighbor> all;
  for (std::size_t i = 0; i < emb.size(); ++i)
    if (i != *self) all.push_back({emb.vocab()[i], cosine(emb.row(*self), emb.row(i))});
  std::stable_sort(all.begin(), all.end(),
                   [](const Neighbor& a, const Neighbor& b) { return a.cosine > b.cosine; });
  if (all.size() > k) all.resize(k);
  return all;
}

void export_csv(const EmbeddingTable& emb, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out += emb.vocab()[i];
    char buf[32];
    for (float v : emb.row(i)) {
      std::snprintf(buf, sizeof buf, ",%.9g", static_cast<double>(v));
      out += buf;
    }
    out += '\n';
  }
  text::write_file(path, out);
}

EmbeddingTable import_csv(const std::filesystem::path& path) {
  std::vector<std::string> vocab;
  std::vector<float> vectors;
  std::size_t dim = 0, lineno = 0;
  for (const std::string& line : text::read_lines(path)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto cells = text::split(line, ',');
    if (cells.size() < 2)
      fail(ErrorCode::kFormat, path.string() + ":" + std::to_string(lineno) + ": no values");
    if (dim == 0) dim = cells.size() - 1;
    if (cells.size() - 1 != dim)
      fail(ErrorCode::kFormat, path.string() + ":" + std::to_string(lineno) + ": ragged row");
    vocab.push_back(cells[0]);
    for (std::size_t k = 1; k < cells.size(); ++k) {
      try {
        vectors.push_back(std::stof(cells[k]));
      } catch (const std::exception&) {
        fail(ErrorCode::kFormat, path.string() + ":" + std::to_string(lineno) + ": bad number");
      }
    }
  }
  if (vocab.empty()) fail(ErrorCode::kFormat, path.string() + ": no embeddings");
  EmbeddingTable t(std::move(vocab), dim, std::move(vectors));
  t.trained = true;
  t.source = "csv";
  return t;
}

namespace {
constexpr char kMagic[4] = {'E', 'E', 'W', 'V'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T get(std::ifstream& f, const std::filesystem::path& path) {
  T v{};
  if (!f.read(reinterpret_cast<char*>(&v), sizeof v))
    fail(ErrorCode::kFormat, path.string() + ": truncated embedding file");
  return v;
}
}  // namespace

void save_embeddings(const EmbeddingTable& emb, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot write " + path.string());
  f.write(kMagic, 4);
  put(f, kVersion);
  put(f, static_cast<std::uint64_t>(emb.size()));
  put(f, static_cast<std::uint64_t>(emb.dim()));
  for (const auto& w : emb.vocab()) {
    put(f, static_cast<std::uint32_t>(w.size()));
    f.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
  f.write(reinterpret_cast<const char*>(emb.data().data()),
          static_cast<std::streamsize>(emb.data().size() * sizeof(float)));
  if (!f) fail(ErrorCode::kIo, "failed writing " + path.string());
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot open " + path.string());
  char magic[4];
  if (!f.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    fail(ErrorCode::kFormat, path.string() + ": not an embedding file");
  if (get<std::uint32_t>(f, path) != kVersion)
    fail(ErrorCode::kFormat, path.string() + ": unsupported embedding file version");
  const auto V = get<std::uint64_t>(f, path);
  const auto d = get<std::uint64_t>(f, path);
  if (d == 0 || d > (1u << 20) || V > (1ull << 32))
    fail(ErrorCode::kFormat, path.string() + ": implausible header");
  std::vector<std::string> vocab(V);
  for (auto& w : vocab) {
    const auto len = get<std::uint32_t>(f, path);
    if (len > (1u << 16)) fail(ErrorCode::kFormat, path.string() + ": implausible word length");
    w.resize(len);
    if (!f.read(w.data(), len)) fail(ErrorCode::kFormat, path.string() + ": truncated vocabulary");
  }
  std::vector<float> vectors(V * d);
  if (!f.read(reinterpret_cast<char*>(vectors.data()),
              static_cast<std::streamsize>(vectors.size() * sizeof(float))))
    fail(ErrorCode::kFormat, path.string() + ": truncated matrix");
  EmbeddingTable t(std::move(vocab), d, std::move(vectors));
  t.trained = true;
  t.source = "binary";
  return t;
}

}  // namespace eeorder
