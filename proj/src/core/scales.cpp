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

#include "eeorder/scales.hpp"

#include <algorithm>
#include <array>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "eeorder/error.hpp"
#include "eeorder/text.hpp"

namespace eeorder {

Scale::Scale(std::vector<std::vector<std::string>> groups,
             std::set<std::string> unranked, PhonemeClass focal)
    : groups_(std::move(groups)), unranked_(std::move(unranked)), focal_(focal) {
  for (std::size_t r = 0; r < groups_.size(); ++r) {
    if (groups_[r].empty())
      fail(ErrorCode::kInvalidArgument, "scale rank " + std::to_string(r) + " is empty");
    for (const std::string& sym : groups_[r]) {
      if (unranked_.count(sym) || !rank_.emplace(sym, r).second)
        fail(ErrorCode::kInvalidArgument,
             "symbol '" + display_symbol(sym) + "' appears twice in the scale");
    }
  }
}

Scale Scale::from_order(const std::vector<std::string>& order, PhonemeClass focal,
                        std::set<std::string> unranked) {
  std::vector<std::vector<std::string>> groups;
  for (const auto& s : order) groups.push_back({s});
  return Scale(std::move(groups), std::move(unranked), focal);
}

namespace {
std::vector<std::string> symbol_list(std::string_view text) {
  std::vector<std::string> out;
  for (const std::string& part : text::split(text, ',')) {
    std::string_view sym = text::trim(part);
    if (sym.empty()) continue;
    out.push_back(normalize_symbol(sym));
  }
  return out;
}
}  // namespace

Scale Scale::parse(std::string_view content) {
  std::vector<std::vector<std::string>> groups;
  std::set<std::string> unranked;
  PhonemeClass focal = PhonemeClass::kTone;
  std::size_t lineno = 0;
  for (const std::string& raw : text::split(content, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.starts_with("focal:")) {
      focal = phoneme_class_from_string(text::trim(line.substr(6)));
      continue;
    }
    if (line.starts_with("unranked:")) {
      for (auto& s : symbol_list(line.substr(9))) unranked.insert(std::move(s));
      continue;
    }
    auto group = symbol_list(line);
    if (group.empty())
      fail(ErrorCode::kFormat, "scale line " + std::to_string(lineno) + " is empty");
    groups.push_back(std::move(group));
  }
  return Scale(std::move(groups), std::move(unranked), focal);
}

Scale Scale::load(const std::filesystem::path& path) {
  try {
    return parse(text::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
}

std::string Scale::format() const {
  std::string out = "focal: " + std::string(eeorder::to_string(focal_)) + "\n";
  for (const auto& g : groups_) {
    std::vector<std::string> shown;
    for (const auto& s : g) shown.push_back(display_symbol(s));
    out += text::join(shown, ", ") + "\n";
  }
  if (!unranked_.empty()) {
    std::vector<std::string> shown;
    for (const auto& s : unranked_) shown.push_back(display_symbol(s));
    out += "unranked: " + text::join(shown, ", ") + "\n";
  }
  return out;
}

void Scale::save(const std::filesystem::path& path) const {
  text::write_file(path, format());
}

std::string Scale::to_string() const {
  std::vector<std::string> parts;
  for (const auto& g : groups_) {
    std::vector<std::string> shown;
    for (const auto& s : g) shown.push_back(display_symbol(s));
    parts.push_back(g.size() == 1 ? shown[0] : "{" + text::join(shown, ", ") + "}");
  }
  return text::join(parts, " < ");
}

std::optional<std::size_t> Scale::rank(std::string_view symbol) const {
  auto it = rank_.find(std::string(symbol));
  if (it != rank_.end()) return it->second;
  if (unranked_.count(std::string(symbol))) return std::nullopt;
  fail(ErrorCode::kInvalidArgument,
       "symbol '" + display_symbol(symbol) + "' is not on the scale");
}

bool Scale::knows(std::string_view symbol) const {
  return rank_.count(std::string(symbol)) || unranked_.count(std::string(symbol));
}

Scale Scale::reversed() const {
  auto g = groups_;
  std::reverse(g.begin(), g.end());
  return Scale(std::move(g), unranked_, focal_);
}

RuleOutcome rule_decide(const Scale& scale, const Syllable& b1, const Syllable& b2) {
  const auto r1 = scale.rank(b1.constituent(scale.focal()));
  const auto r2 = scale.rank(b2.constituent(scale.focal()));
  if (!r1 || !r2 || *r1 == *r2) return RuleOutcome::kTie;
  return *r1 < *r2 ? RuleOutcome::kAttested : RuleOutcome::kUnattested;
}

Label rule_predict(const Scale& scale, const OrderedPairExample& pair, Rng& coin) {
  switch (rule_decide(scale, pair.b1_syll, pair.b2_syll)) {
    case RuleOutcome::kAttested: return Label::kAttested;
    case RuleOutcome::kUnattested: return Label::kUnattested;
    case RuleOutcome::kTie: break;
  }
  return eeorder::coin(coin) ? Label::kAttested : Label::kUnattested;
}

double rule_accuracy(const Scale& scale, const LabeledDataset& data,
                     const TiePolicy& policy) {
  if (data.empty()) return 0.0;
  Rng coin(policy.seed);
  double correct = 0.0;
  for (const auto& ex : data) {
    const RuleOutcome o = rule_decide(scale, ex.b1_syll, ex.b2_syll);
    if (o == RuleOutcome::kTie) {
      if (policy.mode == TiePolicy::Mode::kExpectedHalf) {
        correct += 0.5;
      } else {
        const Label guess = eeorder::coin(coin) ? Label::kAttested : Label::kUnattested;
        correct += guess == ex.label ? 1.0 : 0.0;
      }
      continue;
    }
    const Label guess = o == RuleOutcome::kAttested ? Label::kAttested : Label::kUnattested;
    correct += guess == ex.label ? 1.0 : 0.0;
  }
  return correct / static_cast<double>(data.size());
}

namespace {

// Integer score = 2 * correct + ties, so comparisons are exact.
struct PairTable {
  std::size_t n = 0;
  std::vector<std::uint64_t> att, unatt;  // [b1 * n + b2]
  std::uint64_t diagonal = 0;             // same-symbol examples

  std::uint64_t score(const std::vector<std::size_t>& rank) const {
    std::uint64_t s = diagonal;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        s += 2 * (rank[i] < rank[j] ? att[i * n + j] : unatt[i * n + j]);
      }
    return s;
  }
};

struct Best {
  std::uint64_t score = 0;
  std::vector<std::size_t> perm;
  std::size_t evaluated = 0;
  bool found = false;
};

Best search_from(const PairTable& table, std::size_t first) {
  Best best;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < table.n; ++i)
    if (i != first) rest.push_back(i);
  std::vector<std::size_t> perm(table.n), rank(table.n);
  do {
    perm[0] = first;
    std::copy(rest.begin(), rest.end(), perm.begin() + 1);
    for (std::size_t r = 0; r < table.n; ++r) rank[perm[r]] = r;
    const std::uint64_t s = table.score(rank);
    ++best.evaluated;
    if (!best.found || s > best.score) {
      best.score = s;
      best.perm = perm;
      best.found = true;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

}  // namespace

ScaleSearchResult search_best_scale(const LabeledDataset& train,
                                    const std::vector<std::string>& symbols,
                                    PhonemeClass focal, unsigned threads) {
  const std::size_t n = symbols.size();
  if (n == 0) fail(ErrorCode::kInvalidArgument, "no symbols to order");
  if (n > kMaxSearchSymbols)
    fail(ErrorCode::kLimit, std::to_string(n) + " symbols exceed the exhaustive search limit of " +
                                std::to_string(kMaxSearchSymbols));
  if (train.empty()) fail(ErrorCode::kInvalidArgument, "empty training data");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i)
    if (!index.emplace(symbols[i], i).second)
      fail(ErrorCode::kInvalidArgument, "duplicate symbol '" + display_symbol(symbols[i]) + "'");

  PairTable table{n, std::vector<std::uint64_t>(n * n, 0), std::vector<std::uint64_t>(n * n, 0), 0};
  for (const auto& ex : train) {
    auto lookup = [&](const Syllable& s) {
      auto it = index.find(s.constituent(focal));
      if (it == index.end())
        fail(ErrorCode::kInvalidArgument,
             "focal symbol '" + display_symbol(s.constituent(focal)) + "' not in the search set");
      return it->second;
    };
    const std::size_t i = lookup(ex.b1_syll), j = lookup(ex.b2_syll);
    if (i == j) ++table.diagonal;
    else (ex.label == Label::kAttested ? table.att : table.unatt)[i * n + j] += 1;
  }

  std::vector<Best> per_first(n);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t f = 0; f < n; ++f) per_first[f] = search_from(table, f);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t f = t; f < n; f += threads) per_first[f] = search_from(table, f);
      });
    for (auto& th : pool) th.join();
  }

  // Blocks are in lexicographic order of their first symbol.
  const Best* best = &per_first[0];
  std::size_t evaluated = 0;
  for (const Best& b : per_first) {
    evaluated += b.evaluated;
    if (b.score > best->score) best = &b;
  }
  std::vector<std::string> order;
  for (std::size_t i : best->perm) order.push_back(symbols[i]);
  ScaleSearchResult out;
  out.scale = Scale::from_order(order, focal);
  out.train_accuracy = static_cast<double>(best->score) / (2.0 * static_cast<double>(train.size()));
  out.evaluated = evaluated;
  return out;
}

std::vector<std::string> observed_symbols(const LabeledDataset& data,
                                          const std::vector<std::string>& symbols,
                                          PhonemeClass focal) {
  std::unordered_set<std::string> seen;
  for (const auto& ex : data) {
    seen.insert(ex.b1_syll.constituent(focal));
    seen.insert(ex.b2_syll.constituent(focal));
  }
  std::vector<std::string> out;
  for (const auto& s : symbols)
    if (seen.count(s)) out.push_back(s);
  return out;
}

Scale induce_scale_from_tree(const DecisionTree& tree, const FeatureSpace& space,
                             PhonemeClass focal) {
  if (tree.dim() != space.size())
    fail(ErrorCode::kInvalidArgument, "tree has " + std::to_string(tree.dim()) +
                                          " features, space has " + std::to_string(space.size()));
  std::vector<std::string> front, back;
  std::set<std::string> placed;
  const auto& nodes = tree.nodes();
  int at = nodes.empty() ? -1 : 0;
  while (at >= 0 && !nodes[at].is_leaf()) {
    const TreeNode& node = nodes[at];
    const FeatureId& id = space[static_cast<std::size_t>(node.feature)];
    if (id.kind == FeatureId::Kind::kOneHot && id.cls == focal && !placed.count(id.symbol)) {
      const TreeNode& yes = nodes[node.yes_child];
      if (yes.attested != yes.unattested) {
        const bool attested = yes.attested > yes.unattested;
        const bool is_b1 = id.position == Position::kB1;
        (attested == is_b1 ? front : back).push_back(id.symbol);
        placed.insert(id.symbol);
      }
    }
    at = node.no_child;
  }
  std::vector<std::string> order = front;
  order.insert(order.end(), back.rbegin(), back.rend());
  std::set<std::string> unranked;
  for (const FeatureId& id : space.entries())
    if (id.kind == FeatureId::Kind::kOneHot && id.cls == focal && !placed.count(id.symbol))
      unranked.insert(id.symbol);
  return Scale::from_order(order, focal, std::move(unranked));
}

}  // namespace eeorder
