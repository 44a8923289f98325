#include "rebac_miner/tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rebac_miner {

DecisionTree DecisionTree::leaf(Truth label) {
  DecisionTree t;
  t.label_ = label;
  return t;
}

DecisionTree DecisionTree::split(FeatureIndex feature, DecisionTree on_false,
                                 DecisionTree on_unknown, DecisionTree on_true) {
  DecisionTree t;
  t.feature_ = feature;
  t.children_.reserve(3);
  t.children_.push_back(std::move(on_false));
  t.children_.push_back(std::move(on_unknown));
  t.children_.push_back(std::move(on_true));
  return t;
}

Truth DecisionTree::classify(std::span<const Truth> v) const {
  const DecisionTree* node = this;
  while (!node->is_leaf()) node = &node->child(v[node->feature_]);
  return node->label_;
}

std::size_t DecisionTree::depth() const {
  std::size_t d = 0;
  for (const auto& c : children_) d = std::max(d, 1 + c.depth());
  return d;
}

namespace {

std::string feature_name(FeatureIndex f, std::span<const FeatureInfo> features) {
  if (f < features.size() && !features[f].label.empty()) return features[f].label;
  return "f" + std::to_string(f);
}

void dump_into(const DecisionTree& t, std::span<const FeatureInfo> features, int indent,
               std::string& out) {
  if (t.is_leaf()) {
    out += std::string(indent, ' ') + "leaf " + to_char(t.label()) + "\n";
    return;
  }
  out += std::string(indent, ' ') + "split " + feature_name(t.feature(), features) + "\n";
  for (Truth edge : {Truth::T, Truth::F, Truth::U}) {
    out += std::string(indent + 2, ' ') + "= " + to_char(edge) + ":\n";
    dump_into(t.child(edge), features, indent + 4, out);
  }
}

int dot_into(const DecisionTree& t, std::span<const FeatureInfo> features, int& next,
             std::string& out) {
  const int id = next++;
  if (t.is_leaf()) {
    out += "  n" + std::to_string(id) + " [shape=box,style=filled,label=\"" + to_char(t.label()) +
           "\"];\n";
    return id;
  }
  out += "  n" + std::to_string(id) + " [shape=box,label=\"" +
         feature_name(t.feature(), features) + "\"];\n";
  for (Truth edge : {Truth::T, Truth::F, Truth::U}) {
    const int child = dot_into(t.child(edge), features, next, out);
    out += "  n" + std::to_string(id) + " -> n" + std::to_string(child) + " [label=\"" +
           to_char(edge) + "\"];\n";
  }
  return id;
}

double entropy(const std::array<std::size_t, 3>& counts) {
  const double n = static_cast<double>(counts[0] + counts[1] + counts[2]);
  if (n == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

std::size_t idx(Truth t) { return static_cast<std::size_t>(t); }

DecisionTree grow(const LabeledDataset& ds, std::vector<std::size_t> rows,
                  std::vector<FeatureIndex> candidates) {
  if (rows.empty()) return DecisionTree::leaf(Truth::F);
  const Truth first = ds.rows[rows.front()].label;
  const bool pure = std::all_of(rows.begin(), rows.end(),
                                [&](std::size_t r) { return ds.rows[r].label == first; });
  if (pure) return DecisionTree::leaf(first);
  // Mixed labels with nothing left to test: never grant.
  if (candidates.empty()) return DecisionTree::leaf(Truth::F);

  const FeatureIndex f = choose_split(ds, rows, candidates);
  std::array<std::vector<std::size_t>, 3> parts;
  for (std::size_t r : rows) parts[idx(ds.rows[r].values[f])].push_back(r);
  candidates.erase(std::find(candidates.begin(), candidates.end(), f));

  auto on_false = grow(ds, std::move(parts[idx(Truth::F)]), candidates);
  auto on_unknown = grow(ds, std::move(parts[idx(Truth::U)]), candidates);
  auto on_true = grow(ds, std::move(parts[idx(Truth::T)]), std::move(candidates));
  return DecisionTree::split(f, std::move(on_false), std::move(on_unknown), std::move(on_true));
}

void collect_paths(const DecisionTree& t, Conjunction& prefix, std::vector<Conjunction>& out) {
  if (t.is_leaf()) {
    if (t.label() == Truth::T) out.push_back(prefix);
    return;
  }
  static constexpr std::array<std::pair<Truth, Polarity>, 3> kEdges{{
      {Truth::T, Polarity::Positive},
      {Truth::F, Polarity::Negative},
      {Truth::U, Polarity::IsUnknown},
  }};
  for (const auto& [edge, polarity] : kEdges) {
    prefix.add({t.feature(), polarity});
    collect_paths(t.child(edge), prefix, out);
    prefix.remove(t.feature());
  }
}

}  // namespace

std::string DecisionTree::dump(std::span<const FeatureInfo> features) const {
  std::string out;
  dump_into(*this, features, 0, out);
  return out;
}

std::string DecisionTree::to_dot(std::span<const FeatureInfo> features) const {
  std::string out = "digraph tree {\n";
  int next = 0;
  dot_into(*this, features, next, out);
  out += "}\n";
  return out;
}

double information_gain(const LabeledDataset& ds, std::span<const std::size_t> rows,
                        FeatureIndex feature) {
  if (rows.empty()) return 0.0;
  std::array<std::size_t, 3> total{};
  std::array<std::array<std::size_t, 3>, 3> by_value{};
  for (std::size_t r : rows) {
    const auto& row = ds.rows[r];
    ++total[idx(row.label)];
    ++by_value[idx(row.values[feature])][idx(row.label)];
  }
  const double n = static_cast<double>(rows.size());
  double remainder = 0.0;
  for (const auto& part : by_value) {
    const auto size = part[0] + part[1] + part[2];
    if (size == 0) continue;
    remainder += static_cast<double>(size) / n * entropy(part);
  }
  return entropy(total) - remainder;
}

FeatureIndex choose_split(const LabeledDataset& ds, std::span<const std::size_t> rows,
                          std::span<const FeatureIndex> candidates) {
  if (candidates.empty()) throw std::invalid_argument("choose_split: no candidate features");
  FeatureIndex best = candidates.front();
  double best_gain = information_gain(ds, rows, best);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const FeatureIndex f = candidates[i];
    const double g = information_gain(ds, rows, f);
    bool better = g > best_gain + kGainTolerance;
    if (!better && std::abs(g - best_gain) <= kGainTolerance) {
      const int cost = ds.features[f].cost;
      const int best_cost = ds.features[best].cost;
      better = cost < best_cost || (cost == best_cost && f < best);
    }
    if (better) {
      best = f;
      best_gain = g;
    }
  }
  return best;
}

DecisionTree build_tree(const LabeledDataset& ds, std::span<const std::size_t> rows,
                        const std::set<FeatureIndex>& excluded) {
  std::vector<FeatureIndex> candidates;
  for (FeatureIndex f = 0; f < ds.feature_count(); ++f) {
    if (!excluded.contains(f)) candidates.push_back(f);
  }
  return grow(ds, std::vector<std::size_t>(rows.begin(), rows.end()), std::move(candidates));
}

DecisionTree build_tree(const LabeledDataset& ds, const std::set<FeatureIndex>& excluded) {
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return build_tree(ds, rows, excluded);
}

std::vector<Conjunction> extract_true_paths(const DecisionTree& tree) {
  std::vector<Conjunction> out;
  Conjunction prefix;
  collect_paths(tree, prefix, out);
  return out;
}

}  // namespace rebac_miner
