#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "rebac_miner/tvl.hpp"

namespace rebac_miner {

/// Multi-way decision tree over three-valued features. Internal nodes have
/// exactly one child per truth value.
class DecisionTree {
 public:
  static DecisionTree leaf(Truth label);
  static DecisionTree split(FeatureIndex feature, DecisionTree on_false, DecisionTree on_unknown,
                            DecisionTree on_true);

  bool is_leaf() const noexcept { return children_.empty(); }
  Truth label() const noexcept { return label_; }
  FeatureIndex feature() const noexcept { return feature_; }
  const DecisionTree& child(Truth edge) const { return children_.at(static_cast<std::size_t>(edge)); }

  Truth classify(std::span<const Truth> v) const;
  std::size_t depth() const;

  /// Indented text, one node per line.
  std::string dump(std::span<const FeatureInfo> features) const;
  std::string to_dot(std::span<const FeatureInfo> features) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  Truth label_ = Truth::F;
  FeatureIndex feature_ = 0;
  std::vector<DecisionTree> children_;  // indexed by Truth
};

/// Gains closer than this are treated as equal.
inline constexpr double kGainTolerance = 1e-12;

/// Shannon entropy (bits) of the labels of `rows` minus the weighted entropy
/// after a three-way split on `feature`.
double information_gain(const LabeledDataset& ds, std::span<const std::size_t> rows,
                        FeatureIndex feature);

/// Highest gain; ties go to the lower cost, then the lower index.
/// Throws std::invalid_argument if `candidates` is empty.
FeatureIndex choose_split(const LabeledDataset& ds, std::span<const std::size_t> rows,
                          std::span<const FeatureIndex> candidates);

DecisionTree build_tree(const LabeledDataset& ds, std::span<const std::size_t> rows,
                        const std::set<FeatureIndex>& excluded);
DecisionTree build_tree(const LabeledDataset& ds, const std::set<FeatureIndex>& excluded = {});

/// One conjunction per root-to-T-leaf path. Edges T, F, U contribute
/// Positive, Negative and IsUnknown literals.
std::vector<Conjunction> extract_true_paths(const DecisionTree& tree);

}  // namespace rebac_miner
