#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <stdexcept>

#include "rebac_miner/tree.hpp"
#include "support.hpp"

using namespace rebac_miner;
using namespace rebac_miner::testing;

namespace {

constexpr Truth T = Truth::T;
constexpr Truth F = Truth::F;
constexpr Truth U = Truth::U;

std::vector<std::size_t> all_rows(const LabeledDataset& ds) {
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

// Reference values from tests/oracles/oracle.py.
TEST(InformationGain, RunningExampleColumns) {
  const auto ds = example_dataset();
  const auto rows = all_rows(ds);
  EXPECT_NEAR(information_gain(ds, rows, 0), 0.190874504621109, 1e-12);
  EXPECT_NEAR(information_gain(ds, rows, 1), 0.081704165945510, 1e-12);
  EXPECT_NEAR(information_gain(ds, rows, 2), 0.0, 1e-12);
  EXPECT_NEAR(information_gain(ds, rows, 3), 0.459147917027245, 1e-12);
}

TEST(InformationGain, PureOrSingleRowIsZero) {
  LabeledDataset ds;
  ds.features = {{"a", 1}, {"b", 1}};
  ds.add_row(fv("TF"), T);
  ds.add_row(fv("UT"), T);
  ds.add_row(fv("FU"), T);
  const auto rows = all_rows(ds);
  EXPECT_EQ(information_gain(ds, rows, 0), 0.0);
  EXPECT_EQ(information_gain(ds, rows, 1), 0.0);
  const std::vector<std::size_t> one{0};
  EXPECT_EQ(information_gain(example_dataset(), one, 3), 0.0);
}

TEST(ChooseSplit, HighestGainWins) {
  const auto ds = example_dataset();
  const auto rows = all_rows(ds);
  const std::vector<FeatureIndex> two{2, 3};
  EXPECT_EQ(choose_split(ds, rows, two), 3u);
  const std::vector<FeatureIndex> one{1};
  EXPECT_EQ(choose_split(ds, rows, one), 1u);
  EXPECT_THROW(choose_split(ds, rows, std::vector<FeatureIndex>{}), std::invalid_argument);
}

TEST(ChooseSplit, TiesGoToCheaperThenLowerIndex) {
  LabeledDataset ds;
  ds.features = {{"expensive", 3}, {"cheap", 2}, {"cheap-too", 2}};
  ds.add_row(fv("TTT"), T);
  ds.add_row(fv("FFF"), F);
  const auto rows = all_rows(ds);
  const std::vector<FeatureIndex> all{0, 1, 2};
  EXPECT_EQ(choose_split(ds, rows, all), 1u);
  const std::vector<FeatureIndex> reversed{2, 1, 0};
  EXPECT_EQ(choose_split(ds, rows, reversed), 1u);
}

TEST(BuildTree, DegenerateInputs) {
  LabeledDataset ds;
  ds.features = {{"a", 1}};
  EXPECT_EQ(build_tree(ds), DecisionTree::leaf(F));
  ds.add_row(fv("T"), F);
  ds.add_row(fv("U"), F);
  EXPECT_EQ(build_tree(ds), DecisionTree::leaf(F));
}

TEST(BuildTree, RunningExampleShape) {
  const auto tree = build_tree(example_dataset());
  ASSERT_FALSE(tree.is_leaf());
  EXPECT_EQ(tree.feature(), 3u);
  EXPECT_EQ(tree.child(T), DecisionTree::leaf(T));
  const auto& u = tree.child(U);
  ASSERT_FALSE(u.is_leaf());
  EXPECT_EQ(u.feature(), 0u);
  EXPECT_EQ(u.child(T), DecisionTree::leaf(T));
  EXPECT_EQ(u.child(U), DecisionTree::leaf(F));
  EXPECT_EQ(tree.depth(), 2u);
}

TEST(BuildTree, ExcludedFeaturesAreNeverTested) {
  const auto tree = build_tree(example_dataset(), {3});
  EXPECT_NE(tree.feature(), 3u);
}

TEST(TruePaths, Leaves) {
  EXPECT_EQ(extract_true_paths(DecisionTree::leaf(T)), std::vector<Conjunction>{Conjunction()});
  EXPECT_TRUE(extract_true_paths(DecisionTree::leaf(F)).empty());
}

TEST(TruePaths, RunningExampleTree) {
  const auto paths = extract_true_paths(build_tree(example_dataset()));
  const std::vector<Conjunction> expected{
      Conjunction({{3, Polarity::Positive}}),
      Conjunction({{0, Polarity::Positive}, {3, Polarity::IsUnknown}}),
  };
  EXPECT_EQ(paths, expected);
}

TEST(Rendering, DumpAndDot) {
  const auto ds = example_dataset();
  const auto tree = build_tree(ds);
  const auto text = tree.dump(ds.features);
  EXPECT_EQ(text.rfind("split res.type = Handbook\n", 0), 0u);
  EXPECT_NE(tree.to_dot(ds.features).find("digraph"), std::string::npos);
}

TEST(TreeProperty, FunctionalDatasetsAreFitExactly) {
  Gen g(3);
  for (int trial = 0; trial < 300; ++trial) {
    LabeledDataset ds;
    const std::size_t n = g.between(1, 5);
    for (std::size_t f = 0; f < n; ++f) ds.features.push_back({"f" + std::to_string(f), 1});
    std::map<FeatureVector, Truth> labels;
    const std::size_t rows = g.between(0, 30);
    for (std::size_t r = 0; r < rows; ++r) {
      auto v = g.vector(n);
      auto [it, fresh] = labels.emplace(v, g.truth());
      ds.add_row(v, it->second);
    }
    const auto tree = build_tree(ds);
    for (const auto& row : ds.rows) ASSERT_EQ(tree.classify(row.values), row.label);
    // Every T-path conjunction evaluates to T on the rows reaching it.
    const auto paths = extract_true_paths(tree);
    for (const auto& row : ds.rows) {
      if (row.label != T) continue;
      bool reached = false;
      for (const auto& c : paths) reached |= eval_conjunction(c, row.values) == T;
      ASSERT_TRUE(reached);
    }
  }
}
