#include <gtest/gtest.h>

#include "rebac_miner/features.hpp"
#include "rebac_miner/fixtures.hpp"
#include "support.hpp"

using namespace rebac_miner;
using namespace rebac_miner::testing;

namespace {

std::vector<std::string> texts(const std::vector<Path>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(path_text(p));
  return out;
}

std::vector<std::string> labels(const FeatureTable& t) {
  std::vector<std::string> out;
  for (const auto& f : t.features) out.push_back(f.label());
  return out;
}

}  // namespace

TEST(EnumeratePaths, RunningExample) {
  const auto acl = running_example_acl();
  const auto& cm = acl.model->class_model();
  EXPECT_EQ(texts(enumerate_paths(cm, "Student", 1)), (std::vector<std::string>{"dept", "id"}));
  EXPECT_EQ(texts(enumerate_paths(cm, "Document", 1)),
            (std::vector<std::string>{"dept", "id", "type"}));
  EXPECT_TRUE(enumerate_paths(cm, "Student", 0, false).empty());
  EXPECT_EQ(texts(enumerate_paths(cm, "Student", 1, false, true)),
            (std::vector<std::string>{"", "dept"}));
}

TEST(EnumerateConditions, RunningExample) {
  const auto acl = running_example_acl();
  ExtractionLimits limits;
  limits.max_condition_path_len = 1;
  std::vector<std::string> got;
  for (const auto& c : enumerate_condition_features(*acl.model, "Document", limits)) {
    got.push_back(to_string(c, "res"));
  }
  EXPECT_EQ(got, (std::vector<std::string>{"res.dept = CS", "res.type = Handbook"}));

  limits.include_id_conditions = true;
  got.clear();
  for (const auto& c : enumerate_condition_features(*acl.model, "Document", limits)) {
    got.push_back(to_string(c, "res"));
  }
  EXPECT_EQ(got.size(), 5u);
  EXPECT_NE(std::find(got.begin(), got.end(), "res.id = CS-doc-1"), got.end());
  EXPECT_TRUE(enumerate_condition_features(*acl.model, "Department", {}).empty());
}

TEST(EnumerateConstraints, RunningExample) {
  const auto acl = running_example_acl();
  const auto cons = enumerate_constraint_features(acl.model->class_model(), "Student", "Document", {});
  ASSERT_EQ(cons.size(), 1u);
  EXPECT_EQ(to_string(cons[0]), "sub.dept = res.dept");
}

TEST(EnumerateConstraints, OperatorsFollowMultiplicity) {
  auto cm = std::make_shared<ClassModel>();
  for (const char* c : {"P", "E", "D", "X"}) cm->add_class(c);
  cm->add_field("E", "projects", {"P", Multiplicity::Many});
  cm->add_field("E", "home", {"P", Multiplicity::One});
  cm->add_field("E", "x", {"X", Multiplicity::One});
  cm->add_field("D", "project", {"P", Multiplicity::One});
  cm->add_field("D", "scope", {"P", Multiplicity::Many});
  ExtractionLimits limits;
  limits.max_constraint_path_len = 1;
  std::vector<std::string> got;
  for (const auto& c : enumerate_constraint_features(*cm, "E", "D", limits)) got.push_back(to_string(c));
  const std::vector<std::string> expected{
      "sub.home = res.project", "sub.home in res.scope", "sub.projects contains res.project",
      "sub.projects >= res.scope", "sub.projects <= res.scope"};
  for (const auto& e : expected) {
    EXPECT_NE(std::find(got.begin(), got.end(), e), got.end()) << e;
  }
  for (const auto& g : got) EXPECT_EQ(g.find("sub.x"), std::string::npos) << g;
  EXPECT_EQ(got.size(), expected.size());
}

TEST(FeatureTable, RunningExampleColumns) {
  const auto acl = running_example_acl();
  const auto table = build_feature_table(*acl.model, "Student", "Document", {});
  EXPECT_EQ(labels(table), (std::vector<std::string>{"sub.dept = res.dept", "sub.dept = CS",
                                                     "res.dept = CS", "res.type = Handbook"}));
  EXPECT_EQ(table.find(table.features[2]), 2u);
  for (const auto& f : table.features) EXPECT_EQ(f.cost(), 2);
}

TEST(BuildDataset, ReproducesRunningExampleTable) {
  const auto acl = running_example_acl();
  const auto table = build_feature_table(*acl.model, "Student", "Document", {});
  const auto ds = build_dataset(acl, "Student", "Document", "read", table);
  const auto expected = example_dataset();
  ASSERT_EQ(ds.size(), expected.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    EXPECT_EQ(ds.rows[r].values, expected.rows[r].values) << "row " << r + 1;
    EXPECT_EQ(ds.rows[r].label, expected.rows[r].label) << "row " << r + 1;
  }
  EXPECT_EQ(ds.rows[0].provenance, (Provenance{"CS-student-1", "CS-doc-1"}));
  EXPECT_EQ(ds.rows[5].provenance, (Provenance{"EE-student-1", "CS-doc-3"}));
}

TEST(BuildDataset, EmptyAuthorizationsLabelEverythingFalse) {
  auto acl = running_example_acl();
  acl.authorizations.clear();
  const auto table = build_feature_table(*acl.model, "Student", "Document", {});
  const auto ds = build_dataset(acl, "Student", "Document", "read", table);
  EXPECT_EQ(ds.size(), 6u);
  for (const auto& row : ds.rows) EXPECT_EQ(row.label, Truth::F);
}

TEST(PruneUseless, DropsConstantColumns) {
  LabeledDataset ds;
  ds.features = {{"always", 1}, {"mixed", 1}, {"tu", 1}};
  ds.add_row(fv("TFT"), Truth::T);
  ds.add_row(fv("TTU"), Truth::F);
  FeatureTable table{"S", "R",
                     {Feature::subject(make_condition({"a"}, ConditionOp::In, {Constant{true}})),
                      Feature::subject(make_condition({"b"}, ConditionOp::In, {Constant{true}})),
                      Feature::subject(make_condition({"c"}, ConditionOp::In, {Constant{true}}))}};
  const auto kept = prune_useless(table, ds);
  EXPECT_EQ(kept, (std::vector<FeatureIndex>{1, 2}));
  EXPECT_EQ(ds.feature_count(), 2u);
  EXPECT_EQ(table.features.size(), 2u);
  EXPECT_EQ(ds.rows[1].values, fv("TU"));

  LabeledDataset empty;
  empty.features = {{"x", 1}};
  FeatureTable one{"S", "R", {table.features[0]}};
  EXPECT_EQ(prune_useless(one, empty), std::vector<FeatureIndex>{0});
}

TEST(CoerceUnknown, MapsUnknownToFalse) {
  auto ds = example_dataset();
  coerce_unknown_to_false(ds);
  EXPECT_EQ(ds.rows[0].values, fv("FTFT"));
  EXPECT_EQ(ds.rows[0].label, Truth::T);
}
