#include <gtest/gtest.h>

#include <algorithm>

#include "rebac_miner/fixtures.hpp"
#include "rebac_miner/metrics.hpp"

using namespace rebac_miner;

namespace {

Constant id(const char* s) { return Constant{std::string(s)}; }

AtomicCondition cond(const char* path, std::vector<Constant> values, bool negated = false) {
  return make_condition({path}, ConditionOp::In, std::move(values), negated);
}

// The two rules of the running example: same department, and handbooks.
Rule dept_rule() { return running_example_policy().rules[0]; }
Rule handbook_rule() { return running_example_policy().rules[1]; }

}  // namespace

// Reference values from tests/oracles/oracle.py.
TEST(Jaccard, Sets) {
  EXPECT_DOUBLE_EQ(jaccard(std::set<std::string>{"a", "b"}, std::set<std::string>{"b", "c"}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(jaccard(std::set<int>{}, std::set<int>{}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(std::set<int>{1}, std::set<int>{}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard_value(std::string("x"), std::string("x")), 1.0);
}

TEST(Syntactic, AtomicConditions) {
  EXPECT_DOUBLE_EQ(syn_atomic_condition(cond("dept", {id("CS")}), cond("dept", {id("CS"), id("EE")})),
                   5.0 / 6.0);
  EXPECT_DOUBLE_EQ(syn_atomic_condition(cond("dept", {id("CS")}), cond("type", {id("CS")})), 0.0);
  EXPECT_DOUBLE_EQ(syn_atomic_condition(cond("dept", {id("CS")}), cond("dept", {id("CS")}, true)),
                   2.0 / 3.0);
}

TEST(Syntactic, ConditionSets) {
  EXPECT_DOUBLE_EQ(syn_condition_sets({cond("dept", {id("CS")})}, {cond("type", {id("Handbook")})}), 0.0);
  EXPECT_DOUBLE_EQ(syn_condition_sets({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(syn_condition_sets({cond("dept", {id("CS")})}, {}), 0.0);
}

TEST(Syntactic, Rules) {
  Rule widened = dept_rule();
  widened.actions.insert("write");
  EXPECT_DOUBLE_EQ(syn_rule(dept_rule(), widened), 11.0 / 12.0);
  EXPECT_DOUBLE_EQ(syn_rule(dept_rule(), dept_rule()), 1.0);
  EXPECT_DOUBLE_EQ(syn_rule(handbook_rule(), dept_rule()), 2.0 / 3.0);
}

TEST(Syntactic, PoliciesAreAsymmetric) {
  const std::vector<Rule> one{dept_rule()};
  const std::vector<Rule> two{dept_rule(), handbook_rule()};
  EXPECT_DOUBLE_EQ(syn_policy(one, two), 1.0);
  std::vector<RuleMatch> matches;
  EXPECT_DOUBLE_EQ(syn_policy(two, one, &matches), 5.0 / 6.0);
  ASSERT_EQ(matches.size(), 2u);
  EXPECT_EQ(matches[1].best, 0u);
  EXPECT_DOUBLE_EQ(matches[1].score, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(syn_policy({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(syn_policy({}, one), 0.0);
  EXPECT_DOUBLE_EQ(syn_policy(one, {}), 0.0);
}

TEST(Semantic, RunningExample) {
  const auto reference = running_example_policy();
  EXPECT_DOUBLE_EQ(semantic_similarity(reference, reference), 1.0);
  Policy partial = reference;
  partial.rules.pop_back();
  // Without handbooks only CS-doc-2 is granted; CS-doc-1 has no known dept.
  EXPECT_DOUBLE_EQ(semantic_similarity(partial, reference), 1.0 / 3.0);
  Policy empty = reference;
  empty.rules.clear();
  EXPECT_DOUBLE_EQ(semantic_similarity(empty, reference), 0.0);
}

TEST(Compare, RunningExample) {
  const auto reference = running_example_policy();
  const auto report = compare_policies(reference, reference);
  EXPECT_DOUBLE_EQ(report.syntactic, 1.0);
  EXPECT_DOUBLE_EQ(report.semantic, 1.0);
  EXPECT_EQ(report.wsc_mined, 6);
  EXPECT_EQ(report.wsc_reference, 6);
  EXPECT_EQ(report.per_rule_best_match.size(), 2u);
}

TEST(SimplifyPolicy, KeepsMeaningAndDropsRedundancy) {
  auto policy = running_example_policy();
  Rule extra = dept_rule();
  extra.subject_condition.insert(cond("dept", {id("CS")}));
  policy.rules.push_back(extra);
  const auto simplified = simplify_policy(policy);
  EXPECT_EQ(meaning(simplified), meaning(policy));
  EXPECT_EQ(simplified.rules.size(), 2u);
  EXPECT_TRUE(std::is_sorted(simplified.rules.begin(), simplified.rules.end()));
}
