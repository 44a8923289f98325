#include <gtest/gtest.h>

#include "rebac_miner/datagen.hpp"
#include "rebac_miner/errors.hpp"

using namespace rebac_miner;

namespace {

std::size_t instances(const ObjectModel& om, const std::string& cls) { return om.instances(cls).size(); }

}  // namespace

TEST(Rng, DeterministicAndInRange) {
  Rng a(42), b(42), c(42, 1);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
    const double u = a.uniform01();
    b.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.below(7), 7u);
    b.below(7);
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, MomentsAreRoughlyRight) {
  Rng r(1);
  const int n = 20000;
  double sum = 0, sq = 0;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal(10.0, 2.0);
    sum += x;
    sq += x * x;
    hits += r.bernoulli(0.25);
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 10.0, 0.1);
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 2.0, 0.1);
  EXPECT_NEAR(hits / double(n), 0.25, 0.02);
}

TEST(Specs, BuiltinsLintClean) {
  for (const auto& name : builtin_spec_names()) {
    const auto spec = builtin_spec(name);
    EXPECT_EQ(spec.name, name);
    EXPECT_TRUE(spec.lint().empty()) << name;
    EXPECT_FALSE(spec.rules.empty());
  }
  EXPECT_THROW(builtin_spec("nope"), UsageError);
}

TEST(Specs, LintFindsProblems) {
  auto spec = builtin_spec("univ-mini");
  spec.classification[{"Student", "shoe"}] = FieldClass::Normal;
  spec.classification[{"Document", "dept"}] = FieldClass::Required;
  spec.classification[{"Document", "draft"}] = FieldClass::Important;
  EXPECT_EQ(spec.lint().size(), 2u);
}

TEST(Generate, Deterministic) {
  const auto spec = builtin_spec("org-chart");
  const auto a = generate(spec, 5, 9);
  const auto b = generate(spec, 5, 9);
  EXPECT_EQ(*a.model, *b.model);
  EXPECT_EQ(a.acl.authorizations, b.acl.authorizations);
  EXPECT_FALSE(a.acl.authorizations.empty());
  EXPECT_EQ(count_unknowns(*a.model).unknown, 0u);
}

TEST(Generate, CountsScaleWithN) {
  const auto spec = builtin_spec("univ-mini");
  const auto small = generate(spec, 2, 3);
  const auto large = generate(spec, 20, 3);
  EXPECT_EQ(instances(*small.model, "Department"), 3u);
  EXPECT_EQ(instances(*large.model, "Department"), 3u);
  EXPECT_GT(instances(*large.model, "Document"), 3 * instances(*small.model, "Document"));
  EXPECT_NEAR(static_cast<double>(instances(*large.model, "Document")), 100.0, 40.0);
  EXPECT_GE(instances(*small.model, "Student"), 1u);
}

TEST(Generate, RejectsBadSize) {
  EXPECT_THROW(generate(builtin_spec("univ-mini"), 0, 1), UsageError);
}

TEST(Inject, ZeroScaleChangesNothing) {
  const auto spec = builtin_spec("org-chart");
  const auto gen = generate(spec, 5, 2);
  const auto inj = inject_unknowns(*gen.model, spec, 0.0, 2);
  EXPECT_EQ(*inj.model, *gen.model);
  for (const auto& [key, p] : inj.probabilities) EXPECT_EQ(p, 0.0);
  EXPECT_THROW(inject_unknowns(*gen.model, spec, -1.0, 2), UsageError);
}

TEST(Inject, OnlyReplacesByUnknownAndSparesRequired) {
  const auto spec = builtin_spec("org-chart");
  const auto gen = generate(spec, 5, 4);
  for (double s : {1.0, 3.0, 10.0}) {
    const auto inj = inject_unknowns(*gen.model, spec, s, 4);
    ASSERT_EQ(inj.model->size(), gen.model->size());
    for (ObjectRef o = 0; o < gen.model->size(); ++o) {
      const auto& before = gen.model->object(o);
      const auto& after = inj.model->object(o);
      for (const auto& [field, v] : before.fields) {
        const auto& w = after.fields.at(field);
        EXPECT_TRUE(w == v || std::holds_alternative<UnknownValue>(w));
        if (spec.field_class(before.type, field) == FieldClass::Required) EXPECT_EQ(w, v);
      }
    }
    const auto stats = count_unknowns(*inj.model);
    EXPECT_FALSE(stats.unknown_by_field.contains({"Document", "project"}));
    for (const auto& [key, p] : inj.probabilities) {
      switch (spec.field_class(key.first, key.second)) {
        case FieldClass::Required:
          EXPECT_EQ(p, 0.0);
          break;
        case FieldClass::Important:
          EXPECT_DOUBLE_EQ(p, 0.01 * s);
          break;
        case FieldClass::Normal:
          EXPECT_GE(p, 0.02 * s);
          EXPECT_LE(p, std::min(1.0, 0.05 * s));
          break;
      }
    }
  }
  EXPECT_FALSE(inject_unknowns(*gen.model, spec, 30.0, 4).warnings.empty());
}

TEST(Inject, Deterministic) {
  const auto spec = builtin_spec("univ-mini");
  const auto gen = generate(spec, 5, 6);
  EXPECT_EQ(*inject_unknowns(*gen.model, spec, 2, 8).model, *inject_unknowns(*gen.model, spec, 2, 8).model);
}

TEST(UnknownStats, Fraction) {
  EXPECT_EQ(UnknownStats{}.fraction(), 0.0);
  UnknownStats s;
  s.unknown = 1;
  s.total = 4;
  EXPECT_DOUBLE_EQ(s.fraction(), 0.25);
}
