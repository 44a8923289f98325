#include <gtest/gtest.h>

#include "rebac_miner/errors.hpp"
#include "rebac_miner/fixtures.hpp"
#include "rebac_miner/model.hpp"

using namespace rebac_miner;

namespace {

std::shared_ptr<ClassModel> org_classes() {
  auto cm = std::make_shared<ClassModel>();
  for (const char* c : {"Dept", "Project", "Employee"}) cm->add_class(c);
  cm->add_field("Project", "dept", {"Dept", Multiplicity::One});
  cm->add_field("Employee", "projects", {"Project", Multiplicity::Many});
  cm->add_field("Employee", "mentor", {"Employee", Multiplicity::Optional});
  cm->add_field("Employee", "active", {std::string(kBooleanType), Multiplicity::One});
  return cm;
}

}  // namespace

TEST(Multiplicity, TextRoundTrip) {
  for (auto m : {Multiplicity::One, Multiplicity::Optional, Multiplicity::Many}) {
    EXPECT_EQ(multiplicity_from_string(to_string(m)), m);
  }
  EXPECT_EQ(multiplicity_from_string("*"), Multiplicity::Many);
  EXPECT_FALSE(multiplicity_from_string("lots").has_value());
}

TEST(ClassModel, RejectsBadDeclarations) {
  ClassModel cm;
  cm.add_class("A");
  EXPECT_THROW(cm.add_field("B", "x", {"A", Multiplicity::One}), UsageError);
  cm.add_field("A", "x", {"A", Multiplicity::One});
  EXPECT_THROW(cm.add_field("A", "x", {"A", Multiplicity::One}), UsageError);
  EXPECT_THROW(cm.add_field("A", "id", {"A", Multiplicity::One}), UsageError);
  EXPECT_THROW(cm.add_field("A", "a.b", {"A", Multiplicity::One}), UsageError);
  cm.add_field("A", "y", {"Nowhere", Multiplicity::One});
  EXPECT_THROW(cm.validate(), UsageError);
}

TEST(ClassModel, BooleanFieldsMustBeSingleValued) {
  ClassModel cm;
  cm.add_class("A");
  cm.add_field("A", "flags", {std::string(kBooleanType), Multiplicity::Many});
  EXPECT_THROW(cm.validate(), UsageError);
}

TEST(Paths, ParseAndPrint) {
  EXPECT_EQ(parse_path("dept.head"), (Path{"dept", "head"}));
  EXPECT_TRUE(parse_path("").empty());
  EXPECT_EQ(path_text(Path{"a", "b"}), "a.b");
  EXPECT_THROW(parse_path("a..b"), UsageError);
}

TEST(Paths, TypesAndMultiplicities) {
  const auto cm = org_classes();
  EXPECT_EQ(type_path(*cm, "Employee", {}).type, "Employee");
  const auto many = type_path(*cm, "Employee", {"projects", "dept"});
  EXPECT_EQ(many.type, "Dept");
  EXPECT_EQ(many.multiplicity, Multiplicity::Many);
  const auto opt = type_path(*cm, "Employee", {"mentor", "active"});
  EXPECT_EQ(opt.type, kBooleanType);
  EXPECT_EQ(opt.multiplicity, Multiplicity::Optional);
  EXPECT_EQ(type_path(*cm, "Employee", {"id"}).type, "Employee");
  EXPECT_THROW(type_path(*cm, "Employee", {"id", "projects"}), UsageError);
  EXPECT_THROW(type_path(*cm, "Employee", {"active", "x"}), UsageError);
  EXPECT_THROW(type_path(*cm, "Employee", {"salary"}), UsageError);
}

TEST(ObjectModel, FieldDefaultsAndChecks) {
  ObjectModel om(org_classes());
  const auto d = om.add_object("D", "Dept");
  const auto p = om.add_object("P", "Project");
  const auto e = om.add_object("E", "Employee");
  EXPECT_THROW(om.add_object("E", "Employee"), UsageError);
  EXPECT_THROW(om.add_object("X", "Nowhere"), UsageError);
  EXPECT_EQ(om.field(e, "projects"), FieldValue(std::vector<Atom>{}));
  EXPECT_EQ(om.field(e, "mentor"), FieldValue(NoneValue{}));
  EXPECT_THROW(om.set_field(e, "projects", Atom::object(p)), UsageError);
  EXPECT_THROW(om.set_field(e, "mentor", Atom::object(d)), UsageError);
  EXPECT_THROW(om.set_field(e, "active", Atom::object(d)), UsageError);
  om.set_field(e, "projects", std::vector<Atom>{Atom::object(p), Atom::object(p)});
  EXPECT_EQ(om.field(e, "projects"), FieldValue(std::vector<Atom>{Atom::object(p)}));
  // One-valued fields must be set.
  EXPECT_THROW(om.validate(), UsageError);
  om.set_field(p, "dept", Atom::object(d));
  om.set_field(e, "active", Atom::boolean(true));
  EXPECT_NO_THROW(om.validate());
  EXPECT_EQ(om.instances("Employee"), std::vector<ObjectRef>{e});
  EXPECT_TRUE(om.instances("Nobody").empty());
}

TEST(ObjectModel, ConstantsResolve) {
  ObjectModel om(org_classes());
  const auto d = om.add_object("D", "Dept");
  EXPECT_EQ(om.resolve(Constant{std::string("D")}), Atom::object(d));
  EXPECT_EQ(om.resolve(Constant{true}), Atom::boolean(true));
  EXPECT_FALSE(om.resolve(Constant{std::string("missing")}).has_value());
  EXPECT_EQ(om.to_constant(Atom::object(d)), Constant{std::string("D")});
  EXPECT_EQ(om.atom_text(Atom::boolean(false)), "false");
}

TEST(Navigation, RunningExample) {
  const auto acl = running_example_acl();
  const auto& om = *acl.model;
  const auto ee = *om.find("EE-student-1");
  const auto cs = *om.find("CS-student-1");
  EXPECT_EQ(nav(om, ee, {"dept"}), NavValue(UnknownValue{}));
  EXPECT_EQ(nav(om, cs, {"dept"}), NavValue(Atom::object(*om.find("CS"))));
  EXPECT_EQ(nav(om, cs, {}), NavValue(Atom::object(cs)));
  EXPECT_EQ(nav(om, cs, {"id"}), NavValue(Atom::object(cs)));
}

TEST(Navigation, ManyPathsFlattenAndMarkUnknown) {
  ObjectModel om(org_classes());
  const auto d1 = om.add_object("D1", "Dept");
  const auto d2 = om.add_object("D2", "Dept");
  const auto p1 = om.add_object("P1", "Project");
  const auto p2 = om.add_object("P2", "Project");
  const auto p3 = om.add_object("P3", "Project");
  const auto e = om.add_object("E", "Employee");
  const auto f = om.add_object("F", "Employee");
  om.set_field(p1, "dept", Atom::object(d1));
  om.set_field(p2, "dept", Atom::object(d2));
  om.set_field(p3, "dept", UnknownValue{});
  om.set_field(e, "projects", std::vector<Atom>{Atom::object(p1), Atom::object(p2)});
  om.set_field(f, "projects", std::vector<Atom>{Atom::object(p1), Atom::object(p3)});

  EXPECT_EQ(nav(om, e, {"projects", "dept"}),
            NavValue(NavSet{{Atom::object(d1), Atom::object(d2)}, false}));
  EXPECT_EQ(nav(om, f, {"projects", "dept"}), NavValue(NavSet{{Atom::object(d1)}, true}));

  om.set_field(e, "projects", UnknownValue{});
  EXPECT_EQ(nav(om, e, {"projects", "dept"}), NavValue(NavSet{{}, true}));
}

TEST(Navigation, NoneShortCircuits) {
  ObjectModel om(org_classes());
  const auto e = om.add_object("E", "Employee");
  EXPECT_EQ(nav(om, e, {"mentor", "active"}), NavValue(NoneValue{}));
  EXPECT_EQ(nav(om, e, {"mentor", "projects"}), NavValue(NavSet{}));
  const auto m = om.add_object("M", "Employee");
  om.set_field(e, "mentor", Atom::object(m));
  om.set_field(m, "active", UnknownValue{});
  EXPECT_EQ(nav(om, e, {"mentor", "active"}), NavValue(UnknownValue{}));
}
