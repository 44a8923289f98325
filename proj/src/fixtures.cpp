#include "rebac_miner/fixtures.hpp"

namespace rebac_miner {

namespace {

std::shared_ptr<const ObjectModel> running_example_model() {
  auto cm = std::make_shared<ClassModel>();
  for (const char* cls : {"Department", "DocType", "Student", "Document"}) cm->add_class(cls);
  cm->add_field("Student", "dept", {"Department", Multiplicity::One});
  cm->add_field("Document", "dept", {"Department", Multiplicity::One});
  cm->add_field("Document", "type", {"DocType", Multiplicity::One});

  auto om = std::make_shared<ObjectModel>(cm);
  const auto cs = om->add_object("CS", "Department");
  om->add_object("EE", "Department");
  const auto handbook = om->add_object("Handbook", "DocType");

  const auto cs_student = om->add_object("CS-student-1", "Student");
  const auto ee_student = om->add_object("EE-student-1", "Student");
  om->set_field(cs_student, "dept", Atom::object(cs));
  om->set_field(ee_student, "dept", UnknownValue{});

  const auto doc1 = om->add_object("CS-doc-1", "Document");
  const auto doc2 = om->add_object("CS-doc-2", "Document");
  const auto doc3 = om->add_object("CS-doc-3", "Document");
  om->set_field(doc1, "dept", UnknownValue{});
  om->set_field(doc1, "type", Atom::object(handbook));
  om->set_field(doc2, "dept", Atom::object(cs));
  om->set_field(doc2, "type", UnknownValue{});
  om->set_field(doc3, "dept", UnknownValue{});
  om->set_field(doc3, "type", UnknownValue{});
  return om;
}

}  // namespace

AclPolicy running_example_acl() {
  AclPolicy acl;
  acl.model = running_example_model();
  acl.actions = {"read"};
  acl.authorizations = {
      {"CS-student-1", "CS-doc-1", "read"},
      {"CS-student-1", "CS-doc-2", "read"},
      {"EE-student-1", "CS-doc-1", "read"},
  };
  return acl;
}

Policy running_example_policy() {
  Policy p;
  p.model = running_example_model();
  p.actions = {"read"};
  p.rules.push_back(Rule{"Student",
                         {},
                         "Document",
                         {},
                         {AtomicConstraint{{"dept"}, ConstraintOp::Equal, {"dept"}, false}},
                         {"read"}});
  p.rules.push_back(Rule{"Student",
                         {},
                         "Document",
                         {make_condition({"type"}, ConditionOp::In, {Constant{std::string("Handbook")}})},
                         {},
                         {"read"}});
  return p;
}

}  // namespace rebac_miner
