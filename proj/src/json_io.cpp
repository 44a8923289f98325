#include "rebac_miner/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "rebac_miner/errors.hpp"

namespace rebac_miner {

namespace {

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError(what); }

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_fail(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(where + ": missing \"" + key + "\"");
  return *it;
}

std::string string_member(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_string()) schema_fail(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

bool bool_member(const json& j, const char* key, const std::string& where, bool fallback) {
  if (!j.is_object()) schema_fail(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) schema_fail(where + ": \"" + key + "\" must be a boolean");
  return it->get<bool>();
}

const json& array_member(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_array()) schema_fail(where + ": \"" + key + "\" must be an array");
  return v;
}

bool is_unknown(const json& v) {
  if (!v.is_object() || v.size() != 1) return false;
  auto it = v.find(kUnknownKey);
  return it != v.end() && it->is_boolean() && it->get<bool>();
}

json atom_to_json(const ObjectModel& om, Atom a) {
  if (a.kind == Atom::Kind::Boolean) return a.value != 0;
  return om.object(a.value).id;
}

json value_to_json(const ObjectModel& om, const FieldValue& v) {
  return std::visit(
      [&](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NoneValue>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, UnknownValue>) {
          return json{{std::string(kUnknownKey), true}};
        } else if constexpr (std::is_same_v<T, Atom>) {
          return atom_to_json(om, x);
        } else {
          json arr = json::array();
          for (Atom a : x) arr.push_back(atom_to_json(om, a));
          return arr;
        }
      },
      v);
}

Atom atom_from_json(const ObjectModel& om, const FieldDecl& decl, const json& v,
                    const std::string& where) {
  if (decl.type == kBooleanType) {
    if (!v.is_boolean()) schema_fail(where + ": expected a boolean");
    return Atom::boolean(v.get<bool>());
  }
  if (!v.is_string()) schema_fail(where + ": expected an object id");
  const auto id = v.get<std::string>();
  const auto ref = om.find(id);
  if (!ref) schema_fail(where + ": unknown object id '" + id + "'");
  if (om.object(*ref).type != decl.type) {
    schema_fail(where + ": '" + id + "' is not a " + decl.type);
  }
  return Atom::object(*ref);
}

FieldValue value_from_json(const ObjectModel& om, const FieldDecl& decl, const json& v,
                           const std::string& where) {
  if (v.is_null()) return NoneValue{};
  if (is_unknown(v)) return UnknownValue{};
  if (decl.multiplicity == Multiplicity::Many) {
    if (!v.is_array()) schema_fail(where + ": expected an array");
    std::vector<Atom> atoms;
    for (const auto& e : v) atoms.push_back(atom_from_json(om, decl, e, where));
    return atoms;
  }
  return atom_from_json(om, decl, v, where);
}

json constant_to_json(const Constant& c) {
  if (const bool* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

Constant constant_from_json(const json& v, const std::string& where) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) return v.get<std::string>();
  schema_fail(where + ": constants are booleans or object ids");
}

json condition_to_json(const AtomicCondition& c) {
  json values = json::array();
  for (const auto& v : c.values) values.push_back(constant_to_json(v));
  return {{"path", path_text(c.path)},
          {"op", std::string(to_string(c.op))},
          {"values", values},
          {"negated", c.negated}};
}

AtomicCondition condition_from_json(const json& j, const std::string& where) {
  const auto op_text = string_member(j, "op", where);
  const auto op = condition_op_from_string(op_text);
  if (!op) schema_fail(where + ": unknown condition operator '" + op_text + "'");
  std::vector<Constant> values;
  for (const auto& v : array_member(j, "values", where)) values.push_back(constant_from_json(v, where));
  try {
    return make_condition(parse_path(string_member(j, "path", where)), *op, std::move(values),
                          bool_member(j, "negated", where, false));
  } catch (const SchemaError&) {
    throw;
  } catch (const UsageError& e) {
    schema_fail(where + ": " + e.what());
  }
}

json constraint_to_json(const AtomicConstraint& c) {
  return {{"subject_path", path_text(c.subject_path)},
          {"op", std::string(to_string(c.op))},
          {"resource_path", path_text(c.resource_path)},
          {"negated", c.negated}};
}

AtomicConstraint constraint_from_json(const json& j, const std::string& where) {
  const auto op_text = string_member(j, "op", where);
  const auto op = constraint_op_from_string(op_text);
  if (!op) schema_fail(where + ": unknown constraint operator '" + op_text + "'");
  try {
    return AtomicConstraint{parse_path(string_member(j, "subject_path", where)), *op,
                            parse_path(string_member(j, "resource_path", where)),
                            bool_member(j, "negated", where, false)};
  } catch (const SchemaError&) {
    throw;
  } catch (const UsageError& e) {
    schema_fail(where + ": " + e.what());
  }
}

json rule_to_json(const Rule& r) {
  json sc = json::array();
  for (const auto& c : r.subject_condition) sc.push_back(condition_to_json(c));
  json rc = json::array();
  for (const auto& c : r.resource_condition) rc.push_back(condition_to_json(c));
  json con = json::array();
  for (const auto& c : r.constraint) con.push_back(constraint_to_json(c));
  return {{"subject_type", r.subject_type}, {"subject_condition", sc},
          {"resource_type", r.resource_type}, {"resource_condition", rc},
          {"constraint", con},            {"actions", r.actions}};
}

std::set<std::string> string_set(const json& arr, const std::string& where) {
  std::set<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) schema_fail(where + ": expected strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

Rule rule_from_json(const json& j, const std::string& where) {
  Rule r;
  r.subject_type = string_member(j, "subject_type", where);
  r.resource_type = string_member(j, "resource_type", where);
  for (const auto& c : array_member(j, "subject_condition", where)) {
    r.subject_condition.insert(condition_from_json(c, where + ".subject_condition"));
  }
  for (const auto& c : array_member(j, "resource_condition", where)) {
    r.resource_condition.insert(condition_from_json(c, where + ".resource_condition"));
  }
  for (const auto& c : array_member(j, "constraint", where)) {
    r.constraint.insert(constraint_from_json(c, where + ".constraint"));
  }
  r.actions = string_set(array_member(j, "actions", where), where + ".actions");
  return r;
}

}  // namespace

json class_model_to_json(const ClassModel& cm) {
  json classes = json::object();
  for (const auto& cls : cm.class_names()) {
    json fields = json::object();
    for (const auto& [name, decl] : cm.fields(cls)) {
      fields[name] = {{"type", decl.type},
                      {"multiplicity", std::string(to_string(decl.multiplicity))}};
    }
    classes[cls] = fields;
  }
  return {{"classes", classes}};
}

std::shared_ptr<ClassModel> class_model_from_json(const json& j) {
  const json& classes = member(j, "classes", "class model");
  if (!classes.is_object()) schema_fail("class model: \"classes\" must be an object");
  auto cm = std::make_shared<ClassModel>();
  try {
    for (const auto& [cls, _] : classes.items()) cm->add_class(cls);
    for (const auto& [cls, fields] : classes.items()) {
      if (!fields.is_object()) schema_fail("class " + cls + ": fields must be an object");
      for (const auto& [name, decl] : fields.items()) {
        const std::string where = "field " + cls + "." + name;
        const auto mult_text = string_member(decl, "multiplicity", where);
        const auto mult = multiplicity_from_string(mult_text);
        if (!mult) schema_fail(where + ": unknown multiplicity '" + mult_text + "'");
        cm->add_field(cls, name, {string_member(decl, "type", where), *mult});
      }
    }
    cm->validate();
  } catch (const SchemaError&) {
    throw;
  } catch (const UsageError& e) {
    schema_fail(std::string("class model: ") + e.what());
  }
  return cm;
}

json object_model_to_json(const ObjectModel& om) {
  json objects = json::array();
  for (ObjectRef o = 0; o < om.size(); ++o) {
    const auto& obj = om.object(o);
    json fields = json::object();
    for (const auto& [name, value] : obj.fields) fields[name] = value_to_json(om, value);
    objects.push_back({{"id", obj.id}, {"class", obj.type}, {"fields", fields}});
  }
  return {{"objects", objects}};
}

std::shared_ptr<ObjectModel> object_model_from_json(const json& j,
                                                    std::shared_ptr<const ClassModel> cm) {
  const json& objects = array_member(j, "objects", "object model");
  auto om = std::make_shared<ObjectModel>(cm);
  try {
    for (const auto& o : objects) {
      om->add_object(string_member(o, "id", "object"), string_member(o, "class", "object"));
    }
    for (const auto& o : objects) {
      const auto id = o["id"].get<std::string>();
      const ObjectRef ref = *om->find(id);
      const auto& cls = om->object(ref).type;
      const json& fields = member(o, "fields", "object " + id);
      if (!fields.is_object()) schema_fail("object " + id + ": fields must be an object");
      for (const auto& [name, v] : fields.items()) {
        const std::string where = "object " + id + "." + name;
        const auto decl = cm->field(cls, name);
        if (!decl) schema_fail(where + ": class " + cls + " declares no such field");
        om->set_field(ref, name, value_from_json(*om, *decl, v, where));
      }
    }
    om->validate();
  } catch (const SchemaError&) {
    throw;
  } catch (const UsageError& e) {
    schema_fail(std::string("object model: ") + e.what());
  }
  return om;
}

json policy_to_json(const Policy& p) {
  json rules = json::array();
  for (const auto& r : p.rules) rules.push_back(rule_to_json(r));
  return {{"actions", p.actions}, {"rules", rules}};
}

Policy policy_from_json(const json& j, std::shared_ptr<const ObjectModel> om) {
  Policy p;
  p.model = std::move(om);
  p.actions = string_set(array_member(j, "actions", "policy"), "policy.actions");
  const json& rules = array_member(j, "rules", "policy");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string where = "rule " + std::to_string(i);
    Rule r = rule_from_json(rules[i], where);
    try {
      validate_rule(p.model->class_model(), r);
    } catch (const UsageError& e) {
      schema_fail(where + ": " + e.what());
    }
    for (const auto& a : r.actions) {
      if (!p.actions.contains(a)) schema_fail(where + ": undeclared action '" + a + "'");
    }
    p.rules.push_back(std::move(r));
  }
  return p;
}

json authorizations_to_json(const AclPolicy& acl) {
  json out = json::array();
  for (const auto& t : acl.authorizations) out.push_back({t.subject, t.resource, t.action});
  return out;
}

std::string dump_authorizations(const AclPolicy& acl) {
  const json triples = authorizations_to_json(acl);
  if (triples.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t i = 0; i < triples.size(); ++i) {
    out += "  " + triples[i].dump(-1, ' ', false) + (i + 1 < triples.size() ? ",\n" : "\n");
  }
  return out + "]\n";
}

AclPolicy acl_from_json(const json& j, std::shared_ptr<const ObjectModel> om,
                        const std::set<std::string>& extra_actions) {
  if (!j.is_array()) schema_fail("authorizations: expected an array of triples");
  AclPolicy acl;
  acl.model = std::move(om);
  acl.actions = extra_actions;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() ||
        !t[2].is_string()) {
      schema_fail("authorizations: entries are [subject, resource, action] string triples");
    }
    SraTuple tuple{t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()};
    acl.actions.insert(tuple.action);
    acl.authorizations.insert(std::move(tuple));
  }
  validate_acl(acl);
  return acl;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    schema_fail(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw UsageError("cannot write " + path.string());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Splits one CSV record; doubled quotes inside quoted fields stand for a
/// quote. Returns nothing on an unterminated or stray quote.
std::optional<std::vector<std::string>> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c != '"') {
        out.back() += c;
      } else if (i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else {
        quoted = false;
        if (i + 1 < line.size() && line[i + 1] != ',') return std::nullopt;
      }
    } else if (c == ',') {
      out.emplace_back();
    } else if (c == '"' && out.back().empty()) {
      quoted = true;
    } else if (c == '"') {
      return std::nullopt;
    } else {
      out.back() += c;
    }
  }
  if (quoted) return std::nullopt;
  return out;
}

}  // namespace

void write_dataset_csv(std::ostream& out, const LabeledDataset& ds) {
  for (const auto& f : ds.features) out << csv_field(f.label) << ',';
  out << "label\n";
  for (const auto& row : ds.rows) {
    for (Truth t : row.values) out << to_char(t) << ',';
    out << to_char(row.label) << '\n';
  }
}

LabeledDataset read_dataset_csv(std::istream& in) {
  LabeledDataset ds;
  std::string line;
  if (!std::getline(in, line)) schema_fail("dataset: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto parsed = csv_split(line);
  if (!parsed) schema_fail("dataset header: malformed quoting");
  const auto& header = *parsed;
  if (header.back() != "label") schema_fail("dataset header: last column must be 'label'");
  for (std::size_t i = 0; i + 1 < header.size(); ++i) ds.features.push_back({header[i], 0});

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto split = csv_split(line);
    if (!split) schema_fail("dataset line " + std::to_string(line_no) + ": malformed quoting");
    const auto& cells = *split;
    if (cells.size() != header.size()) {
      schema_fail("dataset line " + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " cells");
    }
    FeatureVector v;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto t = cells[i].size() == 1 ? truth_from_char(cells[i][0]) : std::nullopt;
      if (!t) {
        schema_fail("dataset line " + std::to_string(line_no) + ": cell '" + cells[i] +
                    "' is not T, F or U");
      }
      v.push_back(*t);
    }
    const Truth label = v.back();
    v.pop_back();
    ds.add_row(std::move(v), label);
  }
  return ds;
}

}  // namespace rebac_miner
