#include "rebac_miner/model.hpp"

#include <algorithm>

#include "rebac_miner/errors.hpp"

namespace rebac_miner {

std::string_view to_string(Multiplicity m) noexcept {
  switch (m) {
    case Multiplicity::One:
      return "one";
    case Multiplicity::Optional:
      return "optional";
    case Multiplicity::Many:
      break;
  }
  return "many";
}

std::optional<Multiplicity> multiplicity_from_string(std::string_view s) noexcept {
  if (s == "one" || s == "1") return Multiplicity::One;
  if (s == "optional" || s == "?") return Multiplicity::Optional;
  if (s == "many" || s == "*") return Multiplicity::Many;
  return std::nullopt;
}

void ClassModel::add_class(const std::string& name) {
  if (name.empty() || name == kBooleanType) throw UsageError("invalid class name '" + name + "'");
  classes_.try_emplace(name);
}

void ClassModel::add_field(const std::string& cls, const std::string& field, FieldDecl decl) {
  auto it = classes_.find(cls);
  if (it == classes_.end()) throw UsageError("undeclared class '" + cls + "'");
  if (field.empty() || field == kIdField || field.find('.') != std::string::npos) {
    throw UsageError("invalid field name '" + field + "' in class " + cls);
  }
  if (!it->second.emplace(field, std::move(decl)).second) {
    throw UsageError("duplicate field " + cls + "." + field);
  }
}

bool ClassModel::has_class(std::string_view name) const { return classes_.find(name) != classes_.end(); }

const std::map<std::string, FieldDecl>& ClassModel::fields(const std::string& cls) const {
  auto it = classes_.find(cls);
  if (it == classes_.end()) throw UsageError("undeclared class '" + cls + "'");
  return it->second;
}

std::optional<FieldDecl> ClassModel::field(const std::string& cls, const std::string& name) const {
  auto it = classes_.find(cls);
  if (it == classes_.end()) return std::nullopt;
  auto f = it->second.find(name);
  if (f == it->second.end()) return std::nullopt;
  return f->second;
}

std::vector<std::string> ClassModel::class_names() const {
  std::vector<std::string> out;
  for (const auto& [name, fields] : classes_) out.push_back(name);
  return out;
}

std::size_t ClassModel::field_count() const {
  std::size_t n = 0;
  for (const auto& [name, fields] : classes_) n += fields.size();
  return n;
}

void ClassModel::validate() const {
  for (const auto& [cls, fields] : classes_) {
    for (const auto& [name, decl] : fields) {
      if (decl.type == kBooleanType) {
        if (decl.multiplicity != Multiplicity::One) {
          throw UsageError("Boolean field " + cls + "." + name + " must have multiplicity one");
        }
      } else if (!has_class(decl.type)) {
        throw UsageError("field " + cls + "." + name + " has undeclared type '" + decl.type + "'");
      }
    }
  }
}

std::string path_text(const Path& p) {
  std::string out;
  for (const auto& f : p) {
    if (!out.empty()) out += '.';
    out += f;
  }
  return out;
}

Path parse_path(std::string_view text) {
  Path p;
  if (text.empty()) return p;
  std::size_t start = 0;
  while (true) {
    const auto dot = text.find('.', start);
    const auto part = text.substr(start, dot == std::string_view::npos ? text.npos : dot - start);
    if (part.empty()) throw UsageError("malformed path '" + std::string(text) + "'");
    p.emplace_back(part);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return p;
}

PathType type_path(const ClassModel& cm, const std::string& start, const Path& p) {
  if (!cm.has_class(start)) throw UsageError("undeclared class '" + start + "'");
  PathType out{start, Multiplicity::One};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& name = p[i];
    if (name == kIdField) {
      if (i + 1 != p.size()) throw UsageError("'id' must end a path: " + path_text(p));
      continue;
    }
    if (out.type == kBooleanType) {
      throw UsageError("cannot navigate through Boolean in path " + path_text(p));
    }
    const auto decl = cm.field(out.type, name);
    if (!decl) throw UsageError("class " + out.type + " has no field '" + name + "'");
    out.type = decl->type;
    if (decl->multiplicity == Multiplicity::Many || out.multiplicity == Multiplicity::Many) {
      out.multiplicity = Multiplicity::Many;
    } else if (decl->multiplicity == Multiplicity::Optional) {
      out.multiplicity = Multiplicity::Optional;
    }
  }
  return out;
}

std::string constant_text(const Constant& c) {
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

ObjectModel::ObjectModel(std::shared_ptr<const ClassModel> cm) : cm_(std::move(cm)) {
  if (!cm_) throw UsageError("object model requires a class model");
}

ObjectRef ObjectModel::add_object(std::string id, std::string type) {
  if (id.empty()) throw UsageError("object id must be nonempty");
  if (!cm_->has_class(type)) throw UsageError("object " + id + " has undeclared class '" + type + "'");
  if (by_id_.contains(id)) throw UsageError("duplicate object id '" + id + "'");
  const auto ref = static_cast<ObjectRef>(objects_.size());
  Object obj{id, type, {}};
  for (const auto& [name, decl] : cm_->fields(type)) {
    if (decl.multiplicity == Multiplicity::Many) {
      obj.fields.emplace(name, std::vector<Atom>{});
    } else {
      obj.fields.emplace(name, NoneValue{});
    }
  }
  by_id_.emplace(id, ref);
  by_type_[type].push_back(ref);
  objects_.push_back(std::move(obj));
  return ref;
}

void ObjectModel::set_field(ObjectRef ref, const std::string& name, FieldValue value) {
  auto& obj = objects_.at(ref);
  const auto decl = cm_->field(obj.type, name);
  if (!decl) throw UsageError("class " + obj.type + " has no field '" + name + "'");
  const std::string where = obj.id + "." + name;

  auto check_atom = [&](const Atom& a) {
    if (decl->type == kBooleanType) {
      if (a.kind != Atom::Kind::Boolean) throw UsageError(where + " expects a Boolean");
      return;
    }
    if (a.kind != Atom::Kind::Object || a.value >= objects_.size()) {
      throw UsageError(where + " expects an object of class " + decl->type);
    }
    if (objects_[a.value].type != decl->type) {
      throw UsageError(where + " expects class " + decl->type + ", got " + objects_[a.value].id);
    }
  };

  if (std::holds_alternative<NoneValue>(value)) {
    if (decl->multiplicity != Multiplicity::Optional) throw UsageError(where + " cannot be None");
  } else if (const auto* a = std::get_if<Atom>(&value)) {
    if (decl->multiplicity == Multiplicity::Many) throw UsageError(where + " expects a set");
    check_atom(*a);
  } else if (auto* set = std::get_if<std::vector<Atom>>(&value)) {
    if (decl->multiplicity != Multiplicity::Many) throw UsageError(where + " expects a single value");
    for (const auto& x : *set) check_atom(x);
    std::sort(set->begin(), set->end());
    set->erase(std::unique(set->begin(), set->end()), set->end());
  }
  obj.fields[name] = std::move(value);
}

std::optional<ObjectRef> ObjectModel::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const FieldValue& ObjectModel::field(ObjectRef ref, const std::string& name) const {
  const auto& obj = objects_.at(ref);
  auto it = obj.fields.find(name);
  if (it == obj.fields.end()) throw UsageError("object " + obj.id + " has no field '" + name + "'");
  return it->second;
}

const std::vector<ObjectRef>& ObjectModel::instances(std::string_view cls) const {
  static const std::vector<ObjectRef> kEmpty;
  auto it = by_type_.find(cls);
  return it == by_type_.end() ? kEmpty : it->second;
}

std::string ObjectModel::atom_text(Atom a) const {
  if (a.kind == Atom::Kind::Boolean) return a.value ? "true" : "false";
  return objects_.at(a.value).id;
}

std::optional<Atom> ObjectModel::resolve(const Constant& c) const {
  if (const auto* b = std::get_if<bool>(&c)) return Atom::boolean(*b);
  const auto ref = find(std::get<std::string>(c));
  if (!ref) return std::nullopt;
  return Atom::object(*ref);
}

Constant ObjectModel::to_constant(Atom a) const {
  if (a.kind == Atom::Kind::Boolean) return a.value != 0;
  return objects_.at(a.value).id;
}

void ObjectModel::validate() const {
  for (const auto& obj : objects_) {
    for (const auto& [name, decl] : cm_->fields(obj.type)) {
      const auto& v = obj.fields.at(name);
      if (decl.multiplicity == Multiplicity::One && std::holds_alternative<NoneValue>(v)) {
        throw UsageError("field " + obj.id + "." + name + " (multiplicity one) has no value");
      }
    }
  }
}

namespace {

void insert_sorted(std::vector<Atom>& into, const std::vector<Atom>& from) {
  into.insert(into.end(), from.begin(), from.end());
}

}  // namespace

NavValue nav(const ObjectModel& om, ObjectRef o, const Path& p) {
  const auto pt = type_path(om.class_model(), om.object(o).type, p);
  return nav(om, o, p, pt.multiplicity);
}

NavValue nav(const ObjectModel& om, ObjectRef o, const Path& p, Multiplicity path_multiplicity) {
  const bool many = path_multiplicity == Multiplicity::Many;
  Atom current = Atom::object(o);
  std::optional<NavSet> set;

  for (const auto& name : p) {
    if (name == kIdField) continue;
    if (!set) {
      const auto& fv = om.field(current.value, name);
      if (std::holds_alternative<NoneValue>(fv)) {
        if (many) return NavSet{};
        return NoneValue{};
      }
      if (std::holds_alternative<UnknownValue>(fv)) {
        if (many) return NavSet{{}, true};
        return UnknownValue{};
      }
      if (const auto* a = std::get_if<Atom>(&fv)) {
        current = *a;
      } else {
        set = NavSet{std::get<std::vector<Atom>>(fv), false};
      }
      continue;
    }
    NavSet next{{}, set->has_unknown};
    for (const auto& a : set->elements) {
      const auto& fv = om.field(a.value, name);
      if (std::holds_alternative<UnknownValue>(fv)) {
        next.has_unknown = true;
      } else if (const auto* x = std::get_if<Atom>(&fv)) {
        next.elements.push_back(*x);
      } else if (const auto* xs = std::get_if<std::vector<Atom>>(&fv)) {
        insert_sorted(next.elements, *xs);
      }
    }
    std::sort(next.elements.begin(), next.elements.end());
    next.elements.erase(std::unique(next.elements.begin(), next.elements.end()),
                        next.elements.end());
    set = std::move(next);
  }

  if (set) return *std::move(set);
  if (many) return NavSet{{current}, false};
  return current;
}

}  // namespace rebac_miner
