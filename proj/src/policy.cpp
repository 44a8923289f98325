#include "rebac_miner/policy.hpp"

#include <algorithm>
#include <stdexcept>

#include "rebac_miner/errors.hpp"

namespace rebac_miner {

AtomicCondition make_condition(Path path, ConditionOp op, std::vector<Constant> values,
                               bool negated) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return AtomicCondition{std::move(path), op, std::move(values), negated};
}

std::string_view to_string(ConstraintOp op) noexcept {
  switch (op) {
    case ConstraintOp::Equal:
      return "equal";
    case ConstraintOp::In:
      return "in";
    case ConstraintOp::Contains:
      return "contains";
    case ConstraintOp::Supseteq:
      return "supseteq";
    case ConstraintOp::Subseteq:
      break;
  }
  return "subseteq";
}

std::optional<ConstraintOp> constraint_op_from_string(std::string_view s) noexcept {
  for (auto op : {ConstraintOp::Equal, ConstraintOp::In, ConstraintOp::Contains,
                  ConstraintOp::Supseteq, ConstraintOp::Subseteq}) {
    if (to_string(op) == s) return op;
  }
  return std::nullopt;
}

std::string_view to_string(ConditionOp op) noexcept {
  return op == ConditionOp::In ? "in" : "contains";
}

std::optional<ConditionOp> condition_op_from_string(std::string_view s) noexcept {
  if (s == "in") return ConditionOp::In;
  if (s == "contains") return ConditionOp::Contains;
  return std::nullopt;
}

ConditionOp condition_op_for(Multiplicity m) noexcept {
  return m == Multiplicity::Many ? ConditionOp::Contains : ConditionOp::In;
}

bool constraint_op_compatible(ConstraintOp op, Multiplicity subject,
                              Multiplicity resource) noexcept {
  const bool s_many = subject == Multiplicity::Many;
  const bool r_many = resource == Multiplicity::Many;
  switch (op) {
    case ConstraintOp::Equal:
      return !s_many && !r_many;
    case ConstraintOp::In:
      return !s_many && r_many;
    case ConstraintOp::Contains:
      return s_many && !r_many;
    case ConstraintOp::Supseteq:
    case ConstraintOp::Subseteq:
      return s_many && r_many;
  }
  return false;
}

void validate_condition(const ClassModel& cm, const std::string& type, const AtomicCondition& c) {
  if (c.path.empty()) throw UsageError("condition on " + type + " has an empty path");
  const auto pt = type_path(cm, type, c.path);
  const std::string where = type + "." + path_text(c.path);
  if (c.op != condition_op_for(pt.multiplicity)) {
    throw UsageError("condition on " + where + " must use '" +
                     std::string(to_string(condition_op_for(pt.multiplicity))) + "'");
  }
  if (c.values.empty()) throw UsageError("condition on " + where + " has no values");
  if (c.op == ConditionOp::Contains && c.values.size() != 1) {
    throw UsageError("'contains' condition on " + where + " needs exactly one value");
  }
  if (!std::is_sorted(c.values.begin(), c.values.end()) ||
      std::adjacent_find(c.values.begin(), c.values.end()) != c.values.end()) {
    throw UsageError("condition on " + where + " has unnormalized values");
  }
  const bool boolean = pt.type == kBooleanType;
  for (const auto& v : c.values) {
    if (std::holds_alternative<bool>(v) != boolean) {
      throw UsageError("condition on " + where + " has a value of the wrong kind: " +
                       constant_text(v));
    }
  }
}

void validate_constraint(const ClassModel& cm, const std::string& subject_type,
                         const std::string& resource_type, const AtomicConstraint& c) {
  const auto st = type_path(cm, subject_type, c.subject_path);
  const auto rt = type_path(cm, resource_type, c.resource_path);
  const std::string text = to_string(c);
  if (st.type != rt.type) {
    throw UsageError("constraint " + text + " compares " + st.type + " with " + rt.type);
  }
  if (!constraint_op_compatible(c.op, st.multiplicity, rt.multiplicity)) {
    throw UsageError("constraint " + text + " uses an operator incompatible with its paths");
  }
}

void validate_rule(const ClassModel& cm, const Rule& rule) {
  if (!cm.has_class(rule.subject_type)) {
    throw UsageError("rule subject type '" + rule.subject_type + "' is undeclared");
  }
  if (!cm.has_class(rule.resource_type)) {
    throw UsageError("rule resource type '" + rule.resource_type + "' is undeclared");
  }
  if (rule.actions.empty()) throw UsageError("rule has no actions");
  for (const auto& c : rule.subject_condition) validate_condition(cm, rule.subject_type, c);
  for (const auto& c : rule.resource_condition) validate_condition(cm, rule.resource_type, c);
  for (const auto& c : rule.constraint) {
    validate_constraint(cm, rule.subject_type, rule.resource_type, c);
  }
}

void validate_acl(const AclPolicy& acl) {
  if (!acl.model) throw UsageError("ACL policy has no object model");
  for (const auto& t : acl.authorizations) {
    if (!acl.model->find(t.subject)) throw SchemaError("unknown subject id '" + t.subject + "'");
    if (!acl.model->find(t.resource)) throw SchemaError("unknown resource id '" + t.resource + "'");
    if (!acl.actions.contains(t.action)) throw SchemaError("undeclared action '" + t.action + "'");
  }
}

namespace {

bool contains_atom(std::span<const Atom> sorted, Atom a) {
  return std::binary_search(sorted.begin(), sorted.end(), a);
}

/// A navigated value seen as a set: None is empty, unknown is a set of
/// unknown content.
NavSet as_set(const NavValue& v) {
  if (const auto* s = std::get_if<NavSet>(&v)) return *s;
  if (const auto* a = std::get_if<Atom>(&v)) return NavSet{{*a}, false};
  if (std::holds_alternative<UnknownValue>(v)) return NavSet{{}, true};
  return NavSet{};
}

bool set_has_unknown(const NavValue& v) {
  const auto* s = std::get_if<NavSet>(&v);
  return s != nullptr && s->has_unknown;
}

Truth member(const NavValue& single, const NavSet& set) {
  if (std::holds_alternative<NoneValue>(single)) return Truth::F;
  if (std::holds_alternative<UnknownValue>(single)) {
    return set.elements.empty() && !set.has_unknown ? Truth::F : Truth::U;
  }
  const auto* a = std::get_if<Atom>(&single);
  if (a == nullptr) throw std::logic_error("membership test on a set-valued operand");
  if (contains_atom(set.elements, *a)) return Truth::T;
  return set.has_unknown ? Truth::U : Truth::F;
}

Truth superset(const NavSet& a, const NavSet& b) {
  const bool known_subset =
      std::includes(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end());
  if (!b.has_unknown && known_subset) return Truth::T;
  if (!a.has_unknown && !known_subset) return Truth::F;
  return Truth::U;
}

Truth equal(const NavValue& a, const NavValue& b) {
  if (std::holds_alternative<UnknownValue>(a) || std::holds_alternative<UnknownValue>(b)) {
    return Truth::U;
  }
  if (std::holds_alternative<NavSet>(a) || std::holds_alternative<NavSet>(b)) {
    throw std::logic_error("equality on a set-valued operand");
  }
  return a == b ? Truth::T : Truth::F;
}

}  // namespace

Truth condition_truth(const NavValue& v, std::span<const Atom> values, bool negated) {
  Truth base = Truth::F;
  if (std::holds_alternative<UnknownValue>(v)) {
    base = Truth::U;
  } else if (const auto* a = std::get_if<Atom>(&v)) {
    base = contains_atom(values, *a) ? Truth::T : Truth::F;
  } else if (const auto* s = std::get_if<NavSet>(&v)) {
    const bool hit = std::any_of(values.begin(), values.end(),
                                 [&](Atom x) { return contains_atom(s->elements, x); });
    base = hit ? Truth::T : (s->has_unknown ? Truth::U : Truth::F);
  }
  if (!negated) return base;
  if (base == Truth::T && set_has_unknown(v)) return Truth::U;
  return kleene_not(base);
}

Truth constraint_truth(const NavValue& subject, ConstraintOp op, const NavValue& resource,
                       bool negated) {
  Truth base = Truth::F;
  switch (op) {
    case ConstraintOp::Equal:
      base = equal(subject, resource);
      break;
    case ConstraintOp::In:
      base = member(subject, as_set(resource));
      break;
    case ConstraintOp::Contains:
      base = member(resource, as_set(subject));
      break;
    case ConstraintOp::Supseteq:
      base = superset(as_set(subject), as_set(resource));
      break;
    case ConstraintOp::Subseteq:
      base = superset(as_set(resource), as_set(subject));
      break;
  }
  if (!negated) return base;
  if (base == Truth::T && (set_has_unknown(subject) || set_has_unknown(resource))) return Truth::U;
  return kleene_not(base);
}

namespace {

std::vector<Atom> resolve_values(const ObjectModel& om, const AtomicCondition& c) {
  std::vector<Atom> out;
  for (const auto& v : c.values) {
    if (auto a = om.resolve(v)) out.push_back(*a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Truth tval(const ObjectModel& om, ObjectRef o, const AtomicCondition& c) {
  const auto values = resolve_values(om, c);
  return condition_truth(nav(om, o, c.path), values, c.negated);
}

Truth tval(const ObjectModel& om, ObjectRef s, ObjectRef r, const AtomicConstraint& c) {
  return constraint_truth(nav(om, s, c.subject_path), c.op, nav(om, r, c.resource_path),
                          c.negated);
}

bool satisfies(const ObjectModel& om, const SraTuple& t, const Rule& rule) {
  if (!rule.actions.contains(t.action)) return false;
  const auto s = om.find(t.subject);
  const auto r = om.find(t.resource);
  if (!s || !r) return false;
  if (om.object(*s).type != rule.subject_type || om.object(*r).type != rule.resource_type) {
    return false;
  }
  for (const auto& c : rule.subject_condition) {
    if (tval(om, *s, c) != Truth::T) return false;
  }
  for (const auto& c : rule.resource_condition) {
    if (tval(om, *r, c) != Truth::T) return false;
  }
  for (const auto& c : rule.constraint) {
    if (tval(om, *s, *r, c) != Truth::T) return false;
  }
  return true;
}

PairEvaluator::PairEvaluator(const ObjectModel& om, std::string subject_type,
                             std::string resource_type)
    : om_(&om),
      subject_type_(std::move(subject_type)),
      resource_type_(std::move(resource_type)),
      subjects_(&om.instances(subject_type_)),
      resources_(&om.instances(resource_type_)) {}

const std::vector<Truth>& PairEvaluator::condition_values(
    const AtomicCondition& c, const std::string& type, const std::vector<ObjectRef>& objects,
    std::map<AtomicCondition, std::vector<Truth>>& memo) {
  if (auto it = memo.find(c); it != memo.end()) return it->second;
  const auto pt = type_path(om_->class_model(), type, c.path);
  const auto values = resolve_values(*om_, c);
  std::vector<Truth> out;
  out.reserve(objects.size());
  for (ObjectRef o : objects) {
    out.push_back(condition_truth(nav(*om_, o, c.path, pt.multiplicity), values, c.negated));
  }
  return memo.emplace(c, std::move(out)).first->second;
}

const std::vector<Truth>& PairEvaluator::subject_values(const AtomicCondition& c) {
  return condition_values(c, subject_type_, subjects(), subject_memo_);
}

const std::vector<Truth>& PairEvaluator::resource_values(const AtomicCondition& c) {
  return condition_values(c, resource_type_, resources(), resource_memo_);
}

const std::vector<Truth>& PairEvaluator::constraint_values(const AtomicConstraint& c) {
  if (auto it = constraint_memo_.find(c); it != constraint_memo_.end()) return it->second;
  const auto& cm = om_->class_model();
  const auto sm = type_path(cm, subject_type_, c.subject_path).multiplicity;
  const auto rm = type_path(cm, resource_type_, c.resource_path).multiplicity;
  std::vector<NavValue> rvals;
  rvals.reserve(resources().size());
  for (ObjectRef r : resources()) rvals.push_back(nav(*om_, r, c.resource_path, rm));
  std::vector<Truth> out;
  out.reserve(pair_count());
  for (ObjectRef s : subjects()) {
    const auto sv = nav(*om_, s, c.subject_path, sm);
    for (const auto& rv : rvals) out.push_back(constraint_truth(sv, c.op, rv, c.negated));
  }
  return constraint_memo_.emplace(c, std::move(out)).first->second;
}

PairSet PairEvaluator::granted(const Rule& rule) {
  const std::size_t nr = resources().size();
  std::vector<bool> s_ok(subjects().size(), true);
  std::vector<bool> r_ok(nr, true);
  for (const auto& c : rule.subject_condition) {
    const auto& v = subject_values(c);
    for (std::size_t i = 0; i < v.size(); ++i) s_ok[i] = s_ok[i] && v[i] == Truth::T;
  }
  for (const auto& c : rule.resource_condition) {
    const auto& v = resource_values(c);
    for (std::size_t i = 0; i < v.size(); ++i) r_ok[i] = r_ok[i] && v[i] == Truth::T;
  }
  PairSet out(pair_count());
  for (std::size_t si = 0; si < s_ok.size(); ++si) {
    if (!s_ok[si]) continue;
    for (std::size_t ri = 0; ri < nr; ++ri) {
      if (r_ok[ri]) out.set(pair_index(si, ri));
    }
  }
  for (const auto& c : rule.constraint) {
    if (out.none()) break;
    const auto& v = constraint_values(c);
    for (auto i = out.find_first(); i != PairSet::npos; i = out.find_next(i)) {
      if (v[i] != Truth::T) out.reset(i);
    }
  }
  return out;
}

namespace {

void add_meaning(PairEvaluator& ev, const Rule& rule, std::set<SraTuple>& out) {
  const auto pairs = ev.granted(rule);
  const auto& om = ev.model();
  const std::size_t nr = ev.resources().size();
  for (auto i = pairs.find_first(); i != PairSet::npos; i = pairs.find_next(i)) {
    const auto& s = om.object(ev.subjects()[i / nr]).id;
    const auto& r = om.object(ev.resources()[i % nr]).id;
    for (const auto& a : rule.actions) out.insert(SraTuple{s, r, a});
  }
}

}  // namespace

std::set<SraTuple> meaning(const Rule& rule, const ObjectModel& om) {
  std::set<SraTuple> out;
  PairEvaluator ev(om, rule.subject_type, rule.resource_type);
  add_meaning(ev, rule, out);
  return out;
}

std::set<SraTuple> meaning(const Policy& policy) {
  std::set<SraTuple> out;
  if (!policy.model) return out;
  std::map<std::pair<std::string, std::string>, PairEvaluator> evaluators;
  for (const auto& rule : policy.rules) {
    auto key = std::make_pair(rule.subject_type, rule.resource_type);
    auto it = evaluators.find(key);
    if (it == evaluators.end()) {
      it = evaluators
               .emplace(std::move(key),
                        PairEvaluator(*policy.model, rule.subject_type, rule.resource_type))
               .first;
    }
    add_meaning(it->second, rule, out);
  }
  return out;
}

int wsc(const AtomicCondition& c) {
  return static_cast<int>(c.path.size() + c.values.size()) + (c.negated ? 1 : 0);
}

int wsc(const AtomicConstraint& c) {
  return static_cast<int>(c.subject_path.size() + c.resource_path.size()) + (c.negated ? 1 : 0);
}

int wsc(const Rule& rule) {
  int total = static_cast<int>(rule.actions.size());
  for (const auto& c : rule.subject_condition) total += wsc(c);
  for (const auto& c : rule.resource_condition) total += wsc(c);
  for (const auto& c : rule.constraint) total += wsc(c);
  return total;
}

int wsc(const std::vector<Rule>& rules) {
  int total = 0;
  for (const auto& r : rules) total += wsc(r);
  return total;
}

int wsc(const Policy& policy) { return wsc(policy.rules); }

namespace {

std::string qualified(std::string_view prefix, const Path& p) {
  std::string out(prefix);
  if (!p.empty()) out += "." + path_text(p);
  return out;
}

}  // namespace

std::string to_string(const AtomicCondition& c, std::string_view prefix) {
  const std::string lhs = qualified(prefix, c.path);
  if (c.op == ConditionOp::Contains) {
    const std::string body = lhs + " contains " + constant_text(c.values.front());
    return c.negated ? "!(" + body + ")" : body;
  }
  if (c.values.size() == 1) {
    return lhs + (c.negated ? " != " : " = ") + constant_text(c.values.front());
  }
  std::string set = "{";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (i > 0) set += ", ";
    set += constant_text(c.values[i]);
  }
  set += "}";
  return lhs + (c.negated ? " not in " : " in ") + set;
}

std::string to_string(const AtomicConstraint& c) {
  const std::string lhs = qualified("sub", c.subject_path);
  const std::string rhs = qualified("res", c.resource_path);
  switch (c.op) {
    case ConstraintOp::Equal:
      return lhs + (c.negated ? " != " : " = ") + rhs;
    case ConstraintOp::In:
      return lhs + (c.negated ? " not in " : " in ") + rhs;
    case ConstraintOp::Contains:
      break;
    case ConstraintOp::Supseteq:
      return (c.negated ? "!(" : "") + lhs + " >= " + rhs + (c.negated ? ")" : "");
    case ConstraintOp::Subseteq:
      return (c.negated ? "!(" : "") + lhs + " <= " + rhs + (c.negated ? ")" : "");
  }
  return (c.negated ? "!(" : "") + lhs + " contains " + rhs + (c.negated ? ")" : "");
}

std::string to_string(const Rule& rule) {
  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
      if (!out.empty()) out += " & ";
      out += p;
    }
    return out.empty() ? std::string("true") : out;
  };
  std::vector<std::string> sc, rc, con;
  for (const auto& c : rule.subject_condition) sc.push_back(to_string(c, "sub"));
  for (const auto& c : rule.resource_condition) rc.push_back(to_string(c, "res"));
  for (const auto& c : rule.constraint) con.push_back(to_string(c));
  std::string actions;
  for (const auto& a : rule.actions) actions += (actions.empty() ? "" : ", ") + a;
  return "<" + rule.subject_type + ", " + join(sc) + ", " + rule.resource_type + ", " + join(rc) +
         ", " + join(con) + ", {" + actions + "}>";
}

}  // namespace rebac_miner
