#include "rebac_miner/miner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "rebac_miner/errors.hpp"

namespace rebac_miner {

std::string_view to_string(IdStrategy s) noexcept {
  return s == IdStrategy::RetryWithIdFeatures ? "retry" : "per-vector";
}

std::optional<IdStrategy> id_strategy_from_string(std::string_view s) noexcept {
  if (s == "retry") return IdStrategy::RetryWithIdFeatures;
  if (s == "per-vector") return IdStrategy::PerVectorIdConjunction;
  return std::nullopt;
}

std::string TaskReport::formula_text() const { return to_string(formula, dataset.features); }

std::vector<TaskKey> mining_tasks(const AclPolicy& acl) {
  std::set<TaskKey> keys;
  for (const auto& t : acl.authorizations) {
    const auto s = acl.model->find(t.subject);
    const auto r = acl.model->find(t.resource);
    if (!s || !r) throw SchemaError("authorization names a missing object");
    keys.insert({acl.model->object(*s).type, acl.model->object(*r).type, t.action});
  }
  return {keys.begin(), keys.end()};
}

std::vector<Rule> extract_rules(const DnfFormula& formula, const FeatureTable& table,
                                const TaskKey& key) {
  std::vector<Rule> rules;
  for (const auto& conj : formula.disjuncts) {
    Rule rule{key.subject_type, {}, key.resource_type, {}, {}, {key.action}};
    for (const auto& lit : conj.literals()) {
      if (lit.polarity == Polarity::IsUnknown) {
        throw std::logic_error("formula still holds an IsUnknown literal");
      }
      const bool negated = lit.polarity == Polarity::Negative;
      const auto& f = table.features.at(lit.feature);
      switch (f.kind) {
        case FeatureKind::SubjectCondition: {
          auto c = f.condition();
          c.negated = negated;
          rule.subject_condition.insert(std::move(c));
          break;
        }
        case FeatureKind::ResourceCondition: {
          auto c = f.condition();
          c.negated = negated;
          rule.resource_condition.insert(std::move(c));
          break;
        }
        case FeatureKind::Constraint: {
          auto c = f.constraint();
          c.negated = negated;
          rule.constraint.insert(std::move(c));
          break;
        }
      }
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

namespace {

AtomicCondition id_condition(std::vector<Constant> ids) {
  return make_condition(Path{std::string(kIdField)}, ConditionOp::In, std::move(ids));
}

struct Attempt {
  FeatureTable table;
  LabeledDataset dataset;
  LearnResult learned;
};

Attempt learn_task(PairEvaluator& ev, const PairSet& authorized, const TaskKey& key,
                   const ExtractionLimits& limits, bool hide_ids, const MinerConfig& cfg) {
  Attempt at;
  at.table = build_feature_table(ev.model(), key.subject_type, key.resource_type, limits);
  at.dataset = build_dataset(ev, authorized, at.table);
  prune_useless(at.table, at.dataset);
  if (cfg.naive_unknown_as_false) coerce_unknown_to_false(at.dataset);

  if (!hide_ids) {
    at.learned = learn_formula(at.dataset, cfg.learner);
    return at;
  }
  std::set<FeatureIndex> hidden;
  for (FeatureIndex f = 0; f < at.table.features.size(); ++f) {
    if (at.table.features[f].is_id_condition()) hidden.insert(f);
  }
  // Pruned id columns mean a single object on that side; the row's other id
  // condition alone then pins the pair.
  const auto fallback = [&](std::size_t row) {
    const auto& prov = *at.dataset.rows[row].provenance;
    Conjunction c;
    if (auto f = at.table.find(Feature::subject(id_condition({prov.subject})))) {
      c.add({*f, Polarity::Positive});
    }
    if (auto f = at.table.find(Feature::resource(id_condition({prov.resource})))) {
      c.add({*f, Polarity::Positive});
    }
    return c;
  };
  at.learned = learn_formula(at.dataset, cfg.learner, fallback, hidden);
  return at;
}

std::string describe_failure(const Attempt& at, const TaskKey& key) {
  std::string msg = "no valid formula for (" + key.subject_type + ", " + key.resource_type + ", " +
                    key.action + ")";
  if (at.learned.failure) {
    const auto& row = at.dataset.rows.at(at.learned.failure->row);
    msg += at.learned.failure->kind == LearnFailure::Kind::Invalid ? ": would grant "
                                                                    : ": cannot cover ";
    if (row.provenance) msg += "(" + row.provenance->subject + ", " + row.provenance->resource + ")";
  }
  return msg;
}

}  // namespace

TaskReport mine_task(const AclPolicy& acl, const TaskKey& key, const MinerConfig& cfg) {
  PairEvaluator ev(*acl.model, key.subject_type, key.resource_type);
  const PairSet authorized = authorized_pairs(acl.authorizations, ev, key.action);

  Attempt at = learn_task(ev, authorized, key, cfg.limits, false, cfg);
  bool used_ids = cfg.limits.include_id_conditions;
  const bool needs_ids = !at.learned.ok() || (cfg.id_strategy == IdStrategy::PerVectorIdConjunction &&
                                              at.learned.used_fallback);
  if (needs_ids && !cfg.limits.include_id_conditions) {
    ExtractionLimits with_ids = cfg.limits;
    with_ids.include_id_conditions = true;
    at = learn_task(ev, authorized, key, with_ids,
                    cfg.id_strategy == IdStrategy::PerVectorIdConjunction, cfg);
    used_ids = true;
  }
  if (!at.learned.ok()) throw ConsistencyError(describe_failure(at, key));

  TaskReport report;
  report.key = key;
  report.formula = at.learned.formula;
  report.used_id_features = used_ids;
  report.used_fallback = at.learned.used_fallback;
  report.iterations = at.learned.iterations;
  for (FeatureIndex f : at.learned.blacklisted) report.blacklisted.push_back(at.table.features[f].label());
  report.warnings = at.learned.warnings;
  report.rules = extract_rules(report.formula, at.table, key);
  report.table = std::move(at.table);
  report.dataset = std::move(at.dataset);
  return report;
}

AuthorizationIndex::AuthorizationIndex(const AclPolicy& acl) : acl_(&acl) {}

PairEvaluator& AuthorizationIndex::evaluator(const std::string& subject_type,
                                             const std::string& resource_type) {
  auto key = std::make_pair(subject_type, resource_type);
  auto it = evaluators_.find(key);
  if (it == evaluators_.end()) {
    it = evaluators_.emplace(key, PairEvaluator(*acl_->model, subject_type, resource_type)).first;
  }
  return it->second;
}

const PairSet& AuthorizationIndex::authorized(const std::string& subject_type,
                                              const std::string& resource_type,
                                              const std::string& action) {
  TaskKey key{subject_type, resource_type, action};
  auto it = authorized_.find(key);
  if (it == authorized_.end()) {
    auto& ev = evaluator(subject_type, resource_type);
    it = authorized_.emplace(key, authorized_pairs(acl_->authorizations, ev, action)).first;
  }
  return it->second;
}

PairSet AuthorizationIndex::granted(const Rule& rule) {
  return evaluator(rule.subject_type, rule.resource_type).granted(rule);
}

bool AuthorizationIndex::valid(const Rule& rule) {
  const auto pairs = granted(rule);
  for (const auto& a : rule.actions) {
    if (!pairs.is_subset_of(authorized(rule.subject_type, rule.resource_type, a))) return false;
  }
  return true;
}

std::size_t AuthorizationIndex::coverage(const Rule& rule) {
  return granted(rule).count() * rule.actions.size();
}

namespace {

using TableMap = std::map<std::pair<std::string, std::string>, FeatureTable>;

void notify(const StepObserver& observer, std::string_view step, const std::vector<Rule>& rules) {
  if (observer) observer(step, rules);
}

bool has_negation(const Rule& rule) {
  auto neg = [](const auto& x) { return x.negated; };
  return std::any_of(rule.subject_condition.begin(), rule.subject_condition.end(), neg) ||
         std::any_of(rule.resource_condition.begin(), rule.resource_condition.end(), neg) ||
         std::any_of(rule.constraint.begin(), rule.constraint.end(), neg);
}

enum class Side { Subject, Resource };

/// Known atoms that `p` takes on `objects`, or nothing if some object has
/// an unknown, None or set value there.
std::optional<std::vector<Constant>> known_values(const ObjectModel& om,
                                                  const std::vector<ObjectRef>& objects,
                                                  const Path& p) {
  std::set<Atom> atoms;
  for (ObjectRef o : objects) {
    const auto v = nav(om, o, p);
    const auto* a = std::get_if<Atom>(&v);
    if (a == nullptr) return std::nullopt;
    atoms.insert(*a);
  }
  std::vector<Constant> out;
  for (Atom a : atoms) out.push_back(om.to_constant(a));
  return out;
}

std::vector<ObjectRef> covered_objects(PairEvaluator& ev, const PairSet& pairs, Side side) {
  const std::size_t nr = ev.resources().size();
  std::set<ObjectRef> out;
  for (auto i = pairs.find_first(); i != PairSet::npos; i = pairs.find_next(i)) {
    out.insert(side == Side::Subject ? ev.subjects()[i / nr] : ev.resources()[i % nr]);
  }
  return {out.begin(), out.end()};
}

std::set<AtomicCondition>& conditions(Rule& rule, Side side) {
  return side == Side::Subject ? rule.subject_condition : rule.resource_condition;
}

void add_feature(Rule& rule, const Feature& f) {
  switch (f.kind) {
    case FeatureKind::SubjectCondition:
      rule.subject_condition.insert(f.condition());
      break;
    case FeatureKind::ResourceCondition:
      rule.resource_condition.insert(f.condition());
      break;
    case FeatureKind::Constraint:
      rule.constraint.insert(f.constraint());
      break;
  }
}

bool rule_has_feature(const Rule& rule, const Feature& f) {
  switch (f.kind) {
    case FeatureKind::SubjectCondition:
      return rule.subject_condition.contains(f.condition());
    case FeatureKind::ResourceCondition:
      return rule.resource_condition.contains(f.condition());
    case FeatureKind::Constraint:
      break;
  }
  return rule.constraint.contains(f.constraint());
}

std::vector<const Feature*> features_by_cost(const FeatureTable* table) {
  std::vector<const Feature*> out;
  if (table == nullptr) return out;
  for (const auto& f : table->features) {
    if (!f.is_id_condition()) out.push_back(&f);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Feature* a, const Feature* b) { return a->cost() < b->cost(); });
  return out;
}

const FeatureTable* find_table(const TableMap& tables, const Rule& rule) {
  auto it = tables.find({rule.subject_type, rule.resource_type});
  return it == tables.end() ? nullptr : &it->second;
}

/// Replacements for a negated condition, tried after removal and table
/// features: the complement of its values, then the values of the covered
/// objects.
std::vector<AtomicCondition> condition_replacements(const AtomicCondition& x, Side side,
                                                    const Rule& rule, PairEvaluator& ev,
                                                    const PairSet& pairs) {
  std::vector<AtomicCondition> out;
  if (x.op != ConditionOp::In) return out;
  const auto& om = ev.model();
  const auto& all = side == Side::Subject ? ev.subjects() : ev.resources();
  const std::string& type = side == Side::Subject ? rule.subject_type : rule.resource_type;

  std::set<Constant> observed;
  if (type_path(om.class_model(), type, x.path).type == kBooleanType) {
    observed = {Constant{false}, Constant{true}};
  } else {
    for (ObjectRef o : all) {
      const auto v = nav(om, o, x.path);
      if (const auto* a = std::get_if<Atom>(&v)) observed.insert(om.to_constant(*a));
    }
  }
  std::vector<Constant> complement;
  for (const auto& c : observed) {
    if (!std::binary_search(x.values.begin(), x.values.end(), c)) complement.push_back(c);
  }
  if (!complement.empty()) out.push_back(make_condition(x.path, x.op, std::move(complement)));

  if (auto vals = known_values(om, covered_objects(ev, pairs, side), x.path)) {
    if (!vals->empty()) out.push_back(make_condition(x.path, x.op, std::move(*vals)));
  }
  return out;
}

/// Replaces `rule` by one rule per covered subject, pinned by id conditions,
/// with every negated atomic removed.
std::vector<Rule> id_split(const Rule& rule, PairEvaluator& ev, const PairSet& pairs) {
  const auto& om = ev.model();
  const std::size_t nr = ev.resources().size();
  Rule base = rule;
  std::erase_if(base.subject_condition, [](const auto& c) { return c.negated; });
  std::erase_if(base.resource_condition, [](const auto& c) { return c.negated; });
  std::erase_if(base.constraint, [](const auto& c) { return c.negated; });

  std::map<std::size_t, std::vector<Constant>> by_subject;
  for (auto i = pairs.find_first(); i != PairSet::npos; i = pairs.find_next(i)) {
    by_subject[i / nr].push_back(om.object(ev.resources()[i % nr]).id);
  }
  std::vector<Rule> out;
  for (auto& [si, resources] : by_subject) {
    Rule r = base;
    r.subject_condition.insert(id_condition({om.object(ev.subjects()[si]).id}));
    r.resource_condition.insert(id_condition(std::move(resources)));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Rule> eliminate_in_rule(Rule rule, AuthorizationIndex& index, const TableMap& tables) {
  auto& ev = index.evaluator(rule.subject_type, rule.resource_type);
  const auto candidates = features_by_cost(find_table(tables, rule));

  while (has_negation(rule)) {
    const PairSet base = index.granted(rule);
    auto keeps_coverage = [&](const Rule& r) {
      return index.valid(r) && base.is_subset_of(index.granted(r));
    };

    Rule without = rule;
    std::optional<AtomicCondition> negated_condition;
    Side side = Side::Subject;
    if (auto it = std::find_if(rule.subject_condition.begin(), rule.subject_condition.end(),
                               [](const auto& c) { return c.negated; });
        it != rule.subject_condition.end()) {
      negated_condition = *it;
      without.subject_condition.erase(*it);
    } else if (auto it2 = std::find_if(rule.resource_condition.begin(),
                                       rule.resource_condition.end(),
                                       [](const auto& c) { return c.negated; });
               it2 != rule.resource_condition.end()) {
      negated_condition = *it2;
      side = Side::Resource;
      without.resource_condition.erase(*it2);
    } else {
      auto it3 = std::find_if(rule.constraint.begin(), rule.constraint.end(),
                              [](const auto& c) { return c.negated; });
      without.constraint.erase(*it3);
    }

    if (index.valid(without)) {
      rule = std::move(without);
      continue;
    }

    bool replaced = false;
    for (const Feature* f : candidates) {
      if (rule_has_feature(without, *f)) continue;
      Rule r = without;
      add_feature(r, *f);
      if (keeps_coverage(r)) {
        rule = std::move(r);
        replaced = true;
        break;
      }
    }
    if (replaced) continue;

    if (negated_condition) {
      for (auto& c : condition_replacements(*negated_condition, side, rule, ev, base)) {
        Rule r = without;
        conditions(r, side).insert(std::move(c));
        if (keeps_coverage(r)) {
          rule = std::move(r);
          replaced = true;
          break;
        }
      }
    }
    if (replaced) continue;

    return id_split(rule, ev, base);
  }
  return {std::move(rule)};
}

std::vector<Rule> snapshot(const std::vector<Rule>& done, const std::vector<Rule>& rules,
                           std::size_t from) {
  std::vector<Rule> out = done;
  out.insert(out.end(), rules.begin() + static_cast<std::ptrdiff_t>(from), rules.end());
  return out;
}

}  // namespace

std::vector<Rule> eliminate_negative_features(std::vector<Rule> rules, AuthorizationIndex& index,
                                              const TableMap& tables,
                                              const StepObserver& observer) {
  std::vector<Rule> done;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!has_negation(rules[i])) {
      done.push_back(rules[i]);
      continue;
    }
    for (auto& r : eliminate_in_rule(rules[i], index, tables)) done.push_back(std::move(r));
    if (observer) observer("eliminate-negative", snapshot(done, rules, i + 1));
  }
  return done;
}

namespace {

bool merge_actions(std::vector<Rule>& rules, const StepObserver& observer) {
  bool changed = false;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size();) {
      Rule a = rules[i];
      Rule b = rules[j];
      a.actions.clear();
      b.actions.clear();
      if (a == b) {
        rules[i].actions.insert(rules[j].actions.begin(), rules[j].actions.end());
        rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
        notify(observer, "merge-actions", rules);
      } else {
        ++j;
      }
    }
  }
  return changed;
}

/// Conditions of `x` and `y` merged path by path, if the sets agree except
/// for positive `in` conditions whose paths pair up one to one.
std::optional<std::set<AtomicCondition>> merge_condition_sets(const std::set<AtomicCondition>& x,
                                                              const std::set<AtomicCondition>& y) {
  std::vector<AtomicCondition> only_x, only_y;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(only_x));
  std::set_difference(y.begin(), y.end(), x.begin(), x.end(), std::back_inserter(only_y));
  if (only_x.size() != only_y.size()) return std::nullopt;
  std::map<Path, const AtomicCondition*> by_path;
  for (const auto& c : only_x) {
    if (c.op != ConditionOp::In || c.negated || !by_path.emplace(c.path, &c).second) {
      return std::nullopt;
    }
  }
  std::set<AtomicCondition> merged;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                        std::inserter(merged, merged.end()));
  for (const auto& c : only_y) {
    auto it = by_path.find(c.path);
    if (it == by_path.end() || it->second == nullptr || c.op != ConditionOp::In || c.negated) {
      return std::nullopt;
    }
    std::vector<Constant> values = it->second->values;
    values.insert(values.end(), c.values.begin(), c.values.end());
    merged.insert(make_condition(c.path, c.op, std::move(values)));
    it->second = nullptr;
  }
  return merged;
}

/// Union of two rules that agree except for the value sets of some `in`
/// conditions.
std::optional<Rule> value_merge(const Rule& a, const Rule& b) {
  if (a.subject_type != b.subject_type || a.resource_type != b.resource_type ||
      a.constraint != b.constraint || a.actions != b.actions || a == b) {
    return std::nullopt;
  }
  auto sc = merge_condition_sets(a.subject_condition, b.subject_condition);
  auto rc = merge_condition_sets(a.resource_condition, b.resource_condition);
  if (!sc || !rc) return std::nullopt;
  Rule merged = a;
  merged.subject_condition = std::move(*sc);
  merged.resource_condition = std::move(*rc);
  return merged;
}

bool merge_values(std::vector<Rule>& rules, AuthorizationIndex& index,
                  const StepObserver& observer) {
  struct Candidate {
    std::size_t coverage;
    std::size_t i, j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      if (value_merge(rules[i], rules[j])) {
        candidates.push_back({index.coverage(rules[i]) + index.coverage(rules[j]), i, j});
      }
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.coverage > b.coverage; });

  bool changed = false;
  std::vector<bool> used(rules.size(), false);
  std::vector<bool> removed(rules.size(), false);
  for (const auto& cand : candidates) {
    if (used[cand.i] || used[cand.j]) continue;
    Rule merged = *value_merge(rules[cand.i], rules[cand.j]);
    if (!index.valid(merged)) continue;
    used[cand.i] = used[cand.j] = true;
    rules[cand.i] = std::move(merged);
    removed[cand.j] = true;
    changed = true;
    if (observer) {
      std::vector<Rule> current;
      for (std::size_t k = 0; k < rules.size(); ++k) {
        if (!removed[k]) current.push_back(rules[k]);
      }
      observer("merge-values", current);
    }
  }
  if (changed) {
    std::vector<Rule> kept;
    for (std::size_t k = 0; k < rules.size(); ++k) {
      if (!removed[k]) kept.push_back(std::move(rules[k]));
    }
    rules = std::move(kept);
  }
  return changed;
}

bool drop_redundant_rules(std::vector<Rule>& rules, AuthorizationIndex& index,
                          const StepObserver& observer) {
  std::vector<std::size_t> order(rules.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> coverage;
  for (const auto& r : rules) coverage.push_back(index.coverage(r));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return coverage[a] < coverage[b]; });

  std::vector<bool> removed(rules.size(), false);
  bool changed = false;
  for (std::size_t i : order) {
    const auto& rule = rules[i];
    const PairSet mine = index.granted(rule);
    bool redundant = true;
    for (const auto& action : rule.actions) {
      PairSet rest(mine.size());
      for (std::size_t j = 0; j < rules.size(); ++j) {
        if (j == i || removed[j]) continue;
        const auto& other = rules[j];
        if (other.subject_type != rule.subject_type || other.resource_type != rule.resource_type ||
            !other.actions.contains(action)) {
          continue;
        }
        rest |= index.granted(other);
      }
      if (!mine.is_subset_of(rest)) {
        redundant = false;
        break;
      }
    }
    if (!redundant) continue;
    removed[i] = true;
    changed = true;
    if (observer) {
      std::vector<Rule> current;
      for (std::size_t k = 0; k < rules.size(); ++k) {
        if (!removed[k]) current.push_back(rules[k]);
      }
      observer("drop-redundant-rule", current);
    }
  }
  if (changed) {
    std::vector<Rule> kept;
    for (std::size_t k = 0; k < rules.size(); ++k) {
      if (!removed[k]) kept.push_back(std::move(rules[k]));
    }
    rules = std::move(kept);
  }
  return changed;
}

/// One atomic of a rule, addressed by kind.
struct AtomicRef {
  FeatureKind kind;
  AtomicCondition condition;
  AtomicConstraint constraint;
};

Rule without_atomic(const Rule& rule, const AtomicRef& x) {
  Rule r = rule;
  switch (x.kind) {
    case FeatureKind::SubjectCondition:
      r.subject_condition.erase(x.condition);
      break;
    case FeatureKind::ResourceCondition:
      r.resource_condition.erase(x.condition);
      break;
    case FeatureKind::Constraint:
      r.constraint.erase(x.constraint);
      break;
  }
  return r;
}

bool simplify_atomics(std::vector<Rule>& rules, AuthorizationIndex& index,
                      const StepObserver& observer) {
  bool changed = false;
  for (auto& rule : rules) {
    const std::size_t base = index.granted(rule).count();
    std::vector<std::pair<std::size_t, AtomicRef>> conds, cons;
    for (const auto& c : rule.subject_condition) {
      AtomicRef x{FeatureKind::SubjectCondition, c, {}};
      conds.emplace_back(index.granted(without_atomic(rule, x)).count() - base, x);
    }
    for (const auto& c : rule.resource_condition) {
      AtomicRef x{FeatureKind::ResourceCondition, c, {}};
      conds.emplace_back(index.granted(without_atomic(rule, x)).count() - base, x);
    }
    for (const auto& c : rule.constraint) {
      AtomicRef x{FeatureKind::Constraint, {}, c};
      cons.emplace_back(index.granted(without_atomic(rule, x)).count() - base, x);
    }
    auto by_contribution = [](const auto& a, const auto& b) { return a.first < b.first; };
    std::stable_sort(conds.begin(), conds.end(), by_contribution);
    std::stable_sort(cons.begin(), cons.end(), by_contribution);
    conds.insert(conds.end(), cons.begin(), cons.end());

    for (const auto& [contribution, x] : conds) {
      Rule r = without_atomic(rule, x);
      if (!index.valid(r)) continue;
      rule = std::move(r);
      changed = true;
      notify(observer, "drop-atomic", rules);
    }
  }
  return changed;
}

bool constraints_to_conditions(std::vector<Rule>& rules, AuthorizationIndex& index,
                               const TableMap& tables, const StepObserver& observer) {
  bool changed = false;
  for (auto& rule : rules) {
    const auto table_features = features_by_cost(find_table(tables, rule));
    bool again = true;
    while (again) {
      again = false;
      for (const auto& k : rule.constraint) {
        std::vector<Feature> candidates;
        // Conditions on one side of an equality carry over to the other.
        if (k.op == ConstraintOp::Equal && !k.negated) {
          for (const auto& c : rule.subject_condition) {
            if (c.path == k.subject_path && !c.negated && !k.resource_path.empty()) {
              candidates.push_back(Feature::resource(make_condition(k.resource_path, c.op, c.values)));
            }
          }
          for (const auto& c : rule.resource_condition) {
            if (c.path == k.resource_path && !c.negated && !k.subject_path.empty()) {
              candidates.push_back(Feature::subject(make_condition(k.subject_path, c.op, c.values)));
            }
          }
        }
        for (const Feature* f : table_features) {
          if (f->is_condition()) candidates.push_back(*f);
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Feature& a, const Feature& b) { return a.cost() < b.cost(); });

        const PairSet base = index.granted(rule);
        const Rule without = without_atomic(rule, {FeatureKind::Constraint, {}, k});
        for (const auto& f : candidates) {
          if (f.cost() >= wsc(k)) break;
          if (rule_has_feature(without, f)) continue;
          Rule r = without;
          add_feature(r, f);
          if (index.granted(r) != base) continue;
          rule = std::move(r);
          changed = again = true;
          notify(observer, "constraint-to-condition", rules);
          break;
        }
        if (again) break;
      }
    }
  }
  return changed;
}

bool rewrite_boolean_negations(std::vector<Rule>& rules, const ClassModel& cm,
                               const StepObserver& observer) {
  bool changed = false;
  for (auto& rule : rules) {
    for (Side side : {Side::Subject, Side::Resource}) {
      auto& conds = conditions(rule, side);
      const auto& type = side == Side::Subject ? rule.subject_type : rule.resource_type;
      std::vector<AtomicCondition> rewritten;
      for (auto it = conds.begin(); it != conds.end();) {
        const auto pt = type_path(cm, type, it->path);
        if (it->negated && it->values.size() == 1 && pt.type == kBooleanType &&
            pt.multiplicity == Multiplicity::One) {
          const bool b = std::get<bool>(it->values.front());
          rewritten.push_back(make_condition(it->path, ConditionOp::In, {Constant{!b}}));
          it = conds.erase(it);
        } else {
          ++it;
        }
      }
      if (rewritten.empty()) continue;
      conds.insert(rewritten.begin(), rewritten.end());
      changed = true;
      notify(observer, "rewrite-boolean-negation", rules);
    }
  }
  return changed;
}

}  // namespace

std::vector<Rule> merge_and_simplify(std::vector<Rule> rules, AuthorizationIndex& index,
                                     const TableMap& tables, const StepObserver& observer,
                                     std::vector<int>* wsc_trace) {
  const auto& cm = index.acl().model->class_model();
  if (wsc_trace) wsc_trace->push_back(wsc(rules));
  while (true) {
    bool changed = merge_values(rules, index, observer);
    changed |= merge_actions(rules, observer);
    changed |= drop_redundant_rules(rules, index, observer);
    changed |= simplify_atomics(rules, index, observer);
    changed |= constraints_to_conditions(rules, index, tables, observer);
    changed |= rewrite_boolean_negations(rules, cm, observer);
    if (!changed) break;
    if (wsc_trace) wsc_trace->push_back(wsc(rules));
  }
  return rules;
}

std::optional<Mismatch> check_consistency(const Policy& policy, const std::set<SraTuple>& au) {
  const auto granted = meaning(policy);
  for (const auto& t : au) {
    if (!granted.contains(t)) return Mismatch{Mismatch::Kind::Uncovered, t};
  }
  for (const auto& t : granted) {
    if (!au.contains(t)) return Mismatch{Mismatch::Kind::Overgranted, t};
  }
  return std::nullopt;
}

namespace {

std::vector<TaskReport> run_tasks(const AclPolicy& acl, const std::vector<TaskKey>& keys,
                                  const MinerConfig& cfg) {
  std::vector<std::optional<TaskReport>> slots(keys.size());
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(keys.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < keys.size(); ++i) slots[i] = mine_task(acl, keys[i], cfg);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(keys.size());
    {
      std::vector<std::jthread> workers;
      for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
          for (std::size_t i = next++; i < keys.size(); i = next++) {
            try {
              slots[i] = mine_task(acl, keys[i], cfg);
            } catch (...) {
              errors[i] = std::current_exception();
            }
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<TaskReport> out;
  out.reserve(keys.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

MineResult mine(const AclPolicy& acl, const MinerConfig& cfg, const StepObserver& observer) {
  if (!acl.model) throw UsageError("ACL policy has no object model");
  MineResult result;
  result.policy.model = acl.model;
  result.policy.actions = acl.actions;

  auto start = std::chrono::steady_clock::now();
  result.tasks = run_tasks(acl, mining_tasks(acl), cfg);
  std::vector<Rule> rules;
  for (const auto& task : result.tasks) {
    rules.insert(rules.end(), task.rules.begin(), task.rules.end());
    for (const auto& w : task.warnings) {
      result.warnings.push_back(task.key.subject_type + "/" + task.key.resource_type + "/" +
                                task.key.action + ": " + w);
    }
  }
  result.phase1_rules = rules;
  result.phase1_seconds = seconds_since(start);

  if (!cfg.naive_unknown_as_false) {
    start = std::chrono::steady_clock::now();
    ExtractionLimits limits = cfg.limits;
    limits.include_id_conditions = false;
    TableMap tables;
    for (const auto& r : rules) {
      auto key = std::make_pair(r.subject_type, r.resource_type);
      if (!tables.contains(key)) {
        tables.emplace(key, build_feature_table(*acl.model, r.subject_type, r.resource_type, limits));
      }
    }
    AuthorizationIndex index(acl);
    if (!cfg.allow_negation) rules = eliminate_negative_features(std::move(rules), index, tables, observer);
    rules = merge_and_simplify(std::move(rules), index, tables, observer, &result.wsc_trace);
    result.phase2_seconds = seconds_since(start);
  }

  std::sort(rules.begin(), rules.end());
  result.policy.rules = std::move(rules);
  result.mismatch = check_consistency(result.policy, acl.authorizations);
  return result;
}

}  // namespace rebac_miner
