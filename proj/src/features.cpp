#include "rebac_miner/features.hpp"

#include <algorithm>
#include <cstdint>

#include "rebac_miner/errors.hpp"

namespace rebac_miner {

Feature Feature::subject(AtomicCondition c) { return {FeatureKind::SubjectCondition, std::move(c)}; }

Feature Feature::resource(AtomicCondition c) {
  return {FeatureKind::ResourceCondition, std::move(c)};
}

Feature Feature::constraint(AtomicConstraint c) { return {FeatureKind::Constraint, std::move(c)}; }

bool Feature::is_id_condition() const {
  if (!is_condition()) return false;
  const auto& p = condition().path;
  return p.size() == 1 && p.front() == kIdField;
}

std::string Feature::label() const {
  switch (kind) {
    case FeatureKind::SubjectCondition:
      return to_string(condition(), "sub");
    case FeatureKind::ResourceCondition:
      return to_string(condition(), "res");
    case FeatureKind::Constraint:
      break;
  }
  return to_string(constraint());
}

int Feature::cost() const { return is_condition() ? wsc(condition()) : wsc(constraint()); }

std::vector<FeatureInfo> FeatureTable::infos() const {
  std::vector<FeatureInfo> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back({f.label(), f.cost()});
  return out;
}

std::optional<FeatureIndex> FeatureTable::find(const Feature& f) const {
  auto it = std::find(features.begin(), features.end(), f);
  if (it == features.end()) return std::nullopt;
  return static_cast<FeatureIndex>(it - features.begin());
}

namespace {

void walk_paths(const ClassModel& cm, const std::string& cls, int remaining, Path& prefix,
                std::vector<Path>& out) {
  for (const auto& [name, decl] : cm.fields(cls)) {
    prefix.push_back(name);
    out.push_back(prefix);
    if (remaining > 1 && decl.type != kBooleanType) {
      walk_paths(cm, decl.type, remaining - 1, prefix, out);
    }
    prefix.pop_back();
  }
}

bool path_text_less(const Path& a, const Path& b) { return path_text(a) < path_text(b); }

}  // namespace

std::vector<Path> enumerate_paths(const ClassModel& cm, const std::string& start, int max_len,
                                  bool include_id, bool include_empty) {
  if (!cm.has_class(start)) throw UsageError("undeclared class '" + start + "'");
  std::vector<Path> out;
  if (include_empty) out.emplace_back();
  if (max_len >= 1) {
    if (include_id) out.push_back(Path{std::string(kIdField)});
    Path prefix;
    walk_paths(cm, start, max_len, prefix, out);
  }
  std::stable_sort(out.begin(), out.end(), path_text_less);
  return out;
}

std::vector<AtomicCondition> enumerate_condition_features(const ObjectModel& om,
                                                          const std::string& cls,
                                                          const ExtractionLimits& limits) {
  const auto& cm = om.class_model();
  std::vector<AtomicCondition> out;
  for (const auto& p :
       enumerate_paths(cm, cls, limits.max_condition_path_len, limits.include_id_conditions)) {
    const auto pt = type_path(cm, cls, p);
    const auto op = condition_op_for(pt.multiplicity);
    std::vector<Constant> constants;
    if (p.size() == 1 && p.front() == kIdField) {
      for (ObjectRef o : om.instances(cls)) constants.emplace_back(om.object(o).id);
    } else if (pt.type == kBooleanType) {
      constants = {Constant{false}, Constant{true}};
    } else {
      const Path owner_path(p.begin(), p.end() - 1);
      const auto owner = type_path(cm, cls, owner_path).type;
      std::set<Atom> observed;
      for (ObjectRef o : om.instances(owner)) {
        const auto& fv = om.field(o, p.back());
        if (const auto* a = std::get_if<Atom>(&fv)) {
          observed.insert(*a);
        } else if (const auto* xs = std::get_if<std::vector<Atom>>(&fv)) {
          observed.insert(xs->begin(), xs->end());
        }
      }
      for (Atom a : observed) constants.push_back(om.to_constant(a));
    }
    std::sort(constants.begin(), constants.end(), [](const Constant& a, const Constant& b) {
      return constant_text(a) < constant_text(b);
    });
    for (auto& c : constants) out.push_back(make_condition(p, op, {std::move(c)}));
  }
  return out;
}

std::vector<AtomicConstraint> enumerate_constraint_features(const ClassModel& cm,
                                                            const std::string& subject_type,
                                                            const std::string& resource_type,
                                                            const ExtractionLimits& limits) {
  const int len = limits.max_constraint_path_len;
  const auto subject_paths = enumerate_paths(cm, subject_type, len, false, true);
  const auto resource_paths = enumerate_paths(cm, resource_type, len, false, true);
  std::vector<AtomicConstraint> out;
  for (const auto& p1 : subject_paths) {
    const auto t1 = type_path(cm, subject_type, p1);
    if (t1.type == kBooleanType) continue;
    for (const auto& p2 : resource_paths) {
      if (p1.empty() && p2.empty() && subject_type != resource_type) continue;
      const auto t2 = type_path(cm, resource_type, p2);
      if (t1.type != t2.type) continue;
      for (auto op : {ConstraintOp::Equal, ConstraintOp::In, ConstraintOp::Contains,
                      ConstraintOp::Supseteq, ConstraintOp::Subseteq}) {
        if (constraint_op_compatible(op, t1.multiplicity, t2.multiplicity)) {
          out.push_back(AtomicConstraint{p1, op, p2, false});
        }
      }
    }
  }
  return out;
}

FeatureTable build_feature_table(const ObjectModel& om, const std::string& subject_type,
                                 const std::string& resource_type,
                                 const ExtractionLimits& limits) {
  FeatureTable table{subject_type, resource_type, {}};
  for (auto& c :
       enumerate_constraint_features(om.class_model(), subject_type, resource_type, limits)) {
    table.features.push_back(Feature::constraint(std::move(c)));
  }
  for (auto& c : enumerate_condition_features(om, subject_type, limits)) {
    table.features.push_back(Feature::subject(std::move(c)));
  }
  for (auto& c : enumerate_condition_features(om, resource_type, limits)) {
    table.features.push_back(Feature::resource(std::move(c)));
  }
  return table;
}

PairSet authorized_pairs(const std::set<SraTuple>& au, PairEvaluator& ev,
                         const std::string& action) {
  const auto& om = ev.model();
  std::vector<std::size_t> subject_pos(om.size(), SIZE_MAX);
  std::vector<std::size_t> resource_pos(om.size(), SIZE_MAX);
  for (std::size_t i = 0; i < ev.subjects().size(); ++i) subject_pos[ev.subjects()[i]] = i;
  for (std::size_t i = 0; i < ev.resources().size(); ++i) resource_pos[ev.resources()[i]] = i;

  PairSet out = ev.empty_set();
  for (const auto& t : au) {
    if (t.action != action) continue;
    const auto s = om.find(t.subject);
    const auto r = om.find(t.resource);
    if (!s || !r) continue;
    const auto si = subject_pos[*s];
    const auto ri = resource_pos[*r];
    if (si == SIZE_MAX || ri == SIZE_MAX) continue;
    out.set(ev.pair_index(si, ri));
  }
  return out;
}

LabeledDataset build_dataset(PairEvaluator& ev, const PairSet& authorized,
                             const FeatureTable& table) {
  const auto& om = ev.model();
  const std::size_t ns = ev.subjects().size();
  const std::size_t nr = ev.resources().size();
  LabeledDataset ds;
  ds.features = table.infos();

  std::vector<const std::vector<Truth>*> columns;
  columns.reserve(table.features.size());
  for (const auto& f : table.features) {
    switch (f.kind) {
      case FeatureKind::SubjectCondition:
        columns.push_back(&ev.subject_values(f.condition()));
        break;
      case FeatureKind::ResourceCondition:
        columns.push_back(&ev.resource_values(f.condition()));
        break;
      case FeatureKind::Constraint:
        columns.push_back(&ev.constraint_values(f.constraint()));
        break;
    }
  }

  ds.rows.reserve(ns * nr);
  for (std::size_t si = 0; si < ns; ++si) {
    for (std::size_t ri = 0; ri < nr; ++ri) {
      const std::size_t pair = ev.pair_index(si, ri);
      FeatureVector values;
      values.reserve(columns.size());
      for (std::size_t f = 0; f < columns.size(); ++f) {
        switch (table.features[f].kind) {
          case FeatureKind::SubjectCondition:
            values.push_back((*columns[f])[si]);
            break;
          case FeatureKind::ResourceCondition:
            values.push_back((*columns[f])[ri]);
            break;
          case FeatureKind::Constraint:
            values.push_back((*columns[f])[pair]);
            break;
        }
      }
      ds.add_row(std::move(values), authorized.test(pair) ? Truth::T : Truth::F,
                 Provenance{om.object(ev.subjects()[si]).id, om.object(ev.resources()[ri]).id});
    }
  }
  return ds;
}

LabeledDataset build_dataset(const AclPolicy& acl, const std::string& subject_type,
                             const std::string& resource_type, const std::string& action,
                             const FeatureTable& table) {
  PairEvaluator ev(*acl.model, subject_type, resource_type);
  const auto authorized = authorized_pairs(acl.authorizations, ev, action);
  return build_dataset(ev, authorized, table);
}

std::vector<FeatureIndex> prune_useless(FeatureTable& table, LabeledDataset& ds) {
  std::vector<FeatureIndex> kept;
  for (FeatureIndex f = 0; f < ds.feature_count(); ++f) {
    const bool constant =
        !ds.rows.empty() && std::all_of(ds.rows.begin(), ds.rows.end(), [&](const LabeledRow& r) {
          return r.values[f] == ds.rows.front().values[f];
        });
    if (!constant) kept.push_back(f);
  }
  if (kept.size() == ds.feature_count()) return kept;

  FeatureTable pruned{table.subject_type, table.resource_type, {}};
  std::vector<FeatureInfo> infos;
  for (FeatureIndex f : kept) {
    pruned.features.push_back(table.features[f]);
    infos.push_back(ds.features[f]);
  }
  for (auto& row : ds.rows) {
    FeatureVector values;
    values.reserve(kept.size());
    for (FeatureIndex f : kept) values.push_back(row.values[f]);
    row.values = std::move(values);
  }
  ds.features = std::move(infos);
  table = std::move(pruned);
  return kept;
}

void coerce_unknown_to_false(LabeledDataset& ds) {
  for (auto& row : ds.rows) {
    std::replace(row.values.begin(), row.values.end(), Truth::U, Truth::F);
  }
}

}  // namespace rebac_miner
