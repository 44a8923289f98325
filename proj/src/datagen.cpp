#include "rebac_miner/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rebac_miner/errors.hpp"

namespace rebac_miner {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double Rng::normal(double mean, double sd) {
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

FieldClass GeneratorSpec::field_class(const std::string& cls, const std::string& field) const {
  auto it = classification.find({cls, field});
  return it == classification.end() ? FieldClass::Normal : it->second;
}

std::vector<std::string> GeneratorSpec::lint() const {
  std::vector<std::string> out;
  const std::size_t fields = classes->field_count();
  std::size_t special = 0;
  for (const auto& [key, fc] : classification) {
    if (!classes->field(key.first, key.second)) {
      out.push_back("classification names undeclared field " + key.first + "." + key.second);
    }
    if (fc != FieldClass::Normal) ++special;
  }
  if (fields > 0 && static_cast<double>(special) > 0.15 * static_cast<double>(fields)) {
    out.push_back("required/important fields exceed 15% of all fields");
  }
  return out;
}

namespace {

Path path(std::initializer_list<const char*> names) {
  Path p;
  for (const char* n : names) p.emplace_back(n);
  return p;
}

AtomicCondition equals_bool(Path p, bool b) {
  return make_condition(std::move(p), ConditionOp::In, {Constant{b}});
}

GeneratorSpec univ_mini() {
  auto cm = std::make_shared<ClassModel>();
  for (const char* cls : {"Department", "Student", "Document"}) cm->add_class(cls);
  cm->add_field("Department", "accredited", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Student", "dept", {"Department", Multiplicity::One});
  cm->add_field("Student", "grad", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Student", "ta", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Document", "dept", {"Department", Multiplicity::One});
  cm->add_field("Document", "handbook", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Document", "draft", {std::string(kBooleanType), Multiplicity::One});

  GeneratorSpec spec;
  spec.name = "univ-mini";
  spec.classes = cm;
  spec.counts = {{"Department", 3, 0}, {"Student", 0, 1}, {"Document", 0, 5}};
  spec.laws[{"Department", "accredited"}] = {.p_true = 0.7};
  spec.laws[{"Student", "grad"}] = {.p_true = 0.3};
  spec.laws[{"Student", "ta"}] = {.p_true = 0.2};
  spec.laws[{"Document", "handbook"}] = {.p_true = 0.2};
  spec.laws[{"Document", "draft"}] = {.p_true = 0.3};
  spec.classification[{"Student", "dept"}] = FieldClass::Important;
  spec.actions = {"read"};
  spec.rules.push_back(Rule{"Student",
                            {},
                            "Document",
                            {},
                            {AtomicConstraint{path({"dept"}), ConstraintOp::Equal, path({"dept"})}},
                            {"read"}});
  spec.rules.push_back(
      Rule{"Student", {}, "Document", {equals_bool(path({"handbook"}), true)}, {}, {"read"}});
  return spec;
}

GeneratorSpec org_chart() {
  auto cm = std::make_shared<ClassModel>();
  for (const char* cls : {"Department", "Employee", "Project", "Document"}) cm->add_class(cls);
  cm->add_field("Department", "active", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Employee", "dept", {"Department", Multiplicity::One});
  cm->add_field("Employee", "projects", {"Project", Multiplicity::Many});
  cm->add_field("Employee", "manager", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Employee", "senior", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Project", "dept", {"Department", Multiplicity::One});
  cm->add_field("Project", "active", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Document", "project", {"Project", Multiplicity::One});
  cm->add_field("Document", "scope", {"Project", Multiplicity::Many});
  cm->add_field("Document", "confidential", {std::string(kBooleanType), Multiplicity::One});
  cm->add_field("Document", "archived", {std::string(kBooleanType), Multiplicity::One});

  GeneratorSpec spec;
  spec.name = "org-chart";
  spec.classes = cm;
  spec.counts = {{"Department", 3, 0}, {"Project", 0, 1}, {"Employee", 0, 1}, {"Document", 0, 5}};
  spec.laws[{"Department", "active"}] = {.p_true = 0.8};
  spec.laws[{"Employee", "projects"}] = {.min_size = 0, .max_size = 2};
  spec.laws[{"Employee", "manager"}] = {.p_true = 0.4};
  spec.laws[{"Employee", "senior"}] = {.p_true = 0.3};
  spec.laws[{"Project", "active"}] = {.p_true = 0.7};
  spec.laws[{"Document", "scope"}] = {.min_size = 1, .max_size = 2};
  spec.laws[{"Document", "confidential"}] = {.p_true = 0.3};
  spec.laws[{"Document", "archived"}] = {.p_true = 0.2};
  spec.classification[{"Document", "project"}] = FieldClass::Required;
  spec.actions = {"read", "edit", "approve"};
  spec.rules.push_back(
      Rule{"Employee",
           {},
           "Document",
           {},
           {AtomicConstraint{path({"projects"}), ConstraintOp::Contains, path({"project"})}},
           {"read"}});
  spec.rules.push_back(
      Rule{"Employee",
           {},
           "Document",
           {},
           {AtomicConstraint{path({"projects"}), ConstraintOp::Supseteq, path({"scope"})}},
           {"edit"}});
  spec.rules.push_back(
      Rule{"Employee",
           {equals_bool(path({"manager"}), true)},
           "Document",
           {equals_bool(path({"confidential"}), false)},
           {AtomicConstraint{path({"dept"}), ConstraintOp::Equal, path({"project", "dept"})}},
           {"approve"}});
  return spec;
}

}  // namespace

std::vector<std::string> builtin_spec_names() { return {"org-chart", "univ-mini"}; }

GeneratorSpec builtin_spec(const std::string& name) {
  if (name == "univ-mini") return univ_mini();
  if (name == "org-chart") return org_chart();
  throw UsageError("unknown generator spec '" + name + "' (expected univ-mini or org-chart)");
}

GeneratedDataset generate(const GeneratorSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw UsageError("size parameter N must be at least 1");
  Rng rng(seed, 1);
  auto om = std::make_shared<ObjectModel>(spec.classes);

  for (const auto& law : spec.counts) {
    const double mean = law.fixed + law.per_n * n;
    const double drawn = law.per_n == 0.0 ? mean : rng.normal(mean, 0.1 * mean);
    const long count = std::max(1L, std::lround(drawn));
    for (long i = 1; i <= count; ++i) om->add_object(law.cls + "-" + std::to_string(i), law.cls);
  }

  for (const auto& law : spec.counts) {
    for (ObjectRef o : om->instances(law.cls)) {
      for (const auto& [field, decl] : spec.classes->fields(law.cls)) {
        const auto lit = spec.laws.find({law.cls, field});
        const FieldLaw fl = lit == spec.laws.end() ? FieldLaw{} : lit->second;
        if (decl.multiplicity == Multiplicity::Optional && rng.bernoulli(fl.p_none)) {
          om->set_field(o, field, NoneValue{});
          continue;
        }
        if (decl.type == kBooleanType) {
          om->set_field(o, field, Atom::boolean(rng.bernoulli(fl.p_true)));
          continue;
        }
        const auto& targets = om->instances(decl.type);
        if (targets.empty()) throw UsageError("no instances of " + decl.type + " to reference");
        if (decl.multiplicity != Multiplicity::Many) {
          om->set_field(o, field, Atom::object(targets[rng.below(targets.size())]));
          continue;
        }
        const auto hi = std::min<std::size_t>(static_cast<std::size_t>(fl.max_size), targets.size());
        const auto lo = std::min<std::size_t>(static_cast<std::size_t>(fl.min_size), hi);
        const std::size_t size = lo + rng.below(hi - lo + 1);
        std::vector<ObjectRef> pool = targets;
        std::vector<Atom> chosen;
        for (std::size_t k = 0; k < size; ++k) {
          const auto pick = rng.below(pool.size());
          chosen.push_back(Atom::object(pool[pick]));
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        om->set_field(o, field, std::move(chosen));
      }
    }
  }
  om->validate();

  GeneratedDataset out;
  out.model = om;
  out.ground_truth = Policy{om, spec.actions, spec.rules};
  for (const auto& r : spec.rules) validate_rule(*spec.classes, r);
  out.acl = AclPolicy{om, spec.actions, meaning(out.ground_truth)};
  return out;
}

InjectionResult inject_unknowns(const ObjectModel& om, const GeneratorSpec& spec, double s,
                                std::uint64_t seed) {
  if (!(s >= 0.0)) throw UsageError("scaling factor s must be nonnegative");
  Rng rng(seed, 2);
  auto out = std::make_shared<ObjectModel>(om);
  InjectionResult result;

  for (const auto& cls : spec.classes->class_names()) {
    for (const auto& [field, decl] : spec.classes->fields(cls)) {
      double p = 0.0;
      switch (spec.field_class(cls, field)) {
        case FieldClass::Required:
          break;
        case FieldClass::Important:
          p = 0.01 * s;
          break;
        case FieldClass::Normal:
          p = rng.uniform(0.02 * s, 0.05 * s);
          break;
      }
      if (p > 1.0) {
        result.warnings.push_back("probability for " + cls + "." + field + " clamped to 1");
        p = 1.0;
      }
      result.probabilities[{cls, field}] = p;
      for (ObjectRef o : out->instances(cls)) {
        if (rng.bernoulli(p)) out->set_field(o, field, UnknownValue{});
      }
    }
  }
  result.model = out;
  return result;
}

UnknownStats count_unknowns(const ObjectModel& om) {
  UnknownStats stats;
  for (ObjectRef o = 0; o < om.size(); ++o) {
    const auto& obj = om.object(o);
    for (const auto& [field, value] : obj.fields) {
      ++stats.total;
      if (std::holds_alternative<UnknownValue>(value)) {
        ++stats.unknown;
        ++stats.unknown_by_field[{obj.type, field}];
      }
    }
  }
  return stats;
}

}  // namespace rebac_miner
