#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "rebac_miner/model.hpp"
#include "rebac_miner/tvl.hpp"

namespace rebac_miner {

/// `In` for One/Optional paths, `Contains` for Many paths.
enum class ConditionOp : std::uint8_t { In, Contains };

struct AtomicCondition {
  Path path;
  ConditionOp op = ConditionOp::In;
  std::vector<Constant> values;  // sorted, unique; exactly one for Contains
  bool negated = false;

  friend auto operator<=>(const AtomicCondition&, const AtomicCondition&) = default;
};

/// Builds a condition with normalized (sorted, unique) values.
AtomicCondition make_condition(Path path, ConditionOp op, std::vector<Constant> values,
                               bool negated = false);

enum class ConstraintOp : std::uint8_t { Equal, In, Contains, Supseteq, Subseteq };

std::string_view to_string(ConstraintOp op) noexcept;
std::optional<ConstraintOp> constraint_op_from_string(std::string_view s) noexcept;
std::string_view to_string(ConditionOp op) noexcept;
std::optional<ConditionOp> condition_op_from_string(std::string_view s) noexcept;

struct AtomicConstraint {
  Path subject_path;  // may be empty: the subject itself
  ConstraintOp op = ConstraintOp::Equal;
  Path resource_path;  // may be empty: the resource itself
  bool negated = false;

  friend auto operator<=>(const AtomicConstraint&, const AtomicConstraint&) = default;
};

ConditionOp condition_op_for(Multiplicity m) noexcept;
/// Whether `op` applies to paths of multiplicities `subject` and `resource`.
bool constraint_op_compatible(ConstraintOp op, Multiplicity subject, Multiplicity resource) noexcept;

struct Rule {
  std::string subject_type;
  std::set<AtomicCondition> subject_condition;
  std::string resource_type;
  std::set<AtomicCondition> resource_condition;
  std::set<AtomicConstraint> constraint;
  std::set<std::string> actions;

  friend auto operator<=>(const Rule&, const Rule&) = default;
};

struct SraTuple {
  std::string subject;
  std::string resource;
  std::string action;

  friend auto operator<=>(const SraTuple&, const SraTuple&) = default;
};

struct Policy {
  std::shared_ptr<const ObjectModel> model;
  std::set<std::string> actions;
  std::vector<Rule> rules;
};

struct AclPolicy {
  std::shared_ptr<const ObjectModel> model;
  std::set<std::string> actions;
  std::set<SraTuple> authorizations;
};

/// Type and multiplicity checks. Throws UsageError.
void validate_condition(const ClassModel& cm, const std::string& type, const AtomicCondition& c);
void validate_constraint(const ClassModel& cm, const std::string& subject_type,
                         const std::string& resource_type, const AtomicConstraint& c);
void validate_rule(const ClassModel& cm, const Rule& rule);
/// Tuples must name existing objects and declared actions.
void validate_acl(const AclPolicy& acl);

/// Truth value of a condition given the navigated value and the resolved
/// constants.
Truth condition_truth(const NavValue& v, std::span<const Atom> values, bool negated);
/// Truth value of a constraint given both navigated values.
Truth constraint_truth(const NavValue& subject, ConstraintOp op, const NavValue& resource,
                       bool negated);

Truth tval(const ObjectModel& om, ObjectRef o, const AtomicCondition& c);
Truth tval(const ObjectModel& om, ObjectRef s, ObjectRef r, const AtomicConstraint& c);

/// All atomics T, types match and the action is granted; U denies.
bool satisfies(const ObjectModel& om, const SraTuple& t, const Rule& rule);

/// Set of (subject, resource) index pairs of one type pair; bit
/// `si * |resources| + ri`.
using PairSet = boost::dynamic_bitset<>;

/// Memoized truth tables of atomics over all subject/resource pairs of one
/// (subject type, resource type). Not thread-safe.
class PairEvaluator {
 public:
  PairEvaluator(const ObjectModel& om, std::string subject_type, std::string resource_type);

  const ObjectModel& model() const noexcept { return *om_; }
  const std::string& subject_type() const noexcept { return subject_type_; }
  const std::string& resource_type() const noexcept { return resource_type_; }
  const std::vector<ObjectRef>& subjects() const noexcept { return *subjects_; }
  const std::vector<ObjectRef>& resources() const noexcept { return *resources_; }
  std::size_t pair_count() const noexcept { return subjects().size() * resources().size(); }
  std::size_t pair_index(std::size_t si, std::size_t ri) const noexcept {
    return si * resources().size() + ri;
  }

  /// Indexed by position in subjects() / resources() / pair index.
  const std::vector<Truth>& subject_values(const AtomicCondition& c);
  const std::vector<Truth>& resource_values(const AtomicCondition& c);
  const std::vector<Truth>& constraint_values(const AtomicConstraint& c);

  /// Pairs on which every atomic of `rule` is T; types and actions ignored.
  PairSet granted(const Rule& rule);
  PairSet empty_set() const { return PairSet(pair_count()); }

 private:
  const std::vector<Truth>& condition_values(const AtomicCondition& c, const std::string& type,
                                             const std::vector<ObjectRef>& objects,
                                             std::map<AtomicCondition, std::vector<Truth>>& memo);

  const ObjectModel* om_;
  std::string subject_type_;
  std::string resource_type_;
  const std::vector<ObjectRef>* subjects_;
  const std::vector<ObjectRef>* resources_;
  std::map<AtomicCondition, std::vector<Truth>> subject_memo_;
  std::map<AtomicCondition, std::vector<Truth>> resource_memo_;
  std::map<AtomicConstraint, std::vector<Truth>> constraint_memo_;
};

std::set<SraTuple> meaning(const Rule& rule, const ObjectModel& om);
std::set<SraTuple> meaning(const Policy& policy);

int wsc(const AtomicCondition& c);
int wsc(const AtomicConstraint& c);
int wsc(const Rule& rule);
int wsc(const Policy& policy);
int wsc(const std::vector<Rule>& rules);

/// Renders "sub.dept = CS", "res.type in {A, B}", "sub.projects contains P",
/// with `prefix` naming the object.
std::string to_string(const AtomicCondition& c, std::string_view prefix);
/// Renders "sub.dept = res.dept", "sub.projects >= res.scope", ...
std::string to_string(const AtomicConstraint& c);
std::string to_string(const Rule& rule);

}  // namespace rebac_miner
