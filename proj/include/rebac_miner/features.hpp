#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rebac_miner/model.hpp"
#include "rebac_miner/policy.hpp"
#include "rebac_miner/tvl.hpp"

namespace rebac_miner {

struct ExtractionLimits {
  int max_condition_path_len = 2;
  int max_constraint_path_len = 3;
  bool include_id_conditions = false;
};

enum class FeatureKind : std::uint8_t { Constraint, SubjectCondition, ResourceCondition };

/// A candidate atomic condition or constraint of one learning task.
struct Feature {
  FeatureKind kind = FeatureKind::Constraint;
  std::variant<AtomicCondition, AtomicConstraint> payload;

  static Feature subject(AtomicCondition c);
  static Feature resource(AtomicCondition c);
  static Feature constraint(AtomicConstraint c);

  bool is_condition() const noexcept { return kind != FeatureKind::Constraint; }
  const AtomicCondition& condition() const { return std::get<AtomicCondition>(payload); }
  const AtomicConstraint& constraint() const { return std::get<AtomicConstraint>(payload); }
  /// Condition on the implicit id of the subject or resource.
  bool is_id_condition() const;

  std::string label() const;
  int cost() const;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct FeatureTable {
  std::string subject_type;
  std::string resource_type;
  std::vector<Feature> features;

  std::vector<FeatureInfo> infos() const;
  std::optional<FeatureIndex> find(const Feature& f) const;
};

/// Type-correct paths of length 1..max_len from `start`, sorted. Cycles are
/// followed up to the bound; nothing is navigated past a Boolean field.
/// Object-valued endpoints carry their implicit id, so "x.id" never appears;
/// the top-level "id" appears iff `include_id`. The empty path is included
/// iff `include_empty`.
std::vector<Path> enumerate_paths(const ClassModel& cm, const std::string& start, int max_len,
                                  bool include_id = true, bool include_empty = false);

/// Positive conditions with single constants observed in `om` for each
/// path's terminal field; Booleans get both constants.
std::vector<AtomicCondition> enumerate_condition_features(const ObjectModel& om,
                                                          const std::string& cls,
                                                          const ExtractionLimits& limits);

/// Positive constraints between same-typed, non-Boolean paths. Both sides
/// empty only when the types coincide.
std::vector<AtomicConstraint> enumerate_constraint_features(const ClassModel& cm,
                                                            const std::string& subject_type,
                                                            const std::string& resource_type,
                                                            const ExtractionLimits& limits);

/// Constraints, then subject conditions, then resource conditions, each
/// sorted by path text, then operator or constant text.
FeatureTable build_feature_table(const ObjectModel& om, const std::string& subject_type,
                                 const std::string& resource_type, const ExtractionLimits& limits);

/// Pairs of `ev` whose (subject, resource, action) tuple is authorized.
PairSet authorized_pairs(const std::set<SraTuple>& au, PairEvaluator& ev, const std::string& action);

/// One row per (subject, resource) pair in subject-major instance order;
/// cells are truth values of the features, labels T iff authorized.
LabeledDataset build_dataset(PairEvaluator& ev, const PairSet& authorized,
                             const FeatureTable& table);
LabeledDataset build_dataset(const AclPolicy& acl, const std::string& subject_type,
                             const std::string& resource_type, const std::string& action,
                             const FeatureTable& table);

/// Drops features with the same value in every row. Returns the indices
/// (into the original table) that were kept.
std::vector<FeatureIndex> prune_useless(FeatureTable& table, LabeledDataset& ds);

/// Maps every U cell to F; labels are untouched.
void coerce_unknown_to_false(LabeledDataset& ds);

}  // namespace rebac_miner
