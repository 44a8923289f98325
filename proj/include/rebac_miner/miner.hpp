#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "rebac_miner/features.hpp"
#include "rebac_miner/formula_learner.hpp"
#include "rebac_miner/policy.hpp"

namespace rebac_miner {

enum class IdStrategy {
  /// Relearn from a table that also holds id conditions.
  RetryWithIdFeatures,
  /// Cover leftover rows with subject.id = s & resource.id = r.
  PerVectorIdConjunction,
};

std::string_view to_string(IdStrategy s) noexcept;
std::optional<IdStrategy> id_strategy_from_string(std::string_view s) noexcept;

struct MinerConfig {
  bool allow_negation = true;
  IdStrategy id_strategy = IdStrategy::PerVectorIdConjunction;
  ExtractionLimits limits;
  LearnerConfig learner;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  /// Diagnostic: learn from datasets whose U cells are read as F and skip
  /// the second phase.
  bool naive_unknown_as_false = false;
};

struct TaskKey {
  std::string subject_type;
  std::string resource_type;
  std::string action;

  friend auto operator<=>(const TaskKey&, const TaskKey&) = default;
};

struct TaskReport {
  TaskKey key;
  FeatureTable table;  // after pruning
  LabeledDataset dataset;
  DnfFormula formula;
  bool used_id_features = false;
  bool used_fallback = false;
  int iterations = 0;
  std::vector<std::string> blacklisted;
  std::vector<std::string> warnings;
  std::vector<Rule> rules;

  std::string formula_text() const;
};

/// First difference between a policy's meaning and the authorizations.
struct Mismatch {
  enum class Kind { Uncovered, Overgranted };
  Kind kind = Kind::Uncovered;
  SraTuple tuple;
};

struct MineResult {
  Policy policy;
  std::vector<TaskReport> tasks;
  std::vector<Rule> phase1_rules;
  /// Policy WSC at the start of merging and after each merge round.
  std::vector<int> wsc_trace;
  std::vector<std::string> warnings;
  std::optional<Mismatch> mismatch;
  double phase1_seconds = 0;
  double phase2_seconds = 0;

  bool consistent() const noexcept { return !mismatch.has_value(); }
};

/// The (subject type, resource type, action) triples occurring in `au`.
std::vector<TaskKey> mining_tasks(const AclPolicy& acl);

/// One rule per disjunct; literals become atomics by feature kind and
/// negative literals become negated atomics.
std::vector<Rule> extract_rules(const DnfFormula& formula, const FeatureTable& table,
                                const TaskKey& key);

/// Learns the formula of one task and its rules. Throws ConsistencyError
/// when no id fallback can produce a valid formula.
TaskReport mine_task(const AclPolicy& acl, const TaskKey& key, const MinerConfig& cfg);

/// Validity (meaning within the authorizations) of rules, per type pair.
class AuthorizationIndex {
 public:
  explicit AuthorizationIndex(const AclPolicy& acl);

  const AclPolicy& acl() const noexcept { return *acl_; }
  PairEvaluator& evaluator(const std::string& subject_type, const std::string& resource_type);
  const PairSet& authorized(const std::string& subject_type, const std::string& resource_type,
                            const std::string& action);

  PairSet granted(const Rule& rule);
  bool valid(const Rule& rule);
  /// Number of SRA tuples granted by the rule.
  std::size_t coverage(const Rule& rule);

 private:
  const AclPolicy* acl_;
  std::map<std::pair<std::string, std::string>, PairEvaluator> evaluators_;
  std::map<TaskKey, PairSet> authorized_;
};

/// Called after every individual second-phase transformation.
using StepObserver = std::function<void(std::string_view step, const std::vector<Rule>& rules)>;

/// Removes negated atomics from valid rules without changing the policy
/// meaning. `tables` supply replacement features per type pair.
std::vector<Rule> eliminate_negative_features(
    std::vector<Rule> rules, AuthorizationIndex& index,
    const std::map<std::pair<std::string, std::string>, FeatureTable>& tables,
    const StepObserver& observer = {});

/// Fixpoint of merging, redundancy removal and simplification. Appends the
/// policy WSC after each round to `wsc_trace` when given.
std::vector<Rule> merge_and_simplify(
    std::vector<Rule> rules, AuthorizationIndex& index,
    const std::map<std::pair<std::string, std::string>, FeatureTable>& tables,
    const StepObserver& observer = {}, std::vector<int>* wsc_trace = nullptr);

std::optional<Mismatch> check_consistency(const Policy& policy, const std::set<SraTuple>& au);

MineResult mine(const AclPolicy& acl, const MinerConfig& cfg = {},
                const StepObserver& observer = {});

}  // namespace rebac_miner
