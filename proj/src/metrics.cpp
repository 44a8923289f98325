#include "rebac_miner/metrics.hpp"

#include "rebac_miner/errors.hpp"
#include "rebac_miner/miner.hpp"

namespace rebac_miner {

double syn_atomic_condition(const AtomicCondition& a, const AtomicCondition& b) {
  if (a.path != b.path) return 0.0;
  const std::set<Constant> va(a.values.begin(), a.values.end());
  const std::set<Constant> vb(b.values.begin(), b.values.end());
  return (jaccard_value(a.negated, b.negated) + 1.0 + jaccard(va, vb)) / 3.0;
}

double syn_condition_sets(const std::set<AtomicCondition>& a, const std::set<AtomicCondition>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::set<Path> paths;
  for (const auto& c : a) paths.insert(c.path);
  for (const auto& c : b) paths.insert(c.path);
  double sum = 0.0;
  for (const auto& ca : a) {
    for (const auto& cb : b) sum += syn_atomic_condition(ca, cb);
  }
  return sum / static_cast<double>(paths.size());
}

double syn_rule(const Rule& a, const Rule& b) {
  const double total = jaccard_value(a.subject_type, b.subject_type) +
                       syn_condition_sets(a.subject_condition, b.subject_condition) +
                       jaccard_value(a.resource_type, b.resource_type) +
                       syn_condition_sets(a.resource_condition, b.resource_condition) +
                       jaccard(a.constraint, b.constraint) + jaccard(a.actions, b.actions);
  return total / 6.0;
}

double syn_policy(const std::vector<Rule>& a, const std::vector<Rule>& b,
                  std::vector<RuleMatch>* matches) {
  if (matches) matches->clear();
  if (a.empty()) return b.empty() ? 1.0 : 0.0;
  if (b.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    RuleMatch best{i, 0, -1.0};
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double s = syn_rule(a[i], b[j]);
      if (s > best.score) best = {i, j, s};
    }
    sum += best.score;
    if (matches) matches->push_back(best);
  }
  return sum / static_cast<double>(a.size());
}

double semantic_similarity(const Policy& a, const Policy& b) {
  return jaccard(meaning(a), meaning(b));
}

SimilarityReport compare_policies(const Policy& mined, const Policy& reference) {
  SimilarityReport report;
  report.syntactic = syn_policy(mined.rules, reference.rules, &report.per_rule_best_match);
  report.semantic = semantic_similarity(mined, reference);
  report.wsc_mined = wsc(mined);
  report.wsc_reference = wsc(reference);
  return report;
}

Policy simplify_policy(const Policy& policy) {
  if (!policy.model) throw UsageError("policy has no object model");
  AclPolicy acl{policy.model, policy.actions, meaning(policy)};
  AuthorizationIndex index(acl);
  Policy out = policy;
  out.rules = merge_and_simplify(policy.rules, index, {});
  std::sort(out.rules.begin(), out.rules.end());
  return out;
}

}  // namespace rebac_miner
