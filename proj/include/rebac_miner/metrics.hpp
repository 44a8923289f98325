#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <set>
#include <vector>

#include "rebac_miner/policy.hpp"

namespace rebac_miner {

/// |a & b| / |a | b|, with two empty sets scoring 1.
template <typename T, typename Cmp>
double jaccard(const std::set<T, Cmp>& a, const std::set<T, Cmp>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  const auto& less = a.key_comp();
  while (ia != a.end() && ib != b.end()) {
    if (less(*ia, *ib)) {
      ++ia;
    } else if (less(*ib, *ia)) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

/// Jaccard similarity of single values.
template <typename T>
double jaccard_value(const T& a, const T& b) {
  return a == b ? 1.0 : 0.0;
}

double syn_atomic_condition(const AtomicCondition& a, const AtomicCondition& b);
double syn_condition_sets(const std::set<AtomicCondition>& a, const std::set<AtomicCondition>& b);
double syn_rule(const Rule& a, const Rule& b);

struct RuleMatch {
  std::size_t rule = 0;  // index in the first policy
  std::size_t best = 0;  // index in the second policy
  double score = 0.0;
};

/// Average over the rules of `a` of the best match in `b`. Asymmetric.
double syn_policy(const std::vector<Rule>& a, const std::vector<Rule>& b,
                  std::vector<RuleMatch>* matches = nullptr);

/// Jaccard similarity of the meanings, each policy over its own model.
double semantic_similarity(const Policy& a, const Policy& b);

struct SimilarityReport {
  double syntactic = 0.0;
  double semantic = 0.0;
  std::vector<RuleMatch> per_rule_best_match;
  int wsc_mined = 0;
  int wsc_reference = 0;
};

SimilarityReport compare_policies(const Policy& mined, const Policy& reference);

/// Applies the second-phase merging and simplification to a policy, with
/// its own meaning as the authorizations.
Policy simplify_policy(const Policy& policy);

}  // namespace rebac_miner
