#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rebac_miner/tvl.hpp"

namespace rebac_miner {

/// Order in which replacement literals are tried when an IsUnknown literal
/// cannot simply be dropped.
enum class ReplacementOrder {
  /// Positive literals before negative ones, then ascending cost, then index.
  PositivesFirstByCost,
};

struct LearnerConfig {
  int max_iter = 5;
  ReplacementOrder replacement_order = ReplacementOrder::PositivesFirstByCost;
};

/// Why a learned formula was rejected. `row` is an offending row of the
/// input dataset: an F/U row granted T, or a T row left uncovered.
struct LearnFailure {
  enum class Kind { Invalid, Uncovered };
  Kind kind = Kind::Invalid;
  std::size_t row = 0;
};

struct LearnResult {
  DnfFormula formula;  // empty on failure
  bool used_fallback = false;
  std::set<FeatureIndex> blacklisted;
  int iterations = 0;
  std::optional<LearnFailure> failure;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return !failure.has_value(); }
};

/// Supplies the conjunction that covers a single T row (given by index)
/// when the tree iterations did not cover it.
using FallbackConjunction = std::function<Conjunction(std::size_t row)>;

/// Conjunction with `f` for each T cell of `v` and `!f` for each F cell.
Conjunction default_cover_conjunction(std::span<const Truth> v);

/// Removes or replaces the IsUnknown literals of `c` one at a time. Returns
/// the cleaned conjunction, or the features of all IsUnknown literals of `c`
/// when some literal could be neither removed nor replaced.
///
/// `validity_set` is the full dataset, `coverage_set` the rows still to
/// cover in this iteration and `accepted` the clean disjuncts found so far in
/// this iteration. `hidden` features are never used as replacements.
using EliminationResult = std::variant<Conjunction, std::set<FeatureIndex>>;
EliminationResult eliminate_unknown_literal(const Conjunction& c,
                                            const LabeledDataset& validity_set,
                                            const std::vector<Conjunction>& accepted,
                                            const LabeledDataset& coverage_set,
                                            const LearnerConfig& cfg,
                                            const std::set<FeatureIndex>& hidden = {});

/// Learns a DNF formula that is T exactly on the T-labeled rows of `ds`.
/// Features in `hidden` may be referenced by `fallback` but are never used
/// for splitting or replacement.
LearnResult learn_formula(const LabeledDataset& ds, const LearnerConfig& cfg = {},
                          const FallbackConjunction& fallback = {},
                          const std::set<FeatureIndex>& hidden = {});

}  // namespace rebac_miner
