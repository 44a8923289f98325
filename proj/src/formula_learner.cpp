#include "rebac_miner/formula_learner.hpp"

#include <algorithm>
#include <stdexcept>

#include "rebac_miner/tree.hpp"

namespace rebac_miner {

namespace {

std::vector<Literal> replacement_candidates(const Conjunction& c, const LabeledDataset& ds,
                                            const LearnerConfig& cfg,
                                            const std::set<FeatureIndex>& hidden) {
  std::vector<Literal> out;
  for (FeatureIndex f = 0; f < ds.feature_count(); ++f) {
    if (c.uses(f) || hidden.contains(f)) continue;
    out.push_back({f, Polarity::Positive});
    out.push_back({f, Polarity::Negative});
  }
  switch (cfg.replacement_order) {
    case ReplacementOrder::PositivesFirstByCost:
      std::stable_sort(out.begin(), out.end(), [&](const Literal& a, const Literal& b) {
        const bool a_pos = a.polarity == Polarity::Positive;
        const bool b_pos = b.polarity == Polarity::Positive;
        if (a_pos != b_pos) return a_pos;
        const int ca = ds.features[a.feature].cost;
        const int cb = ds.features[b.feature].cost;
        if (ca != cb) return ca < cb;
        return a.feature < b.feature;
      });
      break;
  }
  return out;
}

std::size_t covered_true_rows(const Conjunction& c, const LabeledDataset& ds) {
  return static_cast<std::size_t>(
      std::count_if(ds.rows.begin(), ds.rows.end(), [&](const LabeledRow& row) {
        return row.label == Truth::T && eval_conjunction(c, row.values) == Truth::T;
      }));
}

LabeledDataset subset(const LabeledDataset& ds, const std::vector<std::size_t>& rows) {
  LabeledDataset out;
  out.features = ds.features;
  out.rows.reserve(rows.size());
  for (std::size_t r : rows) out.rows.push_back(ds.rows[r]);
  return out;
}

}  // namespace

Conjunction default_cover_conjunction(std::span<const Truth> v) {
  Conjunction c;
  for (FeatureIndex f = 0; f < v.size(); ++f) {
    if (v[f] == Truth::T) c.add({f, Polarity::Positive});
    if (v[f] == Truth::F) c.add({f, Polarity::Negative});
  }
  return c;
}

EliminationResult eliminate_unknown_literal(const Conjunction& c,
                                            const LabeledDataset& validity_set,
                                            const std::vector<Conjunction>& accepted,
                                            const LabeledDataset& coverage_set,
                                            const LearnerConfig& cfg,
                                            const std::set<FeatureIndex>& hidden) {
  std::vector<Literal> unknowns;
  for (const auto& lit : c.literals()) {
    if (lit.polarity == Polarity::IsUnknown) unknowns.push_back(lit);
  }

  // T rows of this iteration that the accepted disjuncts leave uncovered;
  // a replacement must cover all of them.
  std::vector<const LabeledRow*> pending;
  for (const auto& row : coverage_set.rows) {
    if (row.label != Truth::T) continue;
    const bool hit = std::any_of(accepted.begin(), accepted.end(), [&](const Conjunction& a) {
      return eval_conjunction(a, row.values) == Truth::T;
    });
    if (!hit) pending.push_back(&row);
  }

  const auto candidates = replacement_candidates(c, validity_set, cfg, hidden);
  Conjunction current = c;
  for (const auto& fu : unknowns) {
    Conjunction removed = current;
    removed.remove(fu.feature);
    if (valid(removed, validity_set)) {
      current = std::move(removed);
      continue;
    }
    for (const auto& f1 : candidates) {
      if (current.uses(f1.feature)) continue;
      Conjunction replaced = current;
      replaced.replace(fu.feature, f1);
      if (!valid(replaced, validity_set)) continue;
      const bool covers_pending =
          std::all_of(pending.begin(), pending.end(), [&](const LabeledRow* row) {
            return eval_conjunction(replaced, row->values) == Truth::T;
          });
      if (covers_pending) {
        current = std::move(replaced);
        break;
      }
    }
  }

  if (!current.has_unknown_literal()) return current;
  std::set<FeatureIndex> failed;
  for (const auto& lit : unknowns) failed.insert(lit.feature);
  return failed;
}

LearnResult learn_formula(const LabeledDataset& ds, const LearnerConfig& cfg,
                          const FallbackConjunction& fallback,
                          const std::set<FeatureIndex>& hidden) {
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

  LearnResult result;
  DnfFormula d;
  auto add_disjunct = [&](Conjunction c) {
    if (std::find(d.disjuncts.begin(), d.disjuncts.end(), c) == d.disjuncts.end()) {
      d.disjuncts.push_back(std::move(c));
    }
  };

  while (!covers(d, ds) && result.iterations < cfg.max_iter) {
    std::vector<std::size_t> remaining;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      const auto& row = ds.rows[r];
      if (row.label == Truth::T && eval_dnf(d, row.values) == Truth::T) continue;
      remaining.push_back(r);
    }
    const LabeledDataset s_prime = subset(ds, remaining);

    std::set<FeatureIndex> excluded = result.blacklisted;
    excluded.insert(hidden.begin(), hidden.end());
    const DecisionTree tree = build_tree(ds, remaining, excluded);

    std::vector<Conjunction> accepted;
    std::vector<std::pair<std::size_t, Conjunction>> with_unknowns;
    for (auto& c : extract_true_paths(tree)) {
      if (c.has_unknown_literal()) {
        const std::size_t n = covered_true_rows(c, s_prime);
        with_unknowns.emplace_back(n, std::move(c));
      } else {
        accepted.push_back(std::move(c));
      }
    }
    std::sort(with_unknowns.begin(), with_unknowns.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });

    for (const auto& [n, c] : with_unknowns) {
      auto cleaned = eliminate_unknown_literal(c, ds, accepted, s_prime, cfg, hidden);
      if (auto* conj = std::get_if<Conjunction>(&cleaned)) {
        accepted.push_back(std::move(*conj));
      } else {
        const auto& failed = std::get<std::set<FeatureIndex>>(cleaned);
        result.blacklisted.insert(failed.begin(), failed.end());
      }
    }
    for (auto& c : accepted) add_disjunct(std::move(c));
    ++result.iterations;
  }

  if (!covers(d, ds)) {
    result.used_fallback = true;
    std::vector<std::size_t> uncovered;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      const auto& row = ds.rows[r];
      if (row.label == Truth::T && eval_dnf(d, row.values) != Truth::T) uncovered.push_back(r);
    }
    for (std::size_t r : uncovered) {
      Conjunction c = fallback ? fallback(r) : default_cover_conjunction(ds.rows[r].values);
      if (c.empty()) {
        result.warnings.push_back("row " + std::to_string(r) +
                                  " is covered by an empty conjunction; formula is always T");
      }
      add_disjunct(std::move(c));
    }
  }

  d = remove_redundant(std::move(d));

  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto& row = ds.rows[r];
    const Truth value = eval_dnf(d, row.values);
    if (row.label != Truth::T && value == Truth::T) {
      result.failure = LearnFailure{LearnFailure::Kind::Invalid, r};
      break;
    }
    if (row.label == Truth::T && value != Truth::T) {
      result.failure = LearnFailure{LearnFailure::Kind::Uncovered, r};
      break;
    }
  }
  if (result.failure) {
    result.formula = {};
  } else {
    result.formula = std::move(d);
  }
  return result;
}

}  // namespace rebac_miner
