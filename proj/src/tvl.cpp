#include "rebac_miner/tvl.hpp"

#include <algorithm>
#include <stdexcept>

namespace rebac_miner {

char to_char(Truth t) noexcept {
  switch (t) {
    case Truth::T:
      return 'T';
    case Truth::F:
      return 'F';
    case Truth::U:
      break;
  }
  return 'U';
}

std::optional<Truth> truth_from_char(char c) noexcept {
  switch (c) {
    case 'T':
    case 't':
      return Truth::T;
    case 'F':
    case 'f':
      return Truth::F;
    case 'U':
    case 'u':
      return Truth::U;
    default:
      return std::nullopt;
  }
}

void LabeledDataset::add_row(FeatureVector values, Truth label,
                             std::optional<Provenance> provenance) {
  if (values.size() != features.size()) {
    throw std::invalid_argument("feature vector has " + std::to_string(values.size()) +
                                " cells, table has " + std::to_string(features.size()));
  }
  rows.push_back({std::move(values), label, std::move(provenance)});
}

bool fv_leq(std::span<const Truth> lhs, std::span<const Truth> rhs) {
  if (lhs.size() != rhs.size()) {
    throw std::invalid_argument("fv_leq: feature vectors over different tables");
  }
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!info_leq(lhs[i], rhs[i])) return false;
  }
  return true;
}

std::optional<std::pair<std::size_t, std::size_t>> check_monotonic(const LabeledDataset& ds) {
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    for (std::size_t j = 0; j < ds.rows.size(); ++j) {
      if (i == j) continue;
      const auto& a = ds.rows[i];
      const auto& b = ds.rows[j];
      if (fv_leq(a.values, b.values) && !info_leq(a.label, b.label)) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

namespace {

auto find_feature(std::vector<Literal>& lits, FeatureIndex f) {
  return std::lower_bound(lits.begin(), lits.end(), f,
                          [](const Literal& l, FeatureIndex x) { return l.feature < x; });
}

}  // namespace

Conjunction::Conjunction(std::vector<Literal> literals) {
  for (const auto& lit : literals) {
    if (!add(lit)) throw std::invalid_argument("conjunction constrains a feature twice");
  }
}

bool Conjunction::add(Literal lit) {
  auto it = find_feature(literals_, lit.feature);
  if (it != literals_.end() && it->feature == lit.feature) return false;
  literals_.insert(it, lit);
  return true;
}

bool Conjunction::remove(FeatureIndex feature) {
  auto it = find_feature(literals_, feature);
  if (it == literals_.end() || it->feature != feature) return false;
  literals_.erase(it);
  return true;
}

bool Conjunction::replace(FeatureIndex feature, Literal with) {
  if (with.feature != feature && uses(with.feature)) return false;
  if (!remove(feature)) return false;
  add(with);
  return true;
}

bool Conjunction::uses(FeatureIndex feature) const noexcept {
  return std::binary_search(
      literals_.begin(), literals_.end(), Literal{feature, Polarity::Positive},
      [](const Literal& a, const Literal& b) { return a.feature < b.feature; });
}

bool Conjunction::has_unknown_literal() const noexcept {
  return std::any_of(literals_.begin(), literals_.end(),
                     [](const Literal& l) { return l.polarity == Polarity::IsUnknown; });
}

bool Conjunction::is_subset_of(const Conjunction& other) const noexcept {
  return std::includes(other.literals_.begin(), other.literals_.end(), literals_.begin(),
                       literals_.end());
}

bool DnfFormula::has_unknown_literal() const noexcept {
  return std::any_of(disjuncts.begin(), disjuncts.end(),
                     [](const Conjunction& c) { return c.has_unknown_literal(); });
}

Truth eval_literal(const Literal& lit, std::span<const Truth> v) {
  const Truth value = v[lit.feature];
  switch (lit.polarity) {
    case Polarity::Positive:
      return value;
    case Polarity::Negative:
      return kleene_not(value);
    case Polarity::IsUnknown:
      break;
  }
  return value == Truth::U ? Truth::T : Truth::F;
}

Truth eval_conjunction(const Conjunction& c, std::span<const Truth> v) {
  Truth acc = Truth::T;
  for (const auto& lit : c.literals()) {
    acc = kleene_and(acc, eval_literal(lit, v));
    if (acc == Truth::F) break;
  }
  return acc;
}

Truth eval_dnf(const DnfFormula& d, std::span<const Truth> v) {
  Truth acc = Truth::F;
  for (const auto& c : d.disjuncts) {
    acc = kleene_or(acc, eval_conjunction(c, v));
    if (acc == Truth::T) break;
  }
  return acc;
}

bool valid(const Conjunction& c, const LabeledDataset& ds) {
  return std::none_of(ds.rows.begin(), ds.rows.end(), [&](const LabeledRow& row) {
    return row.label != Truth::T && eval_conjunction(c, row.values) == Truth::T;
  });
}

bool valid(const DnfFormula& d, const LabeledDataset& ds) {
  return std::none_of(ds.rows.begin(), ds.rows.end(), [&](const LabeledRow& row) {
    return row.label != Truth::T && eval_dnf(d, row.values) == Truth::T;
  });
}

bool covers(const DnfFormula& d, const LabeledDataset& ds) {
  return std::all_of(ds.rows.begin(), ds.rows.end(), [&](const LabeledRow& row) {
    return row.label != Truth::T || eval_dnf(d, row.values) == Truth::T;
  });
}

DnfFormula remove_redundant(DnfFormula d) {
  auto& cs = d.disjuncts;
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<Conjunction> kept;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool absorbed = false;
    for (std::size_t j = 0; j < cs.size() && !absorbed; ++j) {
      absorbed = i != j && cs[j].size() < cs[i].size() && cs[j].is_subset_of(cs[i]);
    }
    if (!absorbed) kept.push_back(cs[i]);
  }
  cs = std::move(kept);
  return d;
}

std::string to_string(const Literal& lit, std::span<const FeatureInfo> features) {
  const std::string name = lit.feature < features.size() && !features[lit.feature].label.empty()
                               ? features[lit.feature].label
                               : "f" + std::to_string(lit.feature);
  switch (lit.polarity) {
    case Polarity::Positive:
      return name;
    case Polarity::Negative:
      return "!(" + name + ")";
    case Polarity::IsUnknown:
      break;
  }
  return "<" + name + "> = U";
}

std::string to_string(const Conjunction& c, std::span<const FeatureInfo> features) {
  if (c.empty()) return "true";
  std::string out;
  for (const auto& lit : c.literals()) {
    if (!out.empty()) out += " & ";
    out += to_string(lit, features);
  }
  return out;
}

std::string to_string(const DnfFormula& d, std::span<const FeatureInfo> features) {
  if (d.disjuncts.empty()) return "false";
  std::string out;
  for (const auto& c : d.disjuncts) {
    if (!out.empty()) out += " | ";
    out += "(" + to_string(c, features) + ")";
  }
  return out;
}

}  // namespace rebac_miner
