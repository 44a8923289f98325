#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rebac_miner {

/// Kleene truth value. The enumerator order is the truth ordering F < U < T,
/// so conjunction is min and disjunction is max.
enum class Truth : std::uint8_t { F = 0, U = 1, T = 2 };

inline constexpr std::array<Truth, 3> kAllTruths{Truth::F, Truth::U, Truth::T};

constexpr Truth kleene_not(Truth t) noexcept {
  return static_cast<Truth>(2 - static_cast<int>(t));
}

constexpr Truth kleene_and(Truth a, Truth b) noexcept { return a < b ? a : b; }

constexpr Truth kleene_or(Truth a, Truth b) noexcept { return a < b ? b : a; }

/// Information ordering: U is below both definite values.
constexpr bool info_leq(Truth a, Truth b) noexcept { return a == b || a == Truth::U; }

char to_char(Truth t) noexcept;
std::optional<Truth> truth_from_char(char c) noexcept;

using FeatureIndex = std::size_t;

/// Display metadata for one column of a learning task. `cost` is the WSC of
/// the underlying condition or constraint and only serves as a tie-breaker.
struct FeatureInfo {
  std::string label;
  int cost = 0;
};

using FeatureVector = std::vector<Truth>;

struct Provenance {
  std::string subject;
  std::string resource;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct LabeledRow {
  FeatureVector values;
  Truth label = Truth::F;
  std::optional<Provenance> provenance;
};

struct LabeledDataset {
  std::vector<FeatureInfo> features;
  std::vector<LabeledRow> rows;

  /// Throws std::invalid_argument unless `values` is total over `features`.
  void add_row(FeatureVector values, Truth label,
               std::optional<Provenance> provenance = std::nullopt);

  std::size_t feature_count() const noexcept { return features.size(); }
  std::size_t size() const noexcept { return rows.size(); }
};

/// Pointwise information ordering. Throws std::invalid_argument when the
/// vectors come from different feature tables.
bool fv_leq(std::span<const Truth> lhs, std::span<const Truth> rhs);

/// Returns the first (in row order) pair of row indices (i, j) with
/// v_i <= v_j but label_i not <= label_j, or nothing if the set is monotonic.
std::optional<std::pair<std::size_t, std::size_t>> check_monotonic(const LabeledDataset& ds);

enum class Polarity : std::uint8_t { Positive, Negative, IsUnknown };

struct Literal {
  FeatureIndex feature = 0;
  Polarity polarity = Polarity::Positive;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A set of literals with at most one literal per feature, kept sorted.
class Conjunction {
 public:
  Conjunction() = default;

  /// Throws std::invalid_argument if two literals share a feature.
  explicit Conjunction(std::vector<Literal> literals);

  /// Adds `lit`; returns false (and leaves the conjunction unchanged) if
  /// the feature is already constrained.
  bool add(Literal lit);
  bool remove(FeatureIndex feature);
  bool replace(FeatureIndex feature, Literal with);

  bool uses(FeatureIndex feature) const noexcept;
  bool has_unknown_literal() const noexcept;
  bool is_subset_of(const Conjunction& other) const noexcept;
  bool empty() const noexcept { return literals_.empty(); }
  std::size_t size() const noexcept { return literals_.size(); }

  const std::vector<Literal>& literals() const noexcept { return literals_; }

  friend auto operator<=>(const Conjunction&, const Conjunction&) = default;

 private:
  std::vector<Literal> literals_;
};

struct DnfFormula {
  std::vector<Conjunction> disjuncts;

  bool has_unknown_literal() const noexcept;

  friend bool operator==(const DnfFormula&, const DnfFormula&) = default;
};

/// IsUnknown literals evaluate as a two-valued test (T iff the value is U).
Truth eval_literal(const Literal& lit, std::span<const Truth> v);
Truth eval_conjunction(const Conjunction& c, std::span<const Truth> v);
Truth eval_dnf(const DnfFormula& d, std::span<const Truth> v);

/// No row labeled F or U evaluates to T.
bool valid(const Conjunction& c, const LabeledDataset& ds);
bool valid(const DnfFormula& d, const LabeledDataset& ds);

/// Every row labeled T evaluates to T.
bool covers(const DnfFormula& d, const LabeledDataset& ds);

/// Drops every disjunct whose literal set contains another disjunct's. Of
/// equal literal sets the lexicographically first survives. Output is sorted.
DnfFormula remove_redundant(DnfFormula d);

std::string to_string(const Literal& lit, std::span<const FeatureInfo> features);
std::string to_string(const Conjunction& c, std::span<const FeatureInfo> features);
std::string to_string(const DnfFormula& d, std::span<const FeatureInfo> features);

}  // namespace rebac_miner
