#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "rebac_miner/tvl.hpp"

namespace rebac_miner::testing {

inline FeatureVector fv(std::string_view cells) {
  FeatureVector v;
  for (char c : cells) v.push_back(*truth_from_char(c));
  return v;
}

/// The six labeled rows of the running example with its four features.
inline LabeledDataset example_dataset() {
  LabeledDataset ds;
  ds.features = {{"sub.dept = res.dept", 2},
                 {"sub.dept = CS", 2},
                 {"res.dept = CS", 2},
                 {"res.type = Handbook", 2}};
  ds.add_row(fv("UTUT"), Truth::T);
  ds.add_row(fv("TTTU"), Truth::T);
  ds.add_row(fv("UTUU"), Truth::F);
  ds.add_row(fv("UUUT"), Truth::T);
  ds.add_row(fv("UUTU"), Truth::F);
  ds.add_row(fv("UUUU"), Truth::F);
  return ds;
}

/// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return std::bernoulli_distribution(p)(engine_); }
  Truth truth() { return kAllTruths[below(3)]; }
  FeatureVector vector(std::size_t n) {
    FeatureVector v(n);
    for (auto& t : v) t = truth();
    return v;
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// A dataset with features f0, f1, ... of cost 1 and no rows.
inline LabeledDataset empty_dataset(std::size_t features) {
  LabeledDataset ds;
  for (std::size_t f = 0; f < features; ++f) ds.features.push_back({"f" + std::to_string(f), 1});
  return ds;
}

inline bool monotonic_with(const LabeledDataset& ds, const FeatureVector& v, Truth label) {
  for (const auto& row : ds.rows) {
    if (fv_leq(row.values, v) && !info_leq(row.label, label)) return false;
    if (fv_leq(v, row.values) && !info_leq(label, row.label)) return false;
  }
  return true;
}

/// Rows are drawn at random and kept only while the set stays monotonic.
inline LabeledDataset random_monotonic_by_rejection(Gen& g) {
  auto ds = empty_dataset(g.between(1, 5));
  const std::size_t target = g.between(0, 30);
  for (int attempts = 0; ds.size() < target && attempts < 500; ++attempts) {
    const auto v = g.vector(ds.feature_count());
    const Truth label = g.truth();
    if (monotonic_with(ds, v, label)) ds.add_row(v, label);
  }
  return ds;
}

/// Labels come from a random formula, which is monotone in its inputs.
inline LabeledDataset random_monotonic_by_formula(Gen& g) {
  auto ds = empty_dataset(g.between(1, 5));
  DnfFormula d;
  for (std::size_t i = g.between(0, 3); i > 0; --i) {
    Conjunction c;
    for (FeatureIndex f = 0; f < ds.feature_count(); ++f) {
      if (g.chance(0.4)) c.add({f, g.chance(0.6) ? Polarity::Positive : Polarity::Negative});
    }
    d.disjuncts.push_back(c);
  }
  for (std::size_t r = g.between(0, 30); r > 0; --r) {
    const auto v = g.vector(ds.feature_count());
    ds.add_row(v, eval_dnf(d, v));
  }
  return ds;
}

/// All vectors of length n over {F, U, T}.
inline std::vector<FeatureVector> all_vectors(std::size_t n) {
  std::vector<FeatureVector> out{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<FeatureVector> next;
    for (const auto& v : out) {
      for (Truth t : kAllTruths) {
        auto w = v;
        w.push_back(t);
        next.push_back(std::move(w));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace rebac_miner::testing
