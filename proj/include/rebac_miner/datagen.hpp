#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rebac_miner/policy.hpp"

namespace rebac_miner {

/// Deterministic random source with draws defined independently of the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform01() < p; }
  double normal(double mean, double sd);

 private:
  std::mt19937_64 engine_;
};

/// How likely a field is to be known when degrading a model.
enum class FieldClass { Required, Important, Normal };

struct CountLaw {
  std::string cls;
  double fixed = 0.0;  // mean = fixed + per_n * N
  double per_n = 0.0;
};

struct FieldLaw {
  double p_true = 0.5;  // Boolean fields
  double p_none = 0.0;  // Optional fields
  int min_size = 0;     // Many fields
  int max_size = 2;
};

using FieldKey = std::pair<std::string, std::string>;

struct GeneratorSpec {
  std::string name;
  std::shared_ptr<const ClassModel> classes;
  std::vector<CountLaw> counts;  // in generation order
  std::map<FieldKey, FieldLaw> laws;
  std::map<FieldKey, FieldClass> classification;  // missing fields are Normal
  std::set<std::string> actions;
  std::vector<Rule> rules;

  FieldClass field_class(const std::string& cls, const std::string& field) const;
  /// Lint findings; an empty result means the spec is fine.
  std::vector<std::string> lint() const;
};

std::vector<std::string> builtin_spec_names();
/// Throws UsageError for unknown names.
GeneratorSpec builtin_spec(const std::string& name);

struct GeneratedDataset {
  std::shared_ptr<const ObjectModel> model;  // all values known
  Policy ground_truth;                       // over `model`
  AclPolicy acl;                             // meaning of the ground truth
};

/// Instance counts are normal around their linear means (sd 10%, at
/// least 1). Throws UsageError when n < 1.
GeneratedDataset generate(const GeneratorSpec& spec, int n, std::uint64_t seed);

struct InjectionResult {
  std::shared_ptr<const ObjectModel> model;
  std::map<FieldKey, double> probabilities;
  std::vector<std::string> warnings;
};

/// Replaces field values by unknown: Required fields never, Important ones
/// with probability 0.01 s, Normal ones with a per-field probability drawn
/// from [0.02 s, 0.05 s]. Many-valued fields are replaced whole.
InjectionResult inject_unknowns(const ObjectModel& om, const GeneratorSpec& spec, double s,
                                std::uint64_t seed);

struct UnknownStats {
  std::size_t unknown = 0;
  std::size_t total = 0;
  std::map<FieldKey, std::size_t> unknown_by_field;

  double fraction() const { return total == 0 ? 0.0 : static_cast<double>(unknown) / total; }
};

UnknownStats count_unknowns(const ObjectModel& om);

}  // namespace rebac_miner
