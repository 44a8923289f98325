#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rebac_miner/formula_learner.hpp"
#include "rebac_miner/json_io.hpp"
#include "rebac_miner/miner.hpp"

namespace rebac_miner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconsistent = 3;

inline constexpr std::string_view kToolVersion = "0.1.0";

/// What a command echoes into its manifest.
struct Invocation {
  std::vector<std::string> argv;
};

struct GenerateOptions {
  std::string spec;
  int n = 5;
  double s = 0.0;
  std::uint64_t seed = 0;
  std::filesystem::path outdir = ".";
  /// Also write the object model before unknown injection.
  bool write_known_model = false;
};

struct MineOptions {
  std::filesystem::path classmodel;
  std::filesystem::path objectmodel;
  std::filesystem::path au;
  std::filesystem::path output = "policy.json";
  MinerConfig config;
  std::optional<std::filesystem::path> dump_datasets;
};

struct EvalOptions {
  std::filesystem::path mined;
  std::filesystem::path reference;
  std::filesystem::path classmodel;
  std::filesystem::path objectmodel;
  /// Model the reference is evaluated on; defaults to `objectmodel`.
  std::optional<std::filesystem::path> reference_objectmodel;
  std::filesystem::path output = "report.json";
  bool simplify_reference = true;
};

struct LearnOptions {
  std::filesystem::path csv;
  LearnerConfig config;
  bool dump_tree = false;
  std::optional<std::filesystem::path> manifest;
};

/// Manifest path written next to `output`: "x.json" -> "x.manifest.json".
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

json config_to_json(const MinerConfig& cfg);

// Commands return an exit code and report problems on `err`. They throw
// nothing for bad input.
int cmd_generate(const GenerateOptions& opt, const Invocation& inv, std::ostream& out,
                 std::ostream& err);
int cmd_mine(const MineOptions& opt, const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opt, const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_learn_formula(const LearnOptions& opt, const Invocation& inv, std::ostream& out,
                      std::ostream& err);

}  // namespace rebac_miner
