#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rebac_miner/commands.hpp"
#include "rebac_miner/datagen.hpp"

using namespace rebac_miner;

namespace {

std::string env(const std::string& flag) { return "REBAC_MINER_" + flag; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine relationship-based access control policies from ACLs with unknown values"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Invocation inv;
  inv.argv.assign(argv, argv + argc);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic ACL policy");
  generate->add_option("spec", gen.spec, "Built-in generator spec (org-chart, univ-mini)")
      ->required();
  generate->add_option("N", gen.n, "Size parameter")->required();
  generate->add_option("s", gen.s, "Unknown scaling factor")->required();
  generate->add_option("seed", gen.seed, "Random seed")->required();
  generate->add_option("outdir", gen.outdir, "Output directory")->required();
  generate->add_flag("--write-known-model", gen.write_known_model,
                     "Also write the object model before unknown injection")
      ->envname(env("WRITE_KNOWN_MODEL"));

  MineOptions mine_opt;
  std::string id_strategy = std::string(to_string(mine_opt.config.id_strategy));
  bool no_negation = false;
  auto* mine_cmd = app.add_subcommand("mine", "Mine a policy from an ACL policy");
  mine_cmd->add_option("classmodel", mine_opt.classmodel)->required()->check(CLI::ExistingFile);
  mine_cmd->add_option("objectmodel", mine_opt.objectmodel)->required()->check(CLI::ExistingFile);
  mine_cmd->add_option("au", mine_opt.au)->required()->check(CLI::ExistingFile);
  mine_cmd->add_option("-o,--output", mine_opt.output, "Mined policy path")
      ->envname(env("OUTPUT"))
      ->capture_default_str();
  mine_cmd->add_flag("--no-negation", no_negation, "Disallow negation in the mined policy")
      ->envname(env("NO_NEGATION"));
  mine_cmd->add_option("--id-strategy", id_strategy, "retry or per-vector")
      ->check(CLI::IsMember({"retry", "per-vector"}))
      ->envname(env("ID_STRATEGY"))
      ->capture_default_str();
  mine_cmd->add_option("--max-iter", mine_opt.config.learner.max_iter)
      ->check(CLI::PositiveNumber)
      ->envname(env("MAX_ITER"))
      ->capture_default_str();
  mine_cmd->add_option("--max-cond-len", mine_opt.config.limits.max_condition_path_len)
      ->check(CLI::PositiveNumber)
      ->envname(env("MAX_COND_LEN"))
      ->capture_default_str();
  mine_cmd->add_option("--max-cons-len", mine_opt.config.limits.max_constraint_path_len)
      ->check(CLI::PositiveNumber)
      ->envname(env("MAX_CONS_LEN"))
      ->capture_default_str();
  mine_cmd->add_flag("--include-ids", mine_opt.config.limits.include_id_conditions,
                     "Offer id conditions to the learner from the start")
      ->envname(env("INCLUDE_IDS"));
  mine_cmd->add_flag("--naive-unknown-as-false", mine_opt.config.naive_unknown_as_false,
                     "Diagnostic: read unknown feature values as false")
      ->envname(env("NAIVE_UNKNOWN_AS_FALSE"));
  mine_cmd->add_option("--dump-datasets", mine_opt.dump_datasets,
                       "Directory for per-task CSV datasets")
      ->envname(env("DUMP_DATASETS"));
  mine_cmd->add_option("--jobs", mine_opt.config.jobs, "Parallel learning tasks")
      ->check(CLI::PositiveNumber)
      ->envname(env("JOBS"))
      ->capture_default_str();
  mine_cmd->add_option("--seed", mine_opt.config.seed)->envname(env("SEED"));

  EvalOptions eval_opt;
  bool no_simplify = false;
  auto* eval = app.add_subcommand("eval", "Compare a mined policy with a reference policy");
  eval->add_option("mined", eval_opt.mined)->required()->check(CLI::ExistingFile);
  eval->add_option("reference", eval_opt.reference)->required()->check(CLI::ExistingFile);
  eval->add_option("classmodel", eval_opt.classmodel)->required()->check(CLI::ExistingFile);
  eval->add_option("objectmodel", eval_opt.objectmodel)->required()->check(CLI::ExistingFile);
  eval->add_option("--reference-objectmodel", eval_opt.reference_objectmodel,
                   "Object model the reference is evaluated on")
      ->check(CLI::ExistingFile)
      ->envname(env("REFERENCE_OBJECTMODEL"));
  eval->add_option("-o,--output", eval_opt.output, "Report path")
      ->envname(env("REPORT"))
      ->capture_default_str();
  eval->add_flag("--no-simplify-reference", no_simplify)->envname(env("NO_SIMPLIFY_REFERENCE"));

  LearnOptions learn;
  auto* learn_cmd = app.add_subcommand("learn-formula", "Learn a formula from a CSV dataset");
  learn_cmd->add_option("csv", learn.csv)->required()->check(CLI::ExistingFile);
  learn_cmd->add_option("--max-iter", learn.config.max_iter)
      ->check(CLI::PositiveNumber)
      ->envname(env("MAX_ITER"))
      ->capture_default_str();
  learn_cmd->add_flag("--dump-tree", learn.dump_tree)->envname(env("DUMP_TREE"));
  learn_cmd->add_option("--manifest", learn.manifest)->envname(env("MANIFEST"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*generate) return cmd_generate(gen, inv, std::cout, std::cerr);
  if (*mine_cmd) {
    mine_opt.config.allow_negation = !no_negation;
    mine_opt.config.id_strategy = *id_strategy_from_string(id_strategy);
    return cmd_mine(mine_opt, inv, std::cout, std::cerr);
  }
  if (*eval) {
    eval_opt.simplify_reference = !no_simplify;
    return cmd_eval(eval_opt, inv, std::cout, std::cerr);
  }
  return cmd_learn_formula(learn, inv, std::cout, std::cerr);
}
