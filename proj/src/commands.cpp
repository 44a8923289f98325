#include "rebac_miner/commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "rebac_miner/datagen.hpp"
#include "rebac_miner/errors.hpp"
#include "rebac_miner/metrics.hpp"
#include "rebac_miner/tree.hpp"

namespace rebac_miner {

namespace fs = std::filesystem;

namespace {

/// Collects input and output digests for a manifest.
class ManifestBuilder {
 public:
  ManifestBuilder(std::string command, const Invocation& inv) {
    doc_["tool"] = "rebac-miner";
    doc_["version"] = std::string(kToolVersion);
    doc_["command"] = std::move(command);
    doc_["argv"] = inv.argv;
    doc_["inputs"] = json::array();
    doc_["outputs"] = json::array();
    doc_["timings"] = json::object();
  }

  void input(const fs::path& p, std::string_view bytes) { add("inputs", p, bytes); }

  void output(const fs::path& p, std::string_view bytes) {
    write_text_file(p, bytes);
    add("outputs", p, bytes);
  }

  json& operator[](const char* key) { return doc_[key]; }

  void write(const fs::path& p) { write_text_file(p, dump(doc_)); }

 private:
  void add(const char* list, const fs::path& p, std::string_view bytes) {
    doc_[list].push_back({{"path", p.generic_string()}, {"fnv1a64", hex_digest(fnv1a64(bytes))}});
  }

  json doc_;
};

json parse_input(ManifestBuilder& m, const fs::path& p) {
  const auto text = read_text_file(p);
  m.input(p, text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(p.generic_string() + ": " + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string tuple_text(const SraTuple& t) {
  return "(" + t.subject + ", " + t.resource + ", " + t.action + ")";
}

std::string dataset_file_name(const TaskKey& key) {
  std::string out = key.subject_type + "__" + key.resource_type + "__" + key.action + ".csv";
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return out;
}

/// Runs `body`, mapping exceptions to exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConsistencyError& e) {
    err << "inconsistent: " << e.what() << '\n';
    return kExitInconsistent;
  } catch (const json::exception& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

fs::path manifest_path_for(const fs::path& output) {
  fs::path p = output;
  p.replace_extension(".manifest.json");
  return p;
}

json config_to_json(const MinerConfig& cfg) {
  return {{"allow_negation", cfg.allow_negation},
          {"id_strategy", std::string(to_string(cfg.id_strategy))},
          {"max_iter", cfg.learner.max_iter},
          {"max_cond_len", cfg.limits.max_condition_path_len},
          {"max_cons_len", cfg.limits.max_constraint_path_len},
          {"include_ids", cfg.limits.include_id_conditions},
          {"naive_unknown_as_false", cfg.naive_unknown_as_false},
          {"seed", cfg.seed},
          {"jobs", cfg.jobs}};
}

int cmd_generate(const GenerateOptions& opt, const Invocation& inv, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const GeneratorSpec spec = builtin_spec(opt.spec);
    for (const auto& w : spec.lint()) err << "warning: " << w << '\n';
    const GeneratedDataset data = generate(spec, opt.n, opt.seed);
    const InjectionResult injected = inject_unknowns(*data.model, spec, opt.s, opt.seed);
    for (const auto& w : injected.warnings) err << "warning: " << w << '\n';

    fs::create_directories(opt.outdir);
    ManifestBuilder m("generate", inv);
    m["config"] = {{"spec", opt.spec}, {"n", opt.n}, {"s", opt.s}, {"seed", opt.seed}};
    m["seed"] = opt.seed;
    m.output(opt.outdir / "classmodel.json", dump(class_model_to_json(*spec.classes)));
    m.output(opt.outdir / "objectmodel.json", dump(object_model_to_json(*injected.model)));
    m.output(opt.outdir / "groundtruth.json", dump(policy_to_json(data.ground_truth)));
    m.output(opt.outdir / "au.json", dump_authorizations(data.acl));
    if (opt.write_known_model) {
      m.output(opt.outdir / "objectmodel-known.json", dump(object_model_to_json(*data.model)));
    }
    json probs = json::object();
    for (const auto& [key, p] : injected.probabilities) probs[key.first + "." + key.second] = p;
    m["unknown_probabilities"] = probs;
    m["timings"]["total_seconds"] = seconds_since(start);
    m.write(opt.outdir / "manifest.json");

    const auto stats = count_unknowns(*injected.model);
    out << "generated " << opt.spec << " N=" << opt.n << " s=" << opt.s << " seed=" << opt.seed
        << ": " << data.model->size() << " objects, " << data.acl.authorizations.size()
        << " authorizations, " << stats.unknown << "/" << stats.total << " unknown field values\n";
    return kExitOk;
  });
}

int cmd_mine(const MineOptions& opt, const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ManifestBuilder m("mine", inv);
    auto cm = class_model_from_json(parse_input(m, opt.classmodel));
    auto om = object_model_from_json(parse_input(m, opt.objectmodel), cm);
    const AclPolicy acl = acl_from_json(parse_input(m, opt.au), om);
    m["config"] = config_to_json(opt.config);
    m["seed"] = opt.config.seed;

    const MineResult result = mine(acl, opt.config);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';

    if (opt.output.has_parent_path()) fs::create_directories(opt.output.parent_path());
    m.output(opt.output, dump(policy_to_json(result.policy)));
    if (opt.dump_datasets) {
      fs::create_directories(*opt.dump_datasets);
      for (const auto& task : result.tasks) {
        std::ostringstream csv;
        write_dataset_csv(csv, task.dataset);
        m.output(*opt.dump_datasets / dataset_file_name(task.key), csv.str());
      }
    }
    m["timings"] = {{"phase1_seconds", result.phase1_seconds},
                    {"phase2_seconds", result.phase2_seconds}};
    m["wsc_trace"] = result.wsc_trace;
    m.write(manifest_path_for(opt.output));

    for (const auto& task : result.tasks) {
      out << "task " << task.key.subject_type << "/" << task.key.resource_type << "/"
          << task.key.action << ": " << task.formula_text();
      if (task.used_id_features) out << "  [id features]";
      out << '\n';
    }
    for (const auto& r : result.policy.rules) out << to_string(r) << '\n';
    out << result.policy.rules.size() << " rules, WSC " << wsc(result.policy) << ", phase 1 "
        << result.phase1_seconds << " s, phase 2 " << result.phase2_seconds << " s\n";

    if (result.mismatch) {
      const auto& mm = *result.mismatch;
      err << "inconsistent: "
          << (mm.kind == Mismatch::Kind::Uncovered ? "uncovered " : "overgranted ")
          << tuple_text(mm.tuple) << '\n';
      return kExitInconsistent;
    }
    return kExitOk;
  });
}

int cmd_eval(const EvalOptions& opt, const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ManifestBuilder m("eval", inv);
    auto cm = class_model_from_json(parse_input(m, opt.classmodel));
    std::shared_ptr<const ObjectModel> om = object_model_from_json(parse_input(m, opt.objectmodel), cm);
    std::shared_ptr<const ObjectModel> ref_om = om;
    if (opt.reference_objectmodel) {
      ref_om = object_model_from_json(parse_input(m, *opt.reference_objectmodel), cm);
    }
    const Policy mined = policy_from_json(parse_input(m, opt.mined), om);
    Policy reference = policy_from_json(parse_input(m, opt.reference), ref_om);
    if (opt.simplify_reference) reference = simplify_policy(reference);
    m["config"] = {{"simplify_reference", opt.simplify_reference}};

    const SimilarityReport report = compare_policies(mined, reference);
    json matches = json::array();
    for (const auto& mt : report.per_rule_best_match) {
      matches.push_back({{"rule", to_string(mined.rules[mt.rule])},
                         {"best_match", to_string(reference.rules[mt.best])},
                         {"score", mt.score}});
    }
    const json doc = {{"syntactic", report.syntactic},
                      {"semantic", report.semantic},
                      {"wsc_mined", report.wsc_mined},
                      {"wsc_reference", report.wsc_reference},
                      {"rules_mined", mined.rules.size()},
                      {"rules_reference", reference.rules.size()},
                      {"per_rule_best_match", matches}};
    if (opt.output.has_parent_path()) fs::create_directories(opt.output.parent_path());
    m.output(opt.output, dump(doc));
    m.write(manifest_path_for(opt.output));

    out << std::fixed << std::setprecision(4);
    out << std::left << std::setw(22) << "syntactic similarity" << report.syntactic << '\n'
        << std::setw(22) << "semantic similarity" << report.semantic << '\n'
        << std::setw(22) << "WSC mined" << report.wsc_mined << '\n'
        << std::setw(22) << "WSC reference" << report.wsc_reference << '\n';
    for (const auto& mt : report.per_rule_best_match) {
      out << "  " << mt.score << "  " << to_string(mined.rules[mt.rule]) << "\n          ~ "
          << to_string(reference.rules[mt.best]) << '\n';
    }
    return kExitOk;
  });
}

int cmd_learn_formula(const LearnOptions& opt, const Invocation& inv, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    ManifestBuilder m("learn-formula", inv);
    const auto text = read_text_file(opt.csv);
    m.input(opt.csv, text);
    std::istringstream in(text);
    const LabeledDataset ds = read_dataset_csv(in);
    m["config"] = {{"max_iter", opt.config.max_iter}};

    if (const auto bad = check_monotonic(ds)) {
      err << "warning: dataset is not monotonic (rows " << bad->first + 1 << " and "
          << bad->second + 1 << ")\n";
    }
    if (opt.dump_tree) out << build_tree(ds).dump(ds.features);

    const LearnResult result = learn_formula(ds, opt.config);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    if (!result.ok()) {
      err << "no valid formula: row " << result.failure->row + 1 << " is "
          << (result.failure->kind == LearnFailure::Kind::Invalid ? "wrongly granted" : "uncovered")
          << '\n';
      return kExitInconsistent;
    }
    const auto formula = to_string(result.formula, ds.features);
    out << formula << '\n';
    if (result.used_fallback) err << "note: some rows were covered by per-row conjunctions\n";
    if (opt.manifest) {
      m["formula"] = formula;
      m["iterations"] = result.iterations;
      m.write(*opt.manifest);
    }
    return kExitOk;
  });
}

}  // namespace rebac_miner
