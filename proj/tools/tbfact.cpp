// tbfact: decompose-then-verify evaluation of clinical summaries.
//
// Subcommands: evaluate, extract, classify, filter, hallucinations,
// standardize, compare, agreement. See README.md for the corpus schema and
// artifact layout.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "tbfact/cache.hpp"
#include "tbfact/pipeline.hpp"
#include "tbfact/remote.hpp"

namespace {

using namespace tbfact;

struct CliConfig {
  std::string corpus;
  std::string out = "tbfact-out";
  std::string backend = "oracle";  // oracle | remote
  std::string endpoint;
  std::string model;
  double temperature = 0.0;
  std::string mode = "default";  // strict-full | default | lenient
  double partial_credit = 0.5;
  bool filter_reference = false;
  bool standardize_reference = false;
  int concurrency = 4;
  std::string cache_dir;
  std::string rubric_file;
  int verbosity = 0;
};

void add_common_flags(CLI::App* cmd, CliConfig& cfg, bool needs_corpus = true) {
  auto* corpus = cmd->add_option("--corpus", cfg.corpus, "Corpus JSONL, one patient per line");
  if (needs_corpus) corpus->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", cfg.out, "Output directory");
  cmd->add_option("--backend", cfg.backend, "Judge backend: oracle | remote")
      ->check(CLI::IsMember({"oracle", "remote"}));
  cmd->add_option("--endpoint", cfg.endpoint, "Remote endpoint URL (or TBFACT_ENDPOINT)");
  cmd->add_option("--model", cfg.model, "Remote model id (or TBFACT_MODEL)");
  cmd->add_option("--temperature", cfg.temperature, "Judge temperature")->check(CLI::NonNegativeNumber);
  cmd->add_option("--mode", cfg.mode, "Scoring mode: strict-full | default | lenient")
      ->check(CLI::IsMember({"strict-full", "default", "lenient"}));
  cmd->add_option("--partial-credit", cfg.partial_credit, "Credit for Partial in default mode")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--concurrency", cfg.concurrency, "Max concurrent judge pipelines")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cache-dir", cfg.cache_dir, "Judge response cache directory");
  cmd->add_option("--rubric", cfg.rubric_file, "Importance rubric text file")
      ->check(CLI::ExistingFile);
  cmd->add_flag("-v,--verbose", cfg.verbosity, "Verbose progress on stderr");
}

struct BackendStack {
  std::unique_ptr<JudgeBackend> base;
  std::unique_ptr<CachingBackend> cached;
  std::unique_ptr<CountingBackend> counting;

  JudgeBackend& top() { return *counting; }
};

BackendStack make_backend(const CliConfig& cfg) {
  BackendStack stack;
  if (cfg.backend == "remote") {
    RemoteConfig rc = RemoteConfig::from_env();
    if (!cfg.endpoint.empty()) rc.endpoint = cfg.endpoint;
    if (!cfg.model.empty()) rc.model = cfg.model;
    stack.base = std::make_unique<RemoteBackend>(rc);
  } else {
    stack.base = std::make_unique<OracleBackend>();
  }
  JudgeBackend* top = stack.base.get();
  if (!cfg.cache_dir.empty()) {
    stack.cached = std::make_unique<CachingBackend>(*top, cfg.cache_dir);
    top = stack.cached.get();
  }
  stack.counting = std::make_unique<CountingBackend>(*top);
  return stack;
}

EvaluateOptions make_options(const CliConfig& cfg, const std::string& corpus_path) {
  EvaluateOptions options;
  options.scoring.mode = scoring_mode_from_string(cfg.mode);
  options.scoring.partial_credit = cfg.partial_credit;
  options.filter_reference = cfg.filter_reference;
  options.standardize_reference = cfg.standardize_reference;
  options.concurrency = cfg.concurrency;
  options.model_id = cfg.model;
  options.temperature = cfg.temperature;
  if (!cfg.rubric_file.empty()) {
    options.rubric = ImportanceRubric::from_file(cfg.rubric_file, "importance/custom", 1);
  }
  options.corpus_path = corpus_path;
  options.input_digest = sha256_hex(read_file(corpus_path));
  return options;
}

void log_stats(const CliConfig& cfg, const BackendStack& stack) {
  std::cerr << "judge calls: " << stack.counting->calls();
  if (stack.cached) {
    const auto& s = stack.cached->cache().stats();
    std::cerr << " (cache hits " << s.hits << ", misses " << s.misses << ", corrupt "
              << s.corrupt << ")";
  }
  std::cerr << "\n";
  (void)cfg;
}

int cmd_evaluate(const CliConfig& cfg) {
  auto cases = load_corpus(cfg.corpus);
  auto stack = make_backend(cfg);
  auto options = make_options(cfg, cfg.corpus);

  if (cfg.verbosity > 0) std::cerr << "evaluating " << cases.size() << " patients\n";
  RunResult result = evaluate_corpus(cases, stack.top(), options);
  RunArtifactPaths paths = write_run_result(result, cfg.out);
  validate_artifact(cfg.out);
  log_stats(cfg, stack);

  const TbfactScore* overall = result.corpus_scores.find(Stratum::Overall);
  if (overall) {
    std::cout << "run " << result.manifest.run_id << ": " << render_scores_markdown(result.corpus_scores.rows);
  }
  std::cout << "artifact: " << paths.report.parent_path().string() << "\n";
  return 0;
}

int cmd_extract(const CliConfig& cfg, const std::string& source) {
  auto cases = load_corpus(cfg.corpus);
  auto stack = make_backend(cfg);

  std::filesystem::create_directories(cfg.out);
  std::string lines;
  for (const auto& pc : cases) {
    ExtractOptions options;
    options.patient_id = pc.patient_id;
    options.model_id = cfg.model;
    options.temperature = cfg.temperature;
    auto run_one = [&](ClaimSource s, const std::string& summary) {
      auto extraction = extract_claims(summary, s, stack.top(), options);
      for (const auto& c : extraction.claims) lines += nlohmann::json(c).dump() + "\n";
      for (const auto& r : extraction.rejected) {
        if (cfg.verbosity > 0) {
          std::cerr << pc.patient_id << ": rejected \"" << r.text << "\": " << r.reason << "\n";
        }
      }
      for (const auto& w : extraction.warnings) {
        std::cerr << pc.patient_id << ": warning: " << w << "\n";
      }
    };
    if (source == "candidate" || source == "both") {
      run_one(ClaimSource::Candidate, pc.candidate_summary);
    }
    if (source == "reference" || source == "both") {
      run_one(ClaimSource::Reference, pc.reference_summary);
    }
  }
  auto path = std::filesystem::path(cfg.out) / "claims.jsonl";
  write_file_atomic(path, lines);
  log_stats(cfg, stack);
  std::cout << "claims: " << path.string() << "\n";
  return 0;
}

int cmd_classify(const CliConfig& cfg, const std::string& claims_path) {
  auto stack = make_backend(cfg);
  ImportanceRubric rubric = cfg.rubric_file.empty()
                                ? ImportanceRubric::default_rubric()
                                : ImportanceRubric::from_file(cfg.rubric_file, "importance/custom", 1);

  std::vector<ClinicalClaim> claims;
  {
    std::istringstream in(read_file(claims_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      claims.push_back(nlohmann::json::parse(line).get<ClinicalClaim>());
    }
  }
  if (claims.empty()) {
    std::cerr << "no claims in " << claims_path << "\n";
    return 1;
  }
  JudgeOptions options;
  options.model_id = cfg.model;
  options.temperature = cfg.temperature;
  claims = classify_importance(std::move(claims), rubric, stack.top(), options);

  std::filesystem::create_directories(cfg.out);
  std::string lines;
  for (const auto& c : claims) lines += nlohmann::json(c).dump() + "\n";
  auto path = std::filesystem::path(cfg.out) / "claims_classified.jsonl";
  write_file_atomic(path, lines);
  log_stats(cfg, stack);
  std::cout << "classified claims: " << path.string() << "\n";
  return 0;
}

int cmd_filter(const CliConfig& cfg, bool over_candidate) {
  auto cases = load_corpus(cfg.corpus);
  auto stack = make_backend(cfg);
  auto options = make_options(cfg, cfg.corpus);

  CorpusFilterResult result = filter_corpus(cases, stack.top(), options, over_candidate);

  std::filesystem::create_directories(cfg.out);
  nlohmann::json j = {{"aggregate_retention", result.aggregate_retention},
                      {"total_facts", result.total_facts},
                      {"total_supported", result.total_retained}};
  nlohmann::json per_patient = nlohmann::json::array();
  for (const auto& [patient_id, report] : result.per_patient) {
    nlohmann::json item = report;
    item["patient_id"] = patient_id;
    per_patient.push_back(std::move(item));
  }
  j["per_patient"] = std::move(per_patient);
  auto json_path = std::filesystem::path(cfg.out) / "filter.json";
  write_file_atomic(json_path, j.dump(2) + "\n");
  auto md = render_filter_markdown(result, over_candidate);
  write_file_atomic(std::filesystem::path(cfg.out) / "report.md", md);
  log_stats(cfg, stack);
  std::cout << md;
  return 0;
}

int cmd_standardize(const CliConfig& cfg) {
  auto cases = load_corpus(cfg.corpus);
  auto stack = make_backend(cfg);
  JudgeOptions options;
  options.model_id = cfg.model;
  options.temperature = cfg.temperature;

  std::filesystem::create_directories(cfg.out);
  std::string lines;
  for (const auto& pc : cases) {
    StandardizedSummary out = standardize_summary(pc.reference_summary, stack.top(), options);
    for (const auto& w : out.warnings) {
      std::cerr << pc.patient_id << ": warning: " << w << "\n";
    }
    lines += nlohmann::json{{"patient_id", pc.patient_id}, {"standardized_reference", out.text}, {"warnings", out.warnings}}
                 .dump() +
             "\n";
  }
  auto path = std::filesystem::path(cfg.out) / "standardized.jsonl";
  write_file_atomic(path, lines);
  log_stats(cfg, stack);
  std::cout << "standardized summaries: " << path.string() << "\n";
  return 0;
}

RunScores load_scores_file(const std::string& path) {
  auto j = nlohmann::json::parse(read_file(path));
  RunScores scores;
  scores.config = j.at("config").get<ScoringConfig>();
  scores.rows = j.at("micro").get<std::vector<TbfactScore>>();
  for (auto& row : scores.rows) row.config = scores.config;
  return scores;
}

int cmd_compare(const std::string& scores_a, const std::string& scores_b) {
  CompareReport report = compare_runs(load_scores_file(scores_a), load_scores_file(scores_b));
  std::cout << report.markdown;
  return 0;
}

int cmd_agreement(const std::string& annotations_path, const std::string& annotator_a,
                  const std::string& annotator_b, const std::string& task_name,
                  const std::string& pairs_path, const std::string& out_path) {
  nlohmann::json out = nlohmann::json::object();

  if (!annotations_path.empty()) {
    auto records = load_annotations(annotations_path);
    AnnotationTask task = annotation_task_from_string(task_name);
    std::map<std::string, std::string> by_item_a, by_item_b;
    for (const auto& r : records) {
      if (r.task != task) continue;
      if (r.annotator_id == annotator_a) by_item_a[r.item_id] = r.label;
      if (r.annotator_id == annotator_b) by_item_b[r.item_id] = r.label;
    }
    std::vector<std::string> a, b;
    for (const auto& [item, label] : by_item_a) {
      auto it = by_item_b.find(item);
      if (it != by_item_b.end()) {
        a.push_back(label);
        b.push_back(it->second);
      }
    }
    AgreementReport report = pairwise_agreement(a, b, task);
    out["agreement"] = report;
    std::cout << "task " << to_string(task) << ": n=" << report.n_items << " percent="
              << report.percent_agreement;
    if (report.kappa) std::cout << " kappa=" << *report.kappa;
    if (report.adjacent_agreement) std::cout << " adjacent=" << *report.adjacent_agreement;
    std::cout << "\n";
  }

  if (!pairs_path.empty()) {
    std::vector<double> x, y;
    std::istringstream in(read_file(pairs_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line);
      x.push_back(j.at("x").get<double>());
      y.push_back(j.at("y").get<double>());
    }
    CorrelationReport report = rank_correlations(x, y);
    out["correlations"] = report;
    std::cout << "correlations over n=" << report.n << ":";
    if (report.degenerate) {
      std::cout << " degenerate input (zero variance); no correlations\n";
    } else {
      std::cout << " kendall=" << *report.kendall_tau << " pearson=" << *report.pearson_r
                << " spearman=" << *report.spearman_rho << "\n";
    }
  }

  if (!out_path.empty()) {
    write_file_atomic(out_path, out.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TBFact: claim-level completeness and succinctness evaluation for clinical summaries"};
  app.require_subcommand(1);

  CliConfig cfg;

  auto* evaluate = app.add_subcommand("evaluate", "Run the full pipeline and write a run artifact");
  add_common_flags(evaluate, cfg);
  evaluate->add_flag("--filter-reference", cfg.filter_reference,
                     "Restrict scoring to dataset-verifiable reference facts");
  evaluate->add_flag("--standardize-reference", cfg.standardize_reference,
                     "Restructure reference summaries before extraction");

  std::string extract_source = "both";
  auto* extract = app.add_subcommand("extract", "Extract claims from corpus summaries");
  add_common_flags(extract, cfg);
  extract->add_option("--source", extract_source, "candidate | reference | both")
      ->check(CLI::IsMember({"candidate", "reference", "both"}));

  std::string claims_path;
  auto* classify = app.add_subcommand("classify", "Assign importance labels to extracted claims");
  add_common_flags(classify, cfg, false);
  classify->add_option("--claims", claims_path, "claims.jsonl from extract")
      ->required()
      ->check(CLI::ExistingFile);

  auto* filter = app.add_subcommand("filter", "Dataset-verifiable fact filtering over reference claims");
  add_common_flags(filter, cfg);

  auto* hallucinations =
      app.add_subcommand("hallucinations", "Check candidate claims for note support");
  add_common_flags(hallucinations, cfg);

  auto* standardize = app.add_subcommand("standardize", "Standardize reference summaries");
  add_common_flags(standardize, cfg);

  std::string scores_a, scores_b;
  auto* compare = app.add_subcommand("compare", "Per-stratum score deltas between two runs");
  compare->add_option("scores_a", scores_a, "Baseline scores.json")->required()->check(CLI::ExistingFile);
  compare->add_option("scores_b", scores_b, "Comparison scores.json")->required()->check(CLI::ExistingFile);

  std::string annotations_path, annotator_a = "a1", annotator_b = "a2", task_name = "Entailment";
  std::string pairs_path, agreement_out;
  auto* agreement = app.add_subcommand("agreement", "Annotator agreement and correlations");
  agreement->add_option("--annotations", annotations_path, "AnnotationRecord JSONL")
      ->check(CLI::ExistingFile);
  agreement->add_option("--a", annotator_a, "First annotator id (or 'system')");
  agreement->add_option("--b", annotator_b, "Second annotator id (or 'system')");
  agreement->add_option("--task", task_name, "ExtractionValidity | Importance | Entailment");
  agreement->add_option("--pairs", pairs_path, "JSONL of {item_id, x, y} for correlations")
      ->check(CLI::ExistingFile);
  agreement->add_option("--report", agreement_out, "Write the agreement report JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(evaluate)) return cmd_evaluate(cfg);
    if (app.got_subcommand(extract)) return cmd_extract(cfg, extract_source);
    if (app.got_subcommand(classify)) return cmd_classify(cfg, claims_path);
    if (app.got_subcommand(filter)) return cmd_filter(cfg, false);
    if (app.got_subcommand(hallucinations)) return cmd_filter(cfg, true);
    if (app.got_subcommand(standardize)) return cmd_standardize(cfg);
    if (app.got_subcommand(compare)) return cmd_compare(scores_a, scores_b);
    if (app.got_subcommand(agreement)) {
      if (annotations_path.empty() && pairs_path.empty()) {
        std::cerr << "agreement: provide --annotations and/or --pairs\n";
        return 2;
      }
      return cmd_agreement(annotations_path, annotator_a, annotator_b, task_name, pairs_path,
                           agreement_out);
    }
  } catch (const TbfactError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
