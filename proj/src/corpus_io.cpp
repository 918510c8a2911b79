#include "tbfact/corpus_io.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace tbfact {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoFailure("sha256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned long> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoFailure("short write: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoFailure("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

// --- json codecs ------------------------------------------------------

void to_json(nlohmann::json& j, const SourceSpan& v) {
  j = {{"begin", v.begin}, {"end", v.end}};
}

void from_json(const nlohmann::json& j, SourceSpan& v) {
  j.at("begin").get_to(v.begin);
  j.at("end").get_to(v.end);
}

void to_json(nlohmann::json& j, const ClinicalClaim& v) {
  j = {{"id", v.id},
       {"text", v.text},
       {"source", to_string(v.source)},
       {"patient_id", v.patient_id}};
  if (v.importance) j["importance"] = to_string(*v.importance);
  if (v.provenance) j["provenance"] = *v.provenance;
}

void from_json(const nlohmann::json& j, ClinicalClaim& v) {
  j.at("id").get_to(v.id);
  j.at("text").get_to(v.text);
  v.source = claim_source_from_string(j.at("source").get<std::string>());
  j.at("patient_id").get_to(v.patient_id);
  v.importance.reset();
  if (j.contains("importance")) {
    v.importance = importance_from_string(j.at("importance").get<std::string>());
  }
  v.provenance.reset();
  if (j.contains("provenance")) v.provenance = j.at("provenance").get<SourceSpan>();
}

void to_json(nlohmann::json& j, const EntailmentJudgment& v) {
  j = {{"claim_id", v.claim_id},
       {"target", v.target},
       {"label", to_string(v.label)},
       {"rationale", v.rationale},
       {"judge_id", v.judge_id}};
}

void from_json(const nlohmann::json& j, EntailmentJudgment& v) {
  j.at("claim_id").get_to(v.claim_id);
  j.at("target").get_to(v.target);
  v.label = entailment_from_string(j.at("label").get<std::string>());
  j.at("rationale").get_to(v.rationale);
  j.at("judge_id").get_to(v.judge_id);
}

void to_json(nlohmann::json& j, const ScoringConfig& v) {
  j = {{"mode", to_string(v.mode)},
       {"partial_credit", v.partial_credit},
       {"stratify_by_importance", v.stratify_by_importance}};
}

void from_json(const nlohmann::json& j, ScoringConfig& v) {
  v.mode = scoring_mode_from_string(j.at("mode").get<std::string>());
  j.at("partial_credit").get_to(v.partial_credit);
  j.at("stratify_by_importance").get_to(v.stratify_by_importance);
}

void to_json(nlohmann::json& j, const Note& v) {
  j = {{"note_id", v.note_id}, {"text", v.text}};
}

void from_json(const nlohmann::json& j, Note& v) {
  j.at("note_id").get_to(v.note_id);
  j.at("text").get_to(v.text);
}

namespace {

const std::unordered_set<std::string>& patient_case_known_fields() {
  static const std::unordered_set<std::string> kFields = {
      "patient_id", "candidate_summary", "reference_summary", "notes"};
  return kFields;
}

}  // namespace

void to_json(nlohmann::json& j, const PatientCase& v) {
  j = v.extra.is_object() ? v.extra : nlohmann::json::object();
  j["patient_id"] = v.patient_id;
  j["candidate_summary"] = v.candidate_summary;
  j["reference_summary"] = v.reference_summary;
  j["notes"] = v.notes;
}

void from_json(const nlohmann::json& j, PatientCase& v) {
  j.at("patient_id").get_to(v.patient_id);
  j.at("candidate_summary").get_to(v.candidate_summary);
  j.at("reference_summary").get_to(v.reference_summary);
  v.notes.clear();
  if (j.contains("notes")) v.notes = j.at("notes").get<std::vector<Note>>();
  v.extra = nlohmann::json::object();
  for (const auto& [key, value] : j.items()) {
    if (!patient_case_known_fields().count(key)) v.extra[key] = value;
  }
}

void to_json(nlohmann::json& j, const TbfactScore& v) {
  j = {{"stratum", to_string(v.stratum)},
       {"p_support", v.p_support},
       {"r_support", v.r_support}};
  if (v.precision) j["precision"] = *v.precision;
  if (v.recall) j["recall"] = *v.recall;
  if (v.f1) j["f1"] = *v.f1;
}

void from_json(const nlohmann::json& j, TbfactScore& v) {
  v.stratum = stratum_from_string(j.at("stratum").get<std::string>());
  j.at("p_support").get_to(v.p_support);
  j.at("r_support").get_to(v.r_support);
  v.precision.reset();
  v.recall.reset();
  v.f1.reset();
  if (j.contains("precision")) v.precision = j.at("precision").get<double>();
  if (j.contains("recall")) v.recall = j.at("recall").get<double>();
  if (j.contains("f1")) v.f1 = j.at("f1").get<double>();
}

void to_json(nlohmann::json& j, const RunScores& v) {
  j = {{"config", v.config}, {"rows", v.rows}};
}

void from_json(const nlohmann::json& j, RunScores& v) {
  j.at("config").get_to(v.config);
  v.rows = j.at("rows").get<std::vector<TbfactScore>>();
  for (auto& row : v.rows) row.config = v.config;
}

void to_json(nlohmann::json& j, const LedgerEntry& v) {
  j = {{"claim", v.claim}, {"rationale", v.rationale}};
}

void from_json(const nlohmann::json& j, LedgerEntry& v) {
  j.at("claim").get_to(v.claim);
  j.at("rationale").get_to(v.rationale);
}

void to_json(nlohmann::json& j, const ErrorLedger& v) {
  j = {{"omissions", v.omissions},
       {"partial_omissions", v.partial_omissions},
       {"unsupported", v.unsupported},
       {"partially_supported", v.partially_supported}};
}

void from_json(const nlohmann::json& j, ErrorLedger& v) {
  v.omissions = j.at("omissions").get<std::vector<LedgerEntry>>();
  v.partial_omissions = j.at("partial_omissions").get<std::vector<LedgerEntry>>();
  v.unsupported = j.at("unsupported").get<std::vector<LedgerEntry>>();
  v.partially_supported = j.at("partially_supported").get<std::vector<LedgerEntry>>();
}

void to_json(nlohmann::json& j, const ExcludedFact& v) {
  j = {{"claim", v.claim}, {"reason", v.reason}};
}

void from_json(const nlohmann::json& j, ExcludedFact& v) {
  j.at("claim").get_to(v.claim);
  j.at("reason").get_to(v.reason);
}

void to_json(nlohmann::json& j, const FilterReport& v) {
  j = {{"retained", v.retained},
       {"excluded", v.excluded},
       {"retention_rate", v.retention_rate}};
}

void from_json(const nlohmann::json& j, FilterReport& v) {
  v.retained = j.at("retained").get<std::vector<ClinicalClaim>>();
  v.excluded = j.at("excluded").get<std::vector<ExcludedFact>>();
  j.at("retention_rate").get_to(v.retention_rate);
}

void to_json(nlohmann::json& j, const AnnotationRecord& v) {
  j = {{"item_id", v.item_id},
       {"task", to_string(v.task)},
       {"annotator_id", v.annotator_id},
       {"label", v.label}};
}

void from_json(const nlohmann::json& j, AnnotationRecord& v) {
  j.at("item_id").get_to(v.item_id);
  v.task = annotation_task_from_string(j.at("task").get<std::string>());
  j.at("annotator_id").get_to(v.annotator_id);
  j.at("label").get_to(v.label);
}

void to_json(nlohmann::json& j, const AgreementReport& v) {
  j = {{"task", to_string(v.task)},
       {"percent_agreement", v.percent_agreement},
       {"n_items", v.n_items}};
  if (v.kappa) j["kappa"] = *v.kappa;
  if (v.adjacent_agreement) j["adjacent_agreement"] = *v.adjacent_agreement;
}

void from_json(const nlohmann::json& j, AgreementReport& v) {
  v.task = annotation_task_from_string(j.at("task").get<std::string>());
  j.at("percent_agreement").get_to(v.percent_agreement);
  j.at("n_items").get_to(v.n_items);
  v.kappa.reset();
  v.adjacent_agreement.reset();
  if (j.contains("kappa")) v.kappa = j.at("kappa").get<double>();
  if (j.contains("adjacent_agreement")) {
    v.adjacent_agreement = j.at("adjacent_agreement").get<double>();
  }
}

void to_json(nlohmann::json& j, const CorrelationReport& v) {
  j = {{"degenerate", v.degenerate}, {"n", v.n}};
  if (v.kendall_tau) j["kendall_tau"] = *v.kendall_tau;
  if (v.pearson_r) j["pearson_r"] = *v.pearson_r;
  if (v.spearman_rho) j["spearman_rho"] = *v.spearman_rho;
}

void from_json(const nlohmann::json& j, CorrelationReport& v) {
  j.at("degenerate").get_to(v.degenerate);
  j.at("n").get_to(v.n);
  v.kendall_tau.reset();
  v.pearson_r.reset();
  v.spearman_rho.reset();
  if (j.contains("kendall_tau")) v.kendall_tau = j.at("kendall_tau").get<double>();
  if (j.contains("pearson_r")) v.pearson_r = j.at("pearson_r").get<double>();
  if (j.contains("spearman_rho")) v.spearman_rho = j.at("spearman_rho").get<double>();
}

void to_json(nlohmann::json& j, const RunManifest& v) {
  j = {{"run_id", v.run_id},
       {"timestamp", v.timestamp},
       {"toolkit_version", v.toolkit_version},
       {"scoring", v.scoring},
       {"rubric", {{"id", v.rubric_id}, {"version", v.rubric_version}}},
       {"prompt_template_ids", v.prompt_template_ids},
       {"backend_id", v.backend_id},
       {"model_id", v.model_id},
       {"concurrency", v.concurrency},
       {"temperature", v.temperature},
       {"filter_reference", v.filter_reference},
       {"standardize_reference", v.standardize_reference},
       {"corpus_path", v.corpus_path},
       {"input_digest", v.input_digest},
       {"n_patients", v.n_patients},
       {"schema_version", kArtifactSchemaVersion}};
}

void from_json(const nlohmann::json& j, RunManifest& v) {
  j.at("run_id").get_to(v.run_id);
  j.at("timestamp").get_to(v.timestamp);
  j.at("toolkit_version").get_to(v.toolkit_version);
  j.at("scoring").get_to(v.scoring);
  j.at("rubric").at("id").get_to(v.rubric_id);
  j.at("rubric").at("version").get_to(v.rubric_version);
  v.prompt_template_ids = j.at("prompt_template_ids").get<std::vector<std::string>>();
  j.at("backend_id").get_to(v.backend_id);
  j.at("model_id").get_to(v.model_id);
  j.at("concurrency").get_to(v.concurrency);
  j.at("temperature").get_to(v.temperature);
  j.at("filter_reference").get_to(v.filter_reference);
  j.at("standardize_reference").get_to(v.standardize_reference);
  j.at("corpus_path").get_to(v.corpus_path);
  j.at("input_digest").get_to(v.input_digest);
  j.at("n_patients").get_to(v.n_patients);
}

// --- corpus -----------------------------------------------------------

namespace {

void check_case(const PatientCase& c, int line) {
  if (c.patient_id.empty()) throw SchemaViolation(line, "patient_id", "must be non-empty");
  if (c.candidate_summary.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw SchemaViolation(line, "candidate_summary", "must be non-empty");
  }
  if (c.reference_summary.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw SchemaViolation(line, "reference_summary", "must be non-empty");
  }
  std::unordered_set<std::string> note_ids;
  for (const auto& n : c.notes) {
    if (n.note_id.empty()) throw SchemaViolation(line, "notes.note_id", "must be non-empty");
    if (!note_ids.insert(n.note_id).second) {
      throw SchemaViolation(line, "notes.note_id", "duplicate note id '" + n.note_id + "'");
    }
  }
}

}  // namespace

std::vector<PatientCase> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read corpus: " + path.string());

  std::vector<PatientCase> cases;
  std::unordered_set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaViolation(line_no, "<line>", std::string("invalid JSON: ") + e.what());
    }
    PatientCase c;
    try {
      c = j.get<PatientCase>();
    } catch (const nlohmann::json::exception& e) {
      throw SchemaViolation(line_no, "<object>", std::string("missing or malformed field: ") + e.what());
    }
    check_case(c, line_no);
    if (!ids.insert(c.patient_id).second) {
      throw DuplicatePatientId("line " + std::to_string(line_no) + ": duplicate patient_id '" +
                               c.patient_id + "'");
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

void write_corpus(const std::filesystem::path& path, const std::vector<PatientCase>& cases) {
  std::string out;
  for (const auto& c : cases) {
    out += nlohmann::json(c).dump();
    out += "\n";
  }
  write_file_atomic(path, out);
}

// --- run artifact -----------------------------------------------------

RunArtifactPaths write_run_artifact(
    const RunManifest& manifest, const std::vector<ClinicalClaim>& claims,
    const std::vector<EntailmentJudgment>& judgments, const ErrorLedger& ledger,
    const RunScores& corpus_scores,
    const std::vector<std::pair<std::string, RunScores>>& per_patient_scores,
    const std::vector<std::pair<std::string, FilterReport>>& filter_reports,
    const std::set<std::string>& filtered_out_claim_ids, const std::string& report_markdown,
    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create " + out_dir.string() + ": " + ec.message());

  RunArtifactPaths paths;
  paths.manifest = out_dir / "manifest.json";
  paths.claims = out_dir / "claims.jsonl";
  paths.judgments = out_dir / "judgments.jsonl";
  paths.ledger = out_dir / "ledger.json";
  paths.scores = out_dir / "scores.json";
  paths.report = out_dir / "report.md";

  write_file_atomic(paths.manifest, nlohmann::json(manifest).dump(2) + "\n");

  std::string claim_lines;
  for (const auto& c : claims) {
    nlohmann::json j = c;
    j["run_id"] = manifest.run_id;
    if (filtered_out_claim_ids.count(c.id)) j["filtered_out"] = true;
    claim_lines += j.dump();
    claim_lines += "\n";
  }
  write_file_atomic(paths.claims, claim_lines);

  std::string judgment_lines;
  for (const auto& j : judgments) {
    nlohmann::json jj = j;
    jj["run_id"] = manifest.run_id;
    judgment_lines += jj.dump();
    judgment_lines += "\n";
  }
  write_file_atomic(paths.judgments, judgment_lines);

  nlohmann::json ledger_json = {{"run_id", manifest.run_id}, {"error_ledger", ledger}};
  if (!filter_reports.empty()) {
    nlohmann::json fr = nlohmann::json::array();
    for (const auto& [patient_id, report] : filter_reports) {
      nlohmann::json item = report;
      item["patient_id"] = patient_id;
      fr.push_back(std::move(item));
    }
    ledger_json["filter_reports"] = std::move(fr);
  }
  write_file_atomic(paths.ledger, ledger_json.dump(2) + "\n");

  nlohmann::json scores_json = {
      {"run_id", manifest.run_id},
      {"config", corpus_scores.config},
      {"micro", corpus_scores.rows},
  };
  nlohmann::json per_patient = nlohmann::json::array();
  for (const auto& [patient_id, scores] : per_patient_scores) {
    per_patient.push_back({{"patient_id", patient_id}, {"rows", scores.rows}});
  }
  scores_json["per_patient"] = std::move(per_patient);
  write_file_atomic(paths.scores, scores_json.dump(2) + "\n");

  write_file_atomic(paths.report, report_markdown);
  return paths;
}

void validate_artifact(const std::filesystem::path& dir) {
  const auto manifest_json = nlohmann::json::parse(read_file(dir / "manifest.json"));
  RunManifest manifest = manifest_json.get<RunManifest>();
  if (manifest.run_id.empty()) throw SchemaViolation(0, "run_id", "empty in manifest");

  std::unordered_set<std::string> claim_ids;
  {
    std::istringstream in(read_file(dir / "claims.jsonl"));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line);
      ClinicalClaim c = j.get<ClinicalClaim>();
      if (!claim_ids.insert(c.id).second) {
        throw SchemaViolation(line_no, "id", "duplicate claim id '" + c.id + "'");
      }
    }
  }
  {
    std::istringstream in(read_file(dir / "judgments.jsonl"));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      EntailmentJudgment j = nlohmann::json::parse(line).get<EntailmentJudgment>();
      if (!claim_ids.count(j.claim_id)) {
        throw SchemaViolation(line_no, "claim_id",
                              "judgment references unknown claim '" + j.claim_id + "'");
      }
    }
  }
  auto ledger_json = nlohmann::json::parse(read_file(dir / "ledger.json"));
  ledger_json.at("error_ledger").get<ErrorLedger>();

  auto scores_json = nlohmann::json::parse(read_file(dir / "scores.json"));
  RunScores scores;
  scores.config = scores_json.at("config").get<ScoringConfig>();
  scores.rows = scores_json.at("micro").get<std::vector<TbfactScore>>();

  if (read_file(dir / "report.md").empty()) {
    throw SchemaViolation(0, "report.md", "report is empty");
  }
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read annotations: " + path.string());
  std::vector<AnnotationRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(nlohmann::json::parse(line).get<AnnotationRecord>());
    } catch (const nlohmann::json::exception& e) {
      throw SchemaViolation(line_no, "<line>", std::string("invalid annotation: ") + e.what());
    }
  }
  return records;
}

}  // namespace tbfact
