#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tbfact/agreement.hpp"
#include "tbfact/entailment.hpp"
#include "tbfact/filtering.hpp"
#include "tbfact/metrics.hpp"
#include "tbfact/types.hpp"

namespace tbfact {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kArtifactSchemaVersion = 1;

// Snapshot of everything that determined a run. Identical manifests plus a
// deterministic backend imply identical artifacts; the timestamp lives only
// here so the other artifact files stay byte-stable.
struct RunManifest {
  std::string run_id;
  std::string timestamp;
  std::string toolkit_version = kToolkitVersion;
  ScoringConfig scoring;
  std::string rubric_id;
  int rubric_version = 1;
  std::vector<std::string> prompt_template_ids;
  std::string backend_id;
  std::string model_id;
  int concurrency = 1;
  double temperature = 0.0;
  bool filter_reference = false;
  bool standardize_reference = false;
  std::string corpus_path;
  std::string input_digest;
  std::size_t n_patients = 0;
};

// --- small io helpers -------------------------------------------------

std::string sha256_hex(std::string_view data);
std::string read_file(const std::filesystem::path& path);
// Write via a temp file + rename so concurrent writers of the same path
// never interleave.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// --- corpus -----------------------------------------------------------

// JSONL, one PatientCase per line. Fails with line-numbered SchemaViolation
// or DuplicatePatientId diagnostics; unknown fields are preserved.
std::vector<PatientCase> load_corpus(const std::filesystem::path& path);
void write_corpus(const std::filesystem::path& path, const std::vector<PatientCase>& cases);

// --- json codecs ------------------------------------------------------

void to_json(nlohmann::json& j, const SourceSpan& v);
void from_json(const nlohmann::json& j, SourceSpan& v);
void to_json(nlohmann::json& j, const ClinicalClaim& v);
void from_json(const nlohmann::json& j, ClinicalClaim& v);
void to_json(nlohmann::json& j, const EntailmentJudgment& v);
void from_json(const nlohmann::json& j, EntailmentJudgment& v);
void to_json(nlohmann::json& j, const ScoringConfig& v);
void from_json(const nlohmann::json& j, ScoringConfig& v);
void to_json(nlohmann::json& j, const Note& v);
void from_json(const nlohmann::json& j, Note& v);
void to_json(nlohmann::json& j, const PatientCase& v);
void from_json(const nlohmann::json& j, PatientCase& v);
void to_json(nlohmann::json& j, const TbfactScore& v);
void from_json(const nlohmann::json& j, TbfactScore& v);
void to_json(nlohmann::json& j, const RunScores& v);
void from_json(const nlohmann::json& j, RunScores& v);
void to_json(nlohmann::json& j, const LedgerEntry& v);
void from_json(const nlohmann::json& j, LedgerEntry& v);
void to_json(nlohmann::json& j, const ErrorLedger& v);
void from_json(const nlohmann::json& j, ErrorLedger& v);
void to_json(nlohmann::json& j, const ExcludedFact& v);
void from_json(const nlohmann::json& j, ExcludedFact& v);
void to_json(nlohmann::json& j, const FilterReport& v);
void from_json(const nlohmann::json& j, FilterReport& v);
void to_json(nlohmann::json& j, const AnnotationRecord& v);
void from_json(const nlohmann::json& j, AnnotationRecord& v);
void to_json(nlohmann::json& j, const AgreementReport& v);
void from_json(const nlohmann::json& j, AgreementReport& v);
void to_json(nlohmann::json& j, const CorrelationReport& v);
void from_json(const nlohmann::json& j, CorrelationReport& v);
void to_json(nlohmann::json& j, const RunManifest& v);
void from_json(const nlohmann::json& j, RunManifest& v);

// --- run artifact -----------------------------------------------------

struct RunArtifactPaths {
  std::filesystem::path manifest;
  std::filesystem::path claims;
  std::filesystem::path judgments;
  std::filesystem::path ledger;
  std::filesystem::path scores;
  std::filesystem::path report;
};

// Fixed layout: manifest.json, claims.jsonl, judgments.jsonl, ledger.json,
// scores.json, report.md. Re-running with identical inputs and a
// deterministic backend reproduces every file byte for byte except the
// manifest timestamp.
RunArtifactPaths write_run_artifact(
    const RunManifest& manifest, const std::vector<ClinicalClaim>& claims,
    const std::vector<EntailmentJudgment>& judgments, const ErrorLedger& ledger,
    const RunScores& corpus_scores,
    const std::vector<std::pair<std::string, RunScores>>& per_patient_scores,
    const std::vector<std::pair<std::string, FilterReport>>& filter_reports,
    const std::set<std::string>& filtered_out_claim_ids, const std::string& report_markdown,
    const std::filesystem::path& out_dir);

// Checks layout, parseability and referential integrity (every judgment's
// claim_id resolves in claims.jsonl). Throws on violations.
void validate_artifact(const std::filesystem::path& dir);

// JSONL of AnnotationRecord.
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);

}  // namespace tbfact
