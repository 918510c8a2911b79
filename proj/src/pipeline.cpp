#include "tbfact/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "tbfact/prompts.hpp"
#include "tbfact/text.hpp"

namespace tbfact {

namespace {

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string canonical_cases_digest(const std::vector<PatientCase>& cases) {
  std::string blob;
  for (const auto& c : cases) {
    blob += nlohmann::json(c).dump();
    blob += "\n";
  }
  return sha256_hex(blob);
}

RunManifest build_manifest(const std::vector<PatientCase>& cases, JudgeBackend& backend,
                           const EvaluateOptions& options, const ImportanceRubric& rubric) {
  RunManifest m;
  m.scoring = options.scoring;
  m.rubric_id = rubric.rubric_id;
  m.rubric_version = rubric.version;
  m.prompt_template_ids = {prompts::kExtractTemplateId, rubric.rubric_id,
                           prompts::kEntailmentTemplateId};
  if (options.standardize_reference) {
    m.prompt_template_ids.push_back(prompts::kStandardizeTemplateId);
  }
  m.backend_id = backend.id();
  m.model_id = options.model_id;
  m.concurrency = options.concurrency;
  m.temperature = options.temperature;
  m.filter_reference = options.filter_reference;
  m.standardize_reference = options.standardize_reference;
  m.corpus_path = options.corpus_path;
  m.input_digest =
      options.input_digest.empty() ? canonical_cases_digest(cases) : options.input_digest;
  m.n_patients = cases.size();
  m.timestamp = utc_timestamp();

  nlohmann::json config_snapshot = {
      {"scoring", m.scoring},
      {"rubric", {{"id", m.rubric_id}, {"version", m.rubric_version}}},
      {"prompts", m.prompt_template_ids},
      {"backend", m.backend_id},
      {"model", m.model_id},
      {"filter_reference", m.filter_reference},
      {"standardize_reference", m.standardize_reference},
      {"toolkit", m.toolkit_version},
  };
  m.run_id = sha256_hex(m.input_digest + "|" + config_snapshot.dump()).substr(0, 12);
  return m;
}

}  // namespace

RunResult evaluate_corpus(const std::vector<PatientCase>& cases, JudgeBackend& backend,
                          const EvaluateOptions& options) {
  ImportanceRubric rubric =
      options.rubric.text.empty() ? ImportanceRubric::default_rubric() : options.rubric;
  rubric.validate();

  RunResult result;
  result.manifest = build_manifest(cases, backend, options, rubric);
  result.patients.resize(cases.size());

  JudgeOptions judge_options;
  judge_options.model_id = options.model_id;
  judge_options.temperature = options.temperature;
  judge_options.concurrency = 1;  // patient-level parallelism owns the budget

  parallel_for(cases.size(), options.concurrency, [&](std::size_t i) {
    const PatientCase& pc = cases[i];
    PatientEvaluation ev;
    ev.patient_id = pc.patient_id;

    std::string reference_text = pc.reference_summary;
    if (options.standardize_reference) {
      StandardizedSummary std_summary = standardize_summary(pc.reference_summary, backend, judge_options);
      reference_text = std_summary.text;
      for (auto& w : std_summary.warnings) ev.warnings.push_back("standardize: " + w);
    }

    ExtractOptions extract_options;
    extract_options.patient_id = pc.patient_id;
    extract_options.model_id = options.model_id;
    extract_options.temperature = options.temperature;
    extract_options.chunk_token_budget = options.chunk_token_budget;

    ev.candidate_extraction =
        extract_claims(pc.candidate_summary, ClaimSource::Candidate, backend, extract_options);
    ev.reference_extraction =
        extract_claims(reference_text, ClaimSource::Reference, backend, extract_options);
    for (auto& w : ev.candidate_extraction.warnings) ev.warnings.push_back("candidate: " + w);
    for (auto& w : ev.reference_extraction.warnings) ev.warnings.push_back("reference: " + w);

    if (!ev.candidate_extraction.claims.empty()) {
      ev.candidate_extraction.claims =
          classify_importance(std::move(ev.candidate_extraction.claims), rubric, backend, judge_options);
    }
    if (!ev.reference_extraction.claims.empty()) {
      ev.reference_extraction.claims =
          classify_importance(std::move(ev.reference_extraction.claims), rubric, backend, judge_options);
    }

    std::vector<ClinicalClaim> reference_claims = ev.reference_extraction.claims;
    if (options.filter_reference && !reference_claims.empty()) {
      FilterOptions filter_options;
      filter_options.model_id = options.model_id;
      filter_options.temperature = options.temperature;
      ev.filter_report = filter_verifiable(reference_claims, pc.notes, backend, filter_options);
      reference_claims = ev.filter_report->retained;
    }

    ev.judgments = judge_bidirectional(ev.candidate_extraction.claims, reference_claims,
                                       pc.candidate_summary, reference_text, backend,
                                       judge_options);
    ev.ledger = attribute_errors(ev.judgments);
    ev.scores.config = options.scoring;
    ev.scores.rows = aggregate(ev.judgments, options.scoring);
    result.patients[i] = std::move(ev);
  });

  BidirectionalJudgments pooled;
  for (const auto& ev : result.patients) {
    pooled.candidate_side.insert(pooled.candidate_side.end(), ev.judgments.candidate_side.begin(),
                                 ev.judgments.candidate_side.end());
    pooled.reference_side.insert(pooled.reference_side.end(), ev.judgments.reference_side.begin(),
                                 ev.judgments.reference_side.end());
  }
  result.corpus_scores.config = options.scoring;
  result.corpus_scores.rows = aggregate(pooled, options.scoring);
  result.corpus_ledger = attribute_errors(pooled);
  return result;
}

namespace {

std::string fmt3(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

void append_ledger_section(std::string& md, const char* title,
                           const std::vector<LedgerEntry>& entries) {
  md += "### " + std::string(title) + " (" + std::to_string(entries.size()) + ")\n\n";
  if (entries.empty()) {
    md += "none\n\n";
    return;
  }
  std::size_t shown = std::min<std::size_t>(entries.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& e = entries[i];
    md += "- [" + std::string(e.claim.importance ? to_string(*e.claim.importance) : "?") + "] " +
          e.claim.patient_id + ": " + e.claim.text + "\n";
  }
  if (shown < entries.size()) {
    md += "- ... " + std::to_string(entries.size() - shown) + " more in ledger.json\n";
  }
  md += "\n";
}

}  // namespace

std::string render_report_markdown(const RunResult& result) {
  const RunManifest& m = result.manifest;
  std::string md = "# TBFact run " + m.run_id + "\n\n";
  md += "- backend: " + m.backend_id + "\n";
  md += "- scoring mode: " + std::string(to_string(m.scoring.mode)) +
        " (partial credit " + fmt3(m.scoring.partial_credit) + ")\n";
  md += "- patients: " + std::to_string(m.n_patients) + "\n";
  md += "- reference filtering: " + std::string(m.filter_reference ? "on" : "off") + "\n";
  md += "- reference standardization: " +
        std::string(m.standardize_reference ? "on" : "off") + "\n\n";

  md += "## Corpus scores (micro)\n\n";
  md += render_scores_markdown(result.corpus_scores.rows);
  md += "\n## Per-patient scores (Overall)\n\n";
  md += "| Patient | Precision | Recall | F1 | p_support | r_support |\n";
  md += "|---|---|---|---|---|---|\n";
  for (const auto& ev : result.patients) {
    const TbfactScore* row = ev.scores.find(Stratum::Overall);
    if (!row) continue;
    md += "| " + ev.patient_id + " | " + fmt3(row->precision) + " | " + fmt3(row->recall) +
          " | " + fmt3(row->f1) + " | " + std::to_string(row->p_support) + " | " +
          std::to_string(row->r_support) + " |\n";
  }

  md += "\n## Error ledger\n\n";
  append_ledger_section(md, "Omissions", result.corpus_ledger.omissions);
  append_ledger_section(md, "Partial omissions", result.corpus_ledger.partial_omissions);
  append_ledger_section(md, "Unsupported claims", result.corpus_ledger.unsupported);
  append_ledger_section(md, "Partially supported claims", result.corpus_ledger.partially_supported);

  bool any_filter = false;
  for (const auto& ev : result.patients) any_filter |= ev.filter_report.has_value();
  if (any_filter) {
    md += "## Dataset-verifiable fact filtering\n\n";
    md += "| Patient | Facts | Retained | Retention |\n|---|---|---|---|\n";
    for (const auto& ev : result.patients) {
      if (!ev.filter_report) continue;
      std::size_t total = ev.filter_report->retained.size() + ev.filter_report->excluded.size();
      md += "| " + ev.patient_id + " | " + std::to_string(total) + " | " +
            std::to_string(ev.filter_report->retained.size()) + " | " +
            fmt3(ev.filter_report->retention_rate) + " |\n";
    }
    md += "\n";
  }

  std::vector<std::string> warnings;
  for (const auto& ev : result.patients) {
    for (const auto& w : ev.warnings) warnings.push_back(ev.patient_id + ": " + w);
  }
  if (!warnings.empty()) {
    md += "## Warnings\n\n";
    for (const auto& w : warnings) md += "- " + w + "\n";
    md += "\n";
  }
  return md;
}

RunArtifactPaths write_run_result(const RunResult& result, const std::filesystem::path& out_dir) {
  std::vector<ClinicalClaim> claims;
  std::vector<EntailmentJudgment> judgments;
  std::set<std::string> filtered_out;
  std::vector<std::pair<std::string, RunScores>> per_patient_scores;
  std::vector<std::pair<std::string, FilterReport>> filter_reports;

  for (const auto& ev : result.patients) {
    for (const auto& c : ev.candidate_extraction.claims) claims.push_back(c);
    for (const auto& c : ev.reference_extraction.claims) claims.push_back(c);
    for (const auto& jc : ev.judgments.candidate_side) judgments.push_back(jc.judgment);
    for (const auto& jc : ev.judgments.reference_side) judgments.push_back(jc.judgment);
    per_patient_scores.emplace_back(ev.patient_id, ev.scores);
    if (ev.filter_report) {
      filter_reports.emplace_back(ev.patient_id, *ev.filter_report);
      for (const auto& ex : ev.filter_report->excluded) filtered_out.insert(ex.claim.id);
    }
  }

  return write_run_artifact(result.manifest, claims, judgments, result.corpus_ledger,
                            result.corpus_scores, per_patient_scores, filter_reports,
                            filtered_out, render_report_markdown(result), out_dir);
}

CorpusFilterResult filter_corpus(const std::vector<PatientCase>& cases, JudgeBackend& backend,
                                 const EvaluateOptions& options, bool over_candidate) {
  ImportanceRubric rubric =
      options.rubric.text.empty() ? ImportanceRubric::default_rubric() : options.rubric;

  CorpusFilterResult result;
  result.per_patient.resize(cases.size());

  JudgeOptions judge_options;
  judge_options.model_id = options.model_id;
  judge_options.temperature = options.temperature;

  parallel_for(cases.size(), options.concurrency, [&](std::size_t i) {
    const PatientCase& pc = cases[i];
    ExtractOptions extract_options;
    extract_options.patient_id = pc.patient_id;
    extract_options.model_id = options.model_id;
    extract_options.temperature = options.temperature;
    extract_options.chunk_token_budget = options.chunk_token_budget;

    auto extraction = extract_claims(
        over_candidate ? pc.candidate_summary : pc.reference_summary,
        over_candidate ? ClaimSource::Candidate : ClaimSource::Reference, backend,
        extract_options);
    auto claims = extraction.claims.empty()
                      ? extraction.claims
                      : classify_importance(std::move(extraction.claims), rubric, backend,
                                            judge_options);

    FilterReport report;
    if (!claims.empty()) {
      FilterOptions filter_options;
      filter_options.model_id = options.model_id;
      filter_options.temperature = options.temperature;
      report = over_candidate ? detect_hallucinations(claims, pc.notes, backend, filter_options)
                              : filter_verifiable(claims, pc.notes, backend, filter_options);
    }
    result.per_patient[i] = {pc.patient_id, std::move(report)};
  });

  for (const auto& [patient_id, report] : result.per_patient) {
    result.total_facts += report.retained.size() + report.excluded.size();
    result.total_retained += report.retained.size();
  }
  result.aggregate_retention =
      result.total_facts == 0
          ? 0.0
          : static_cast<double>(result.total_retained) / static_cast<double>(result.total_facts);
  return result;
}

std::string render_filter_markdown(const CorpusFilterResult& result, bool over_candidate) {
  char buf[64];
  std::string md = over_candidate ? "# Hallucination detection\n\n" : "# Dataset-verifiable fact filtering\n\n";
  std::snprintf(buf, sizeof(buf), "%.3f", result.aggregate_retention);
  md += "- facts: " + std::to_string(result.total_facts) + "\n";
  md += "- supported by notes: " + std::to_string(result.total_retained) + "\n";
  md += "- retention: " + std::string(buf) + "\n";
  if (over_candidate) {
    std::snprintf(buf, sizeof(buf), "%.3f", 1.0 - result.aggregate_retention);
    md += "- unsupported share (possible hallucinations or cross-note inferences): " +
          std::string(buf) + "\n";
  }
  md += "\n| Patient | Facts | Supported | Retention |\n|---|---|---|---|\n";
  for (const auto& [patient_id, report] : result.per_patient) {
    std::size_t total = report.retained.size() + report.excluded.size();
    std::snprintf(buf, sizeof(buf), "%.3f", report.retention_rate);
    md += "| " + patient_id + " | " + std::to_string(total) + " | " +
          std::to_string(report.retained.size()) + " | " + std::string(buf) + " |\n";
  }
  md += "\n";
  bool any_excluded = false;
  for (const auto& [patient_id, report] : result.per_patient) any_excluded |= !report.excluded.empty();
  if (any_excluded) {
    md += over_candidate ? "## Unsupported claims\n\n" : "## Excluded facts\n\n";
    for (const auto& [patient_id, report] : result.per_patient) {
      for (const auto& ex : report.excluded) {
        md += "- " + patient_id + ": \"" + ex.claim.text + "\" - " + ex.reason + "\n";
      }
    }
    md += "\n";
  }
  return md;
}

}  // namespace tbfact
