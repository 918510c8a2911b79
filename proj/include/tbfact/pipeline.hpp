#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tbfact/corpus_io.hpp"
#include "tbfact/entailment.hpp"
#include "tbfact/extraction.hpp"
#include "tbfact/filtering.hpp"
#include "tbfact/importance.hpp"
#include "tbfact/metrics.hpp"

namespace tbfact {

struct EvaluateOptions {
  ScoringConfig scoring;
  bool filter_reference = false;
  bool standardize_reference = false;
  int concurrency = 4;
  std::string model_id;
  double temperature = 0.0;
  ImportanceRubric rubric;  // default rubric when text is empty
  std::size_t chunk_token_budget = 2000;
  // Manifest bookkeeping; the digest is computed from the cases when empty.
  std::string corpus_path;
  std::string input_digest;
};

struct PatientEvaluation {
  std::string patient_id;
  ExtractionResult candidate_extraction;
  ExtractionResult reference_extraction;
  std::optional<FilterReport> filter_report;
  std::vector<std::string> warnings;
  BidirectionalJudgments judgments;
  ErrorLedger ledger;
  RunScores scores;
};

struct RunResult {
  RunManifest manifest;
  std::vector<PatientEvaluation> patients;
  RunScores corpus_scores;   // micro: claims pooled across patients
  ErrorLedger corpus_ledger;
};

// The full pipeline: standardize? -> extract -> classify -> filter? ->
// judge -> aggregate -> attribute. Patients run concurrently up to
// options.concurrency.
RunResult evaluate_corpus(const std::vector<PatientCase>& cases, JudgeBackend& backend,
                          const EvaluateOptions& options);

std::string render_report_markdown(const RunResult& result);

// Flattens a RunResult into the six-file artifact layout.
RunArtifactPaths write_run_result(const RunResult& result,
                                  const std::filesystem::path& out_dir);

// Per-patient Algorithm-1 filtering over reference claims (or candidate
// claims when over_candidate is true, the hallucination-detection variant).
struct CorpusFilterResult {
  std::vector<std::pair<std::string, FilterReport>> per_patient;
  double aggregate_retention = 0.0;
  std::size_t total_facts = 0;
  std::size_t total_retained = 0;
};

CorpusFilterResult filter_corpus(const std::vector<PatientCase>& cases, JudgeBackend& backend,
                                 const EvaluateOptions& options, bool over_candidate);

std::string render_filter_markdown(const CorpusFilterResult& result, bool over_candidate);

}  // namespace tbfact
