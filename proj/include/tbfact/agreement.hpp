#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tbfact/types.hpp"

namespace tbfact {

enum class AnnotationTask { ExtractionValidity, Importance, Entailment };

const char* to_string(AnnotationTask t);
AnnotationTask annotation_task_from_string(std::string_view s);

// Closed label set per task:
//   ExtractionValidity: Valid | Invalid
//   Importance:         High | Medium | Low
//   Entailment:         Full | Partial | None
const std::vector<std::string>& task_labels(AnnotationTask t);

struct AnnotationRecord {
  std::string item_id;
  AnnotationTask task = AnnotationTask::Entailment;
  std::string annotator_id;  // or "system"
  std::string label;
};

struct AgreementReport {
  AnnotationTask task = AnnotationTask::Entailment;
  double percent_agreement = 0.0;
  std::optional<double> kappa;                // absent when expected agreement is 1
  std::optional<double> adjacent_agreement;   // Importance only: within one level
  std::size_t n_items = 0;
};

// Raw percent agreement plus Cohen's kappa over two aligned label vectors.
// Throws LengthMismatch on unequal or empty inputs, UnknownLabel on labels
// outside the task's set.
AgreementReport pairwise_agreement(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b, AnnotationTask task);

struct CorrelationReport {
  std::optional<double> kendall_tau;   // tau-b, tie-corrected
  std::optional<double> pearson_r;
  std::optional<double> spearman_rho;  // Pearson over average ranks
  bool degenerate = false;             // zero variance in either input
  std::size_t n = 0;
};

// All three rank/linear correlations between per-patient metric values and
// human scores. Inputs must have equal length >= 2.
CorrelationReport rank_correlations(std::span<const double> x, std::span<const double> y);

}  // namespace tbfact
