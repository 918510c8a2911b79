#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbfact/entailment.hpp"
#include "tbfact/types.hpp"

namespace tbfact {

enum class Stratum { Overall, High, Medium, Low };

const char* to_string(Stratum s);
Stratum stratum_from_string(std::string_view s);
Stratum stratum_of(ImportanceLevel l);

// Scores for one stratum. precision is absent when p_support is 0, recall
// when r_support is 0, f1 unless both are present; strata with no claims on
// either side are omitted from aggregate() output entirely.
struct TbfactScore {
  Stratum stratum = Stratum::Overall;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::int64_t p_support = 0;
  std::int64_t r_support = 0;
  ScoringConfig config;
};

// Harmonic mean; 0 when precision + recall == 0.
double f1_of(double precision, double recall);

// precision = sum of candidate-side credits / p_support (succinctness);
// recall = sum of reference-side credits / r_support (completeness).
// Returns Overall first, then High/Medium/Low strata that have any claims.
std::vector<TbfactScore> aggregate(const BidirectionalJudgments& judgments,
                                   const ScoringConfig& config);

struct RunScores {
  ScoringConfig config;
  std::vector<TbfactScore> rows;

  const TbfactScore* find(Stratum s) const;
};

struct ScoreDelta {
  Stratum stratum = Stratum::Overall;
  std::optional<double> d_recall;
  std::optional<double> d_precision;
  std::optional<double> d_f1;
};

struct CompareReport {
  std::vector<ScoreDelta> deltas;  // b - a
  std::string markdown;
};

// Per-stratum deltas between two runs; recall first since completeness is
// the primary metric. Throws ConfigMismatch when configs or strata differ.
CompareReport compare_runs(const RunScores& a, const RunScores& b);

// | Importance | Precision | Recall | F1 | p_support | r_support | table.
std::string render_scores_markdown(const std::vector<TbfactScore>& rows);

}  // namespace tbfact
