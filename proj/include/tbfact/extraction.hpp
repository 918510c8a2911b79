#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tbfact/judge.hpp"
#include "tbfact/types.hpp"

namespace tbfact {

struct RejectedClaim {
  std::string text;
  std::string reason;
};

struct ExtractionResult {
  std::vector<ClinicalClaim> claims;
  std::vector<RejectedClaim> rejected;
  std::vector<std::string> warnings;
};

struct ExtractOptions {
  std::string patient_id;
  std::string model_id;
  double temperature = 0.0;
  int concurrency = 1;
  // Summaries above this budget are split on section boundaries, with the
  // enclosing heading repeated per chunk.
  std::size_t chunk_token_budget = 2000;
};

// Stage 1: decompose a summary into atomic clinical factual claims.
// Accepted claims are deduplicated by normalized text and pass the
// declarative-form checks (no question marks, no imperative or anaphoric
// openers, at most two coordinating conjunctions).
ExtractionResult extract_claims(const std::string& summary, ClaimSource source,
                                JudgeBackend& backend, const ExtractOptions& options = {});

// Deterministic offline extractor: extract_claims over the lexical oracle.
ExtractionResult mock_extract(const std::string& summary,
                              ClaimSource source = ClaimSource::Reference,
                              const std::string& patient_id = "");

struct StandardizedSummary {
  std::string text;
  std::vector<std::string> warnings;
};

// Restructures a raw summary into a narrative paragraph followed by a
// date-sorted timeline. Every dated event in the input must appear in the
// timeline or the call fails with ParseFailure.
StandardizedSummary standardize_summary(const std::string& raw_summary,
                                        JudgeBackend& backend,
                                        const JudgeOptions& options = {});

namespace detail {
// Deterministic restructure used by the oracle backend's StandardizeSummary
// task: dated claim candidates become timeline events, the rest narrative.
nlohmann::json mock_standardize_json(const std::string& text);
}  // namespace detail

}  // namespace tbfact
