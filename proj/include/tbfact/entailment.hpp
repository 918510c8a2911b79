#pragma once

#include <string>
#include <vector>

#include "tbfact/judge.hpp"
#include "tbfact/types.hpp"

namespace tbfact {

struct JudgedClaim {
  ClinicalClaim claim;
  EntailmentJudgment judgment;
};

// Stage 3 output: each claim judged once against the counterpart text.
struct BidirectionalJudgments {
  std::vector<JudgedClaim> candidate_side;  // candidate claims vs reference text
  std::vector<JudgedClaim> reference_side;  // reference claims vs candidate text
};

struct LedgerEntry {
  ClinicalClaim claim;
  std::string rationale;
};

// Stage 4 output: exact partition of the non-Full judgments.
struct ErrorLedger {
  std::vector<LedgerEntry> omissions;            // reference claims judged None
  std::vector<LedgerEntry> partial_omissions;    // reference claims judged Partial
  std::vector<LedgerEntry> unsupported;          // candidate claims judged None
  std::vector<LedgerEntry> partially_supported;  // candidate claims judged Partial
};

// Judges every candidate claim against the reference text and every
// reference claim against the candidate text. Claims must carry importance
// labels. The two sides run concurrently when options.concurrency > 1.
BidirectionalJudgments judge_bidirectional(const std::vector<ClinicalClaim>& candidate_claims,
                                           const std::vector<ClinicalClaim>& reference_claims,
                                           const std::string& candidate_text,
                                           const std::string& reference_text,
                                           JudgeBackend& backend,
                                           const JudgeOptions& options = {});

// Deterministic partition by (side, label); entries sorted by importance
// descending, then claim id.
ErrorLedger attribute_errors(const BidirectionalJudgments& judgments);

}  // namespace tbfact
