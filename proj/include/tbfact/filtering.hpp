#pragma once

#include <string>
#include <vector>

#include "tbfact/judge.hpp"
#include "tbfact/types.hpp"

namespace tbfact {

// Per-fact support flags: true iff some note entails the fact with label
// Full or Partial. Monotone under adding notes.
struct SupportMask {
  std::vector<bool> supported;
};

struct ExcludedFact {
  ClinicalClaim claim;
  std::string reason;
};

struct FilterReport {
  std::vector<ClinicalClaim> retained;
  std::vector<ExcludedFact> excluded;
  double retention_rate = 0.0;

  double unsupported_share() const { return 1.0 - retention_rate; }
};

struct FilterOptions : JudgeOptions {
  // Skip facts whose mask bit is already true in later note batches. The OR
  // semantics make this output-equivalent to re-judging every fact.
  bool early_exit = true;
};

// Judges every fact against every note, batched, and ORs the verdicts.
SupportMask support_mask(const std::vector<ClinicalClaim>& facts,
                         const std::vector<Note>& notes, JudgeBackend& backend,
                         const FilterOptions& options = {});

// Dataset-verifiable fact filtering: keeps facts groundable in the notes,
// excludes the rest with a nearest-miss note in the reason. With zero notes
// everything is excluded.
FilterReport filter_verifiable(const std::vector<ClinicalClaim>& facts,
                               const std::vector<Note>& notes, JudgeBackend& backend,
                               const FilterOptions& options = {});

// Same mechanics over candidate claims; the unsupported share is the
// finding (possible hallucinations or cross-note inferences).
FilterReport detect_hallucinations(const std::vector<ClinicalClaim>& candidate_claims,
                                   const std::vector<Note>& notes, JudgeBackend& backend,
                                   const FilterOptions& options = {});

}  // namespace tbfact
