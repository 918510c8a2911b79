#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tbfact/errors.hpp"

namespace tbfact {

enum class ClaimSource { Candidate, Reference };

// Total order: High > Medium > Low.
enum class ImportanceLevel { Low = 0, Medium = 1, High = 2 };

// Total order for credit purposes: None < Partial < Full.
enum class EntailmentLabel { None = 0, Partial = 1, Full = 2 };

// How partial entailments are credited. StrictFullOnly and Lenient ignore
// partial_credit; Default uses it verbatim.
enum class ScoringMode { StrictFullOnly, Default, Lenient };

const char* to_string(ClaimSource s);
const char* to_string(ImportanceLevel l);
const char* to_string(EntailmentLabel l);
const char* to_string(ScoringMode m);

ClaimSource claim_source_from_string(std::string_view s);
ImportanceLevel importance_from_string(std::string_view s);
EntailmentLabel entailment_from_string(std::string_view s);
ScoringMode scoring_mode_from_string(std::string_view s);

// Character-offset span [begin, end) into the source summary.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const SourceSpan&) const = default;
};

// One atomic, self-contained, verifiable clinical statement.
struct ClinicalClaim {
  std::string id;
  std::string text;
  ClaimSource source = ClaimSource::Candidate;
  std::string patient_id;
  std::optional<ImportanceLevel> importance;
  std::optional<SourceSpan> provenance;

  bool operator==(const ClinicalClaim&) const = default;
};

// Verdict of one claim judged against one target text.
struct EntailmentJudgment {
  std::string claim_id;
  std::string target;  // counterpart summary or "note:<id>"
  EntailmentLabel label = EntailmentLabel::None;
  std::string rationale;
  std::string judge_id;

  bool operator==(const EntailmentJudgment&) const = default;
};

struct ScoringConfig {
  double partial_credit = 0.5;
  ScoringMode mode = ScoringMode::Default;
  bool stratify_by_importance = true;

  bool operator==(const ScoringConfig&) const = default;
};

// Credit in [0,1] for a label under a config.
// Full -> 1 and None -> 0 always; Partial depends on the mode.
double credit_of(EntailmentLabel label, const ScoringConfig& config);

struct Note {
  std::string note_id;
  std::string text;

  bool operator==(const Note&) const = default;
};

struct PatientCase {
  std::string patient_id;
  std::string candidate_summary;
  std::string reference_summary;
  std::vector<Note> notes;
  // Unknown corpus fields, preserved on round-trip.
  nlohmann::json extra = nlohmann::json::object();
};

}  // namespace tbfact
