#include "tbfact/types.hpp"

namespace tbfact {

const char* to_string(ClaimSource s) {
  return s == ClaimSource::Candidate ? "candidate" : "reference";
}

const char* to_string(ImportanceLevel l) {
  switch (l) {
    case ImportanceLevel::High: return "High";
    case ImportanceLevel::Medium: return "Medium";
    case ImportanceLevel::Low: return "Low";
  }
  return "Low";
}

const char* to_string(EntailmentLabel l) {
  switch (l) {
    case EntailmentLabel::Full: return "Full";
    case EntailmentLabel::Partial: return "Partial";
    case EntailmentLabel::None: return "None";
  }
  return "None";
}

const char* to_string(ScoringMode m) {
  switch (m) {
    case ScoringMode::StrictFullOnly: return "strict-full";
    case ScoringMode::Default: return "default";
    case ScoringMode::Lenient: return "lenient";
  }
  return "default";
}

ClaimSource claim_source_from_string(std::string_view s) {
  if (s == "candidate") return ClaimSource::Candidate;
  if (s == "reference") return ClaimSource::Reference;
  throw UnknownLabel("unknown claim source: " + std::string(s));
}

ImportanceLevel importance_from_string(std::string_view s) {
  if (s == "High" || s == "high") return ImportanceLevel::High;
  if (s == "Medium" || s == "medium") return ImportanceLevel::Medium;
  if (s == "Low" || s == "low") return ImportanceLevel::Low;
  throw UnknownLabel("unknown importance level: " + std::string(s));
}

EntailmentLabel entailment_from_string(std::string_view s) {
  if (s == "Full" || s == "full") return EntailmentLabel::Full;
  if (s == "Partial" || s == "partial") return EntailmentLabel::Partial;
  if (s == "None" || s == "none") return EntailmentLabel::None;
  throw UnknownLabel("unknown entailment label: " + std::string(s));
}

ScoringMode scoring_mode_from_string(std::string_view s) {
  if (s == "strict-full" || s == "strict_full" || s == "strict") return ScoringMode::StrictFullOnly;
  if (s == "default") return ScoringMode::Default;
  if (s == "lenient") return ScoringMode::Lenient;
  throw UnknownLabel("unknown scoring mode: " + std::string(s));
}

double credit_of(EntailmentLabel label, const ScoringConfig& config) {
  switch (label) {
    case EntailmentLabel::Full:
      return 1.0;
    case EntailmentLabel::None:
      return 0.0;
    case EntailmentLabel::Partial:
      switch (config.mode) {
        case ScoringMode::StrictFullOnly: return 0.0;
        case ScoringMode::Lenient: return 1.0;
        case ScoringMode::Default: return config.partial_credit;
      }
  }
  return 0.0;
}

}  // namespace tbfact
