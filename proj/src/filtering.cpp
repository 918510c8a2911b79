#include "tbfact/filtering.hpp"

#include <algorithm>

#include "tbfact/text.hpp"

namespace tbfact {

SupportMask support_mask(const std::vector<ClinicalClaim>& facts,
                         const std::vector<Note>& notes, JudgeBackend& backend,
                         const FilterOptions& options) {
  if (facts.empty()) throw std::invalid_argument("support_mask: facts must be non-empty");

  SupportMask mask;
  mask.supported.assign(facts.size(), false);

  for (const auto& note : notes) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < facts.size(); ++i) {
      if (!options.early_exit || !mask.supported[i]) pending.push_back(i);
    }
    if (pending.empty()) continue;

    std::vector<std::string> texts;
    texts.reserve(pending.size());
    for (std::size_t i : pending) texts.push_back(facts[i].text);

    std::vector<std::pair<EntailmentLabel, std::string>> verdicts;
    try {
      verdicts = judge_entailment(texts, note.text, backend, options);
    } catch (const ParseFailure& e) {
      throw ParseFailure("note '" + note.note_id + "': " + e.what());
    } catch (const BackendUnreachable& e) {
      throw BackendUnreachable("note '" + note.note_id + "': " + e.what());
    }
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (verdicts[k].first != EntailmentLabel::None) mask.supported[pending[k]] = true;
    }
  }
  return mask;
}

namespace {

// Backend-independent nearest miss for exclusion diagnostics: the note with
// the highest lexical overlap against the fact.
std::string nearest_miss(const ClinicalClaim& fact, const std::vector<Note>& notes) {
  if (notes.empty()) return "no notes available";
  double best = -1.0;
  const Note* best_note = nullptr;
  std::string best_rationale;
  for (const auto& note : notes) {
    OracleVerdict v = oracle_entailment_verdict(fact.text, note.text);
    if (v.overlap > best) {
      best = v.overlap;
      best_note = &note;
      best_rationale = v.rationale;
    }
  }
  return "closest note '" + best_note->note_id + "': " + best_rationale;
}

}  // namespace

FilterReport filter_verifiable(const std::vector<ClinicalClaim>& facts,
                               const std::vector<Note>& notes, JudgeBackend& backend,
                               const FilterOptions& options) {
  SupportMask mask = support_mask(facts, notes, backend, options);

  FilterReport report;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (mask.supported[i]) {
      report.retained.push_back(facts[i]);
    } else {
      report.excluded.push_back(
          {facts[i], "not supported by any of " + std::to_string(notes.size()) +
                         " notes; " + nearest_miss(facts[i], notes)});
    }
  }
  report.retention_rate =
      static_cast<double>(report.retained.size()) / static_cast<double>(facts.size());
  return report;
}

FilterReport detect_hallucinations(const std::vector<ClinicalClaim>& candidate_claims,
                                   const std::vector<Note>& notes, JudgeBackend& backend,
                                   const FilterOptions& options) {
  return filter_verifiable(candidate_claims, notes, backend, options);
}

}  // namespace tbfact
