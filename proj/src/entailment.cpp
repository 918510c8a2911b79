#include "tbfact/entailment.hpp"

#include <algorithm>

#include "tbfact/text.hpp"

namespace tbfact {

namespace {

std::vector<JudgedClaim> judge_side(const std::vector<ClinicalClaim>& claims,
                                    const std::string& target_text,
                                    const std::string& target_name,
                                    JudgeBackend& backend, const JudgeOptions& options) {
  if (claims.empty()) return {};
  std::vector<std::string> facts;
  facts.reserve(claims.size());
  for (const auto& c : claims) facts.push_back(c.text);

  std::vector<std::pair<EntailmentLabel, std::string>> verdicts;
  try {
    verdicts = judge_entailment(facts, target_text, backend, options);
  } catch (const ParseFailure& e) {
    throw ParseFailure(target_name + " side: " + e.what());
  } catch (const BackendUnreachable& e) {
    throw BackendUnreachable(target_name + " side: " + e.what());
  }

  const std::string judge_id = backend.id();
  std::vector<JudgedClaim> out;
  out.reserve(claims.size());
  for (std::size_t i = 0; i < claims.size(); ++i) {
    EntailmentJudgment j;
    j.claim_id = claims[i].id;
    j.target = target_name;
    j.label = verdicts[i].first;
    j.rationale = verdicts[i].second;
    j.judge_id = judge_id;
    out.push_back({claims[i], std::move(j)});
  }
  return out;
}

void require_labeled(const std::vector<ClinicalClaim>& claims, const char* side) {
  for (const auto& c : claims) {
    if (!c.importance.has_value()) {
      throw std::invalid_argument(std::string("judge_bidirectional: ") + side + " claim '" +
                                  c.id + "' has no importance label");
    }
  }
}

int importance_rank(const ClinicalClaim& c) {
  return c.importance ? static_cast<int>(*c.importance) : -1;
}

void sort_entries(std::vector<LedgerEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const LedgerEntry& a, const LedgerEntry& b) {
    int ra = importance_rank(a.claim);
    int rb = importance_rank(b.claim);
    if (ra != rb) return ra > rb;
    return a.claim.id < b.claim.id;
  });
}

}  // namespace

BidirectionalJudgments judge_bidirectional(const std::vector<ClinicalClaim>& candidate_claims,
                                           const std::vector<ClinicalClaim>& reference_claims,
                                           const std::string& candidate_text,
                                           const std::string& reference_text,
                                           JudgeBackend& backend, const JudgeOptions& options) {
  if (text::trim(candidate_text).empty() || text::trim(reference_text).empty()) {
    throw std::invalid_argument("judge_bidirectional: both texts must be non-empty");
  }
  require_labeled(candidate_claims, "candidate");
  require_labeled(reference_claims, "reference");

  BidirectionalJudgments result;
  // The two sides are independent; run them in parallel when allowed.
  parallel_for(2, options.concurrency > 1 ? 2 : 1, [&](std::size_t side) {
    if (side == 0) {
      result.candidate_side =
          judge_side(candidate_claims, reference_text, "reference_summary", backend, options);
    } else {
      result.reference_side =
          judge_side(reference_claims, candidate_text, "candidate_summary", backend, options);
    }
  });
  return result;
}

ErrorLedger attribute_errors(const BidirectionalJudgments& judgments) {
  ErrorLedger ledger;
  for (const auto& jc : judgments.reference_side) {
    if (jc.judgment.label == EntailmentLabel::None) {
      ledger.omissions.push_back({jc.claim, jc.judgment.rationale});
    } else if (jc.judgment.label == EntailmentLabel::Partial) {
      ledger.partial_omissions.push_back({jc.claim, jc.judgment.rationale});
    }
  }
  for (const auto& jc : judgments.candidate_side) {
    if (jc.judgment.label == EntailmentLabel::None) {
      ledger.unsupported.push_back({jc.claim, jc.judgment.rationale});
    } else if (jc.judgment.label == EntailmentLabel::Partial) {
      ledger.partially_supported.push_back({jc.claim, jc.judgment.rationale});
    }
  }
  sort_entries(ledger.omissions);
  sort_entries(ledger.partial_omissions);
  sort_entries(ledger.unsupported);
  sort_entries(ledger.partially_supported);
  return ledger;
}

}  // namespace tbfact
