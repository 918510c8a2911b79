#include "tbfact/extraction.hpp"
#include "tbfact/importance.hpp"
#include "tbfact/judge.hpp"
#include "tbfact/text.hpp"

namespace tbfact {

namespace {

const char* wire_label(EntailmentLabel l) {
  switch (l) {
    case EntailmentLabel::Full: return "Yes";
    case EntailmentLabel::None: return "No";
    case EntailmentLabel::Partial: return "Partial";
  }
  return "No";
}

}  // namespace

JudgeResponse OracleBackend::invoke(const JudgeRequest& request) {
  JudgeResponse resp;
  switch (request.task) {
    case JudgeTask::ExtractClaims: {
      const auto doc = request.payload.at("text").get<std::string>();
      nlohmann::json claims = nlohmann::json::array();
      for (const auto& cand : text::claim_candidates(doc)) {
        claims.push_back({{"text", cand.text}, {"begin", cand.begin}, {"end", cand.end}});
      }
      resp.structured = {{"claims", std::move(claims)}};
      break;
    }
    case JudgeTask::ClassifyImportance: {
      nlohmann::json labels = nlohmann::json::array();
      for (const auto& claim : request.payload.at("claims")) {
        labels.push_back({{"label", to_string(keyword_importance(claim.get<std::string>()))}});
      }
      resp.structured = {{"labels", std::move(labels)}};
      break;
    }
    case JudgeTask::JudgeEntailment: {
      const auto target = request.payload.at("target").get<std::string>();
      nlohmann::json labels = nlohmann::json::array();
      for (const auto& fact : request.payload.at("facts")) {
        OracleVerdict v = oracle_entailment_verdict(fact.get<std::string>(), target);
        labels.push_back({{"label", wire_label(v.label)}, {"rationale", v.rationale}});
      }
      resp.structured = {{"labels", std::move(labels)}};
      break;
    }
    case JudgeTask::StandardizeSummary: {
      resp.structured = detail::mock_standardize_json(request.payload.at("text").get<std::string>());
      break;
    }
  }
  resp.raw = resp.structured.dump();
  resp.parse_ok = true;
  return resp;
}

}  // namespace tbfact
