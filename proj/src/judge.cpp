#include "tbfact/judge.hpp"

#include <cstdio>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "tbfact/prompts.hpp"
#include "tbfact/text.hpp"

namespace tbfact {

const char* to_string(JudgeTask t) {
  switch (t) {
    case JudgeTask::ExtractClaims: return "extract_claims";
    case JudgeTask::ClassifyImportance: return "classify_importance";
    case JudgeTask::JudgeEntailment: return "judge_entailment";
    case JudgeTask::StandardizeSummary: return "standardize_summary";
  }
  return "judge_entailment";
}

OracleVerdict oracle_entailment_verdict(std::string_view fact, std::string_view target) {
  OracleVerdict v;
  if (text::trim(fact).empty() || text::trim(target).empty()) {
    throw std::invalid_argument("oracle_entailment: fact and target must be non-empty");
  }
  if (text::contains_phrase(target, fact)) {
    v.label = EntailmentLabel::Full;
    v.overlap = 1.0;
    v.rationale = "fact appears verbatim in the target after normalization";
    return v;
  }
  auto fact_tokens = text::content_tokens(fact);
  if (fact_tokens.empty()) {
    v.label = EntailmentLabel::None;
    v.rationale = "fact has no content tokens to match";
    return v;
  }
  std::unordered_set<std::string> target_tokens;
  for (auto& t : text::tokens(target)) target_tokens.insert(std::move(t));
  std::size_t hits = 0;
  for (const auto& t : fact_tokens) {
    if (target_tokens.count(t)) ++hits;
  }
  v.overlap = static_cast<double>(hits) / static_cast<double>(fact_tokens.size());
  char buf[96];
  std::snprintf(buf, sizeof(buf), "content-token overlap %zu/%zu (%.2f) %s threshold 0.50",
                hits, fact_tokens.size(), v.overlap, v.overlap >= 0.5 ? "meets" : "below");
  v.rationale = buf;
  v.label = v.overlap >= 0.5 ? EntailmentLabel::Partial : EntailmentLabel::None;
  return v;
}

EntailmentLabel oracle_entailment(std::string_view fact, std::string_view target) {
  return oracle_entailment_verdict(fact, target).label;
}

namespace {

EntailmentLabel wire_label_to_entailment(const std::string& s) {
  if (s == "Yes" || s == "yes") return EntailmentLabel::Full;
  if (s == "No" || s == "no") return EntailmentLabel::None;
  if (s == "Partial" || s == "partial") return EntailmentLabel::Partial;
  throw ParseFailure("judge returned unknown entailment label: " + s);
}

}  // namespace

std::vector<std::pair<EntailmentLabel, std::string>> judge_entailment(
    const std::vector<std::string>& facts, const std::string& target_text,
    JudgeBackend& backend, const JudgeOptions& options) {
  if (facts.empty()) throw std::invalid_argument("judge_entailment: facts must be non-empty");
  if (text::trim(target_text).empty()) {
    throw std::invalid_argument("judge_entailment: target_text must be non-empty");
  }

  std::vector<std::pair<EntailmentLabel, std::string>> out;
  out.reserve(facts.size());
  for (std::size_t start = 0; start < facts.size(); start += kMaxFactsPerRequest) {
    std::size_t count = std::min(kMaxFactsPerRequest, facts.size() - start);
    nlohmann::json batch = nlohmann::json::array();
    for (std::size_t i = 0; i < count; ++i) batch.push_back(facts[start + i]);

    JudgeRequest req;
    req.task = JudgeTask::JudgeEntailment;
    req.prompt_template_id = prompts::kEntailmentTemplateId;
    req.payload = {{"target", target_text}, {"facts", std::move(batch)}};
    req.temperature = options.temperature;
    req.model_id = options.model_id;

    JudgeResponse resp = backend.invoke(req);
    if (!resp.parse_ok) {
      throw ParseFailure("entailment batch of " + std::to_string(count) +
                         " facts: judge output not parseable; raw: " +
                         resp.raw.substr(0, 200));
    }
    const auto& labels = resp.structured.at("labels");
    if (!labels.is_array() || labels.size() != count) {
      throw ParseFailure("entailment batch: expected " + std::to_string(count) +
                         " labels, got " + std::to_string(labels.size()));
    }
    for (const auto& item : labels) {
      EntailmentLabel label = wire_label_to_entailment(item.at("label").get<std::string>());
      std::string rationale = item.value("rationale", "");
      if (label != EntailmentLabel::Full && text::trim(rationale).empty()) {
        throw ParseFailure("entailment batch: missing rationale for a non-Full label");
      }
      out.emplace_back(label, std::move(rationale));
    }
  }
  return out;
}

void parallel_for(std::size_t n, int max_threads,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t workers = std::min<std::size_t>(n, std::max(1, max_threads));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next.store(n);  // stop handing out work
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tbfact
