#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tbfact/types.hpp"

namespace tbfact {

enum class JudgeTask { ExtractClaims, ClassifyImportance, JudgeEntailment, StandardizeSummary };

const char* to_string(JudgeTask t);

// One logical call to a judge. payload is task-specific:
//   ExtractClaims      {"text": str}
//   ClassifyImportance {"rubric": str, "claims": [str]}
//   JudgeEntailment    {"target": str, "facts": [str]}
//   StandardizeSummary {"text": str}
struct JudgeRequest {
  JudgeTask task = JudgeTask::JudgeEntailment;
  std::string prompt_template_id;
  nlohmann::json payload;
  double temperature = 0.0;
  std::string model_id;
};

// Structured output per task (absent when parse_ok is false):
//   ExtractClaims      {"claims": [{"text": str, "begin"?: int, "end"?: int}]}
//   ClassifyImportance {"labels": [{"label": "High"|"Medium"|"Low"}]}
//   JudgeEntailment    {"labels": [{"label": "Yes"|"No"|"Partial", "rationale": str}]}
//   StandardizeSummary {"narrative": str, "events": [{"date": str, "text": str}],
//                       "warnings": [str]}
struct JudgeResponse {
  nlohmann::json structured;
  std::string raw;
  bool parse_ok = false;
};

// Contract for anything that can extract, classify, judge or restructure.
// Implementations must be safe for concurrent invoke() calls.
class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;

  // Backend + model identifier recorded on every judgment.
  virtual std::string id() const = 0;

  virtual JudgeResponse invoke(const JudgeRequest& request) = 0;
};

// Entailment prompts carry at most this many facts against one target text.
inline constexpr std::size_t kMaxFactsPerRequest = 20;

struct JudgeOptions {
  std::string model_id;  // empty -> backend default
  double temperature = 0.0;
  int concurrency = 1;
};

// Deterministic lexical judge. Entailment is containment/overlap based (see
// oracle_entailment); extraction is sentence segmentation; importance is a
// keyword rubric; standardization is a date-sorted restructure.
class OracleBackend : public JudgeBackend {
 public:
  std::string id() const override { return "oracle:lexical/v1"; }
  JudgeResponse invoke(const JudgeRequest& request) override;
};

// Wraps another backend and counts invocations; used to assert cache
// behaviour and to report judge-call totals.
class CountingBackend : public JudgeBackend {
 public:
  explicit CountingBackend(JudgeBackend& inner) : inner_(inner) {}

  std::string id() const override { return inner_.id(); }

  JudgeResponse invoke(const JudgeRequest& request) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.invoke(request);
  }

  std::size_t calls() const { return calls_.load(std::memory_order_relaxed); }

 private:
  JudgeBackend& inner_;
  std::atomic<std::size_t> calls_{0};
};

// Deterministic entailment rule, fixed thresholds:
//   Full     normalize(fact) appears token-contiguously in normalize(target)
//   Partial  >= 50% of the fact's unique content tokens appear in the target
//   None     otherwise
// Stop words are the single list in text.cpp.
EntailmentLabel oracle_entailment(std::string_view fact, std::string_view target);

// Same decision plus a one-line rationale and the overlap fraction.
struct OracleVerdict {
  EntailmentLabel label = EntailmentLabel::None;
  std::string rationale;
  double overlap = 0.0;  // fraction of content tokens found in the target
};
OracleVerdict oracle_entailment_verdict(std::string_view fact, std::string_view target);

// Judges each fact against target_text, batched kMaxFactsPerRequest at a
// time. Output order and cardinality match the input. Wire labels Yes, No
// and Partial map to Full, None and Partial.
std::vector<std::pair<EntailmentLabel, std::string>> judge_entailment(
    const std::vector<std::string>& facts, const std::string& target_text,
    JudgeBackend& backend, const JudgeOptions& options = {});

// Runs fn(0..n-1) on up to max_threads threads. Exceptions are collected and
// the first one rethrown after all workers join.
void parallel_for(std::size_t n, int max_threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace tbfact
