#include "tbfact/prompts.hpp"

#include "tbfact/errors.hpp"

namespace tbfact::prompts {

const std::string& extract_template() {
  static const std::string kText = R"(You decompose clinical summaries into atomic factual claims.

Rules:
- One finding, event or attribute per claim. Split compound sentences.
- Each claim must be a short declarative statement that can be verified as
  true or false on its own. No questions, no instructions.
- Make every claim self-contained: repeat the date and the subject from the
  surrounding context so the claim is verifiable in isolation.
- Do not invent content that is not in the text.

Return only JSON of the form:
{"claims": [{"text": "..."}]}

Text to decompose:
{{text}}
)";
  return kText;
}

const std::string& importance_rubric_text() {
  static const std::string kText = R"(You assign tumor-board salience to clinical factual claims.

Label each claim High, Medium or Low importance for molecular tumor board
decision-making:
- High: findings that change decisions outright - actionable biomarkers and
  tumor genetics, histology and diagnosis, staging inflections (TNM, grade),
  disease progression, recurrence, and treatment response.
- Medium: treatments and procedures delivered, imaging studies and their
  routine findings, medication starts and stops, dosing.
- Low: scheduling, logistics, preferences, and background details without
  decision impact.
If torn between two levels, choose the higher one.

Return only JSON of the form:
{"labels": [{"label": "High"}]}
with exactly one entry per claim, in input order.

Claims:
{{claims}}
)";
  return kText;
}

const std::string& entailment_template() {
  static const std::string kText = R"(You judge whether clinical facts are supported by a target text.

For each fact below, decide whether the target text entails it:
- "Yes": the full content of the fact is supported by the target text.
- "Partial": some of the fact is supported but details are missing or differ.
- "No": the target text does not support the fact.
Judge only against the target text. Give a one-sentence rationale for every
"Partial" and "No" decision.

Return only JSON of the form:
{"labels": [{"label": "Yes", "rationale": "..."}]}
with exactly one entry per fact, in input order.

Target text:
{{target}}

Facts:
{{facts}}
)";
  return kText;
}

const std::string& standardize_template() {
  static const std::string kText = R"(You restructure clinical case summaries into a standard template.

Rewrite the input as:
1. A narrative paragraph covering the undated context.
2. A chronological timeline of dated clinical events, ascending by date.
Every dated event from the input must appear in the timeline. Do not add
content that is not in the input.

Return only JSON of the form:
{"narrative": "...", "events": [{"date": "YYYY-MM-DD", "text": "..."}]}

Input:
{{text}}
)";
  return kText;
}

const std::string& template_text(const std::string& template_id) {
  if (template_id == kExtractTemplateId) return extract_template();
  if (template_id == kImportanceTemplateId) return importance_rubric_text();
  if (template_id == kEntailmentTemplateId) return entailment_template();
  if (template_id == kStandardizeTemplateId) return standardize_template();
  throw UnknownLabel("unknown prompt template id: " + template_id);
}

}  // namespace tbfact::prompts
