#pragma once

#include <string>

namespace tbfact::prompts {

// Template ids recorded in run manifests and cache keys.
inline constexpr const char* kExtractTemplateId = "extract/v1";
inline constexpr const char* kImportanceTemplateId = "importance/v1";
inline constexpr const char* kEntailmentTemplateId = "entail/v1";
inline constexpr const char* kStandardizeTemplateId = "standardize/v1";

// Editable default prompt texts for the remote backend. These ship as
// defaults, not as reconstructions of any particular deployment's prompts.
const std::string& extract_template();
const std::string& importance_rubric_text();
const std::string& entailment_template();
const std::string& standardize_template();

// Resolves a template id to its default text; throws UnknownLabel otherwise.
const std::string& template_text(const std::string& template_id);

}  // namespace tbfact::prompts
