#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tbfact/judge.hpp"
#include "tbfact/types.hpp"

namespace tbfact {

// Versioned salience rubric. The text must name the three criteria families
// (biomarkers, staging, treatment) so downstream reports can trust the label
// provenance; validate() enforces that.
struct ImportanceRubric {
  std::string rubric_id;
  int version = 1;
  std::string text;

  static ImportanceRubric default_rubric();
  static ImportanceRubric from_file(const std::filesystem::path& path,
                                    std::string rubric_id, int version);

  void validate() const;
};

// Stage 2: label every claim High, Medium or Low. Order preserved; labels
// are a pure function of (claim text, rubric, backend). Claims must arrive
// unlabeled.
std::vector<ClinicalClaim> classify_importance(std::vector<ClinicalClaim> claims,
                                               const ImportanceRubric& rubric,
                                               JudgeBackend& backend,
                                               const JudgeOptions& options = {});

// Deterministic keyword rubric used by the lexical oracle: biomarker,
// staging and progression terms rank High; treatment and imaging terms rank
// Medium; everything else Low. The keyword table lives in importance.cpp.
ImportanceLevel keyword_importance(std::string_view claim_text);

// classify_importance over the lexical oracle.
std::vector<ClinicalClaim> mock_classify(std::vector<ClinicalClaim> claims);

}  // namespace tbfact
