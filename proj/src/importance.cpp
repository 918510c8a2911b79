#include "tbfact/importance.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "tbfact/prompts.hpp"
#include "tbfact/text.hpp"

namespace tbfact {

namespace {

// Keyword rubric for the deterministic backend. High outranks Medium when a
// claim matches both; claims matching neither rank Low.
const std::unordered_set<std::string>& high_keywords() {
  static const std::unordered_set<std::string> kHigh = {
      // tumor genetics and actionable biomarkers
      "mutation", "mutations", "mutant", "wildtype", "amplification", "amplifications",
      "amplified", "deletion", "deletions", "deleted", "fusion", "rearrangement",
      "biomarker", "biomarkers", "monosomy", "trisomy", "methylation", "methylated",
      "egfr", "idh1", "idh2", "braf", "tert", "pten", "cdkn2a", "cdkn2b", "kras",
      "nras", "tp53", "her2", "erbb2", "alk", "ros1", "ret", "brca1", "brca2",
      "pik3ca", "msi", "tmb", "mgmt",
      // staging inflections and diagnosis
      "stage", "staging", "tnm", "grade", "histology", "diagnosis", "diagnosed",
      "carcinoma", "adenocarcinoma", "glioblastoma", "astrocytoma", "sarcoma",
      "lymphoma", "melanoma", "leukemia",
      // disease trajectory
      "progression", "progressed", "progressing", "metastasis", "metastatic",
      "metastases", "recurrence", "recurrent", "relapse", "remission", "response",
      "resistance",
  };
  return kHigh;
}

const std::unordered_set<std::string>& medium_keywords() {
  static const std::unordered_set<std::string> kMedium = {
      // treatments and procedures
      "treatment", "treatments", "therapy", "chemotherapy", "radiotherapy",
      "chemoradiation", "radiation", "immunotherapy", "surgery", "surgical",
      "resection", "craniotomy", "lobectomy", "mastectomy", "biopsy", "infusion",
      "dose", "dosing", "cycle", "cycles", "regimen", "prescribed", "initiated",
      "discontinued", "administered", "medication", "medications", "drug", "drugs",
      // imaging
      "mri", "ct", "pet", "scan", "scans", "imaging", "ultrasound", "radiograph",
      // common oncology agents
      "lomustine", "ccnu", "temozolomide", "bevacizumab", "pembrolizumab",
      "nivolumab", "carboplatin", "cisplatin", "paclitaxel", "docetaxel",
      "capecitabine", "osimertinib", "erlotinib", "trastuzumab", "tamoxifen",
      "letrozole", "folfox", "dabrafenib", "trametinib",
  };
  return kMedium;
}

}  // namespace

ImportanceLevel keyword_importance(std::string_view claim_text) {
  bool medium = false;
  for (const auto& t : text::tokens(claim_text)) {
    if (high_keywords().count(t)) return ImportanceLevel::High;
    if (medium_keywords().count(t)) medium = true;
  }
  return medium ? ImportanceLevel::Medium : ImportanceLevel::Low;
}

ImportanceRubric ImportanceRubric::default_rubric() {
  ImportanceRubric r;
  r.rubric_id = prompts::kImportanceTemplateId;
  r.version = 1;
  r.text = prompts::importance_rubric_text();
  r.validate();
  return r;
}

ImportanceRubric ImportanceRubric::from_file(const std::filesystem::path& path,
                                             std::string rubric_id, int version) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot read rubric file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  ImportanceRubric r;
  r.rubric_id = std::move(rubric_id);
  r.version = version;
  r.text = buf.str();
  r.validate();
  return r;
}

void ImportanceRubric::validate() const {
  std::string lower = text::normalize(text);
  auto mentions = [&](const char* term) { return lower.find(term) != std::string::npos; };
  if (!mentions("biomarker")) {
    throw ConfigMismatch("rubric '" + rubric_id + "' does not mention biomarkers");
  }
  if (!mentions("stage") && !mentions("staging")) {
    throw ConfigMismatch("rubric '" + rubric_id + "' does not mention staging");
  }
  if (!mentions("treatment")) {
    throw ConfigMismatch("rubric '" + rubric_id + "' does not mention treatment");
  }
}

std::vector<ClinicalClaim> classify_importance(std::vector<ClinicalClaim> claims,
                                               const ImportanceRubric& rubric,
                                               JudgeBackend& backend,
                                               const JudgeOptions& options) {
  if (claims.empty()) {
    throw std::invalid_argument("classify_importance: claims must be non-empty");
  }
  for (const auto& c : claims) {
    if (text::trim(c.text).empty()) {
      throw std::invalid_argument("classify_importance: claim text must be non-empty");
    }
    if (c.importance.has_value()) {
      throw std::invalid_argument("classify_importance: claim '" + c.id +
                                  "' already carries an importance label");
    }
  }
  rubric.validate();

  for (std::size_t start = 0; start < claims.size(); start += kMaxFactsPerRequest) {
    std::size_t count = std::min(kMaxFactsPerRequest, claims.size() - start);
    nlohmann::json batch = nlohmann::json::array();
    for (std::size_t i = 0; i < count; ++i) batch.push_back(claims[start + i].text);

    JudgeRequest req;
    req.task = JudgeTask::ClassifyImportance;
    req.prompt_template_id = rubric.rubric_id;
    req.payload = {{"rubric", rubric.text}, {"claims", std::move(batch)}};
    req.temperature = options.temperature;
    req.model_id = options.model_id;

    JudgeResponse resp = backend.invoke(req);
    if (!resp.parse_ok) {
      throw ParseFailure("importance batch: judge output not parseable; raw: " +
                         resp.raw.substr(0, 200));
    }
    const auto& labels = resp.structured.at("labels");
    if (!labels.is_array() || labels.size() != count) {
      throw ParseFailure("importance batch: expected " + std::to_string(count) +
                         " labels, got " + std::to_string(labels.size()));
    }
    for (std::size_t i = 0; i < count; ++i) {
      claims[start + i].importance =
          importance_from_string(labels[i].at("label").get<std::string>());
    }
  }
  return claims;
}

std::vector<ClinicalClaim> mock_classify(std::vector<ClinicalClaim> claims) {
  OracleBackend oracle;
  return classify_importance(std::move(claims), ImportanceRubric::default_rubric(), oracle);
}

}  // namespace tbfact
