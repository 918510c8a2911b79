#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "tbfact/importance.hpp"
#include "test_helpers.hpp"

using namespace tbfact;
using tbfact::testing::make_claim;

namespace {

ClinicalClaim unlabeled(std::string id, std::string text) {
  ClinicalClaim c;
  c.id = std::move(id);
  c.text = std::move(text);
  c.source = ClaimSource::Reference;
  c.patient_id = "p";
  return c;
}

}  // namespace

TEST_CASE("classify_importance: actionable biomarkers rank High") {
  auto out = mock_classify({unlabeled("c1", "EGFR is amplified.")});
  REQUIRE(out.size() == 1);
  CHECK(out[0].importance == ImportanceLevel::High);
}

TEST_CASE("classify_importance: empty claim text violates the precondition") {
  CHECK_THROWS_AS(mock_classify({unlabeled("c1", "   ")}), std::invalid_argument);
  CHECK_THROWS_AS(mock_classify({}), std::invalid_argument);
}

TEST_CASE("classify_importance: already-labeled claims are rejected") {
  auto labeled = make_claim("c1", "EGFR is amplified.", ClaimSource::Reference,
                            ImportanceLevel::High);
  CHECK_THROWS_AS(mock_classify({labeled}), std::invalid_argument);
}

TEST_CASE("keyword rubric: biomarker High, scheduling Low") {
  CHECK(keyword_importance("EGFR is amplified.") == ImportanceLevel::High);
  CHECK(keyword_importance("A follow-up call is planned for Tuesday.") == ImportanceLevel::Low);
}

TEST_CASE("mock rubric: staging High") {
  CHECK(keyword_importance("TNM stage T2N0M0 assigned") == ImportanceLevel::High);
}

TEST_CASE("mock rubric: preferences Low") {
  CHECK(keyword_importance("Patient prefers morning appointments") == ImportanceLevel::Low);
}

TEST_CASE("mock rubric: treatments and imaging Medium") {
  CHECK(keyword_importance("Lomustine was initiated at standard dosing.") == ImportanceLevel::Medium);
  CHECK(keyword_importance("An MRI of the brain was obtained.") == ImportanceLevel::Medium);
}

TEST_CASE("mock rubric: High outranks Medium on mixed claims") {
  CHECK(keyword_importance("MRI on 05/16/2020 showed progression.") == ImportanceLevel::High);
}

TEST_CASE("classify_importance: per-claim labels independent of neighbors") {
  std::vector<ClinicalClaim> claims = {
      unlabeled("c1", "EGFR is amplified."),
      unlabeled("c2", "Patient prefers morning appointments."),
      unlabeled("c3", "Lomustine was initiated."),
  };
  auto mixed = mock_classify(claims);
  REQUIRE(mixed.size() == 3);
  CHECK(mixed[0].importance == ImportanceLevel::High);
  CHECK(mixed[1].importance == ImportanceLevel::Low);
  CHECK(mixed[2].importance == ImportanceLevel::Medium);

  for (std::size_t i = 0; i < claims.size(); ++i) {
    auto alone = mock_classify({claims[i]});
    CHECK(alone[0].importance == mixed[i].importance);
  }
}

TEST_CASE("classify_importance property: permuting claims permutes labels identically") {
  std::mt19937 rng(7);
  const char* kTexts[] = {
      "EGFR is amplified.",
      "KRAS mutation detected.",
      "MRI of the brain was stable.",
      "Carboplatin dosing continued.",
      "Patient prefers afternoon visits.",
      "Family traveled for the visit.",
      "Stage III disease documented.",
      "A scan was scheduled as routine.",
  };
  for (int round = 0; round < 50; ++round) {
    std::vector<ClinicalClaim> claims;
    std::uniform_int_distribution<int> n_dist(1, 8);
    std::uniform_int_distribution<int> t_dist(0, 7);
    int n = n_dist(rng);
    for (int i = 0; i < n; ++i) {
      claims.push_back(unlabeled("c" + std::to_string(i), kTexts[t_dist(rng)]));
    }
    auto labeled = mock_classify(claims);

    std::vector<std::size_t> perm(claims.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ClinicalClaim> shuffled;
    for (auto i : perm) shuffled.push_back(claims[i]);
    auto labeled_shuffled = mock_classify(shuffled);

    for (std::size_t k = 0; k < perm.size(); ++k) {
      CHECK(labeled_shuffled[k].importance == labeled[perm[k]].importance);
    }
  }
}

TEST_CASE("classify_importance: coverage, no claim leaves unlabeled, order preserved") {
  std::vector<ClinicalClaim> claims;
  for (int i = 0; i < 45; ++i) {
    claims.push_back(unlabeled("c" + std::to_string(i), "Filler statement " + std::to_string(i) + "."));
  }
  auto out = mock_classify(claims);
  REQUIRE(out.size() == claims.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].importance.has_value());
    CHECK(out[i].id == claims[i].id);
  }
}

TEST_CASE("rubric validation requires the three criteria families") {
  ImportanceRubric rubric = ImportanceRubric::default_rubric();
  CHECK_NOTHROW(rubric.validate());

  ImportanceRubric bad = rubric;
  bad.text = "Label claims by vibes.";
  CHECK_THROWS_AS(bad.validate(), ConfigMismatch);
}
