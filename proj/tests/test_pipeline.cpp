#include <doctest.h>

#include "tbfact/cache.hpp"
#include "tbfact/pipeline.hpp"
#include "test_helpers.hpp"

using namespace tbfact;
using tbfact::testing::TempDir;
using tbfact::testing::fixture_dir;

namespace {

EvaluateOptions oracle_options() {
  EvaluateOptions options;
  options.scoring.mode = ScoringMode::Default;
  options.scoring.partial_credit = 0.5;
  options.concurrency = 4;
  return options;
}

const TbfactScore& row(const RunScores& scores, Stratum s) {
  const TbfactScore* found = scores.find(s);
  REQUIRE(found != nullptr);
  return *found;
}

}  // namespace

TEST_CASE("fixture corpus: hand-designed micro scores under the oracle") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  REQUIRE(cases.size() == 5);
  OracleBackend oracle;
  auto result = evaluate_corpus(cases, oracle, oracle_options());

  // 40 candidate and 35 reference claims by design
  const auto& overall = row(result.corpus_scores, Stratum::Overall);
  CHECK(overall.p_support == 40);
  CHECK(overall.r_support == 35);
  CHECK(*overall.precision == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(*overall.recall == doctest::Approx(0.8).epsilon(1e-9));

  // high-importance recall 21/25 = 0.84 by construction (19 Full, 4 Partial, 2 None)
  const auto& high = row(result.corpus_scores, Stratum::High);
  CHECK(high.r_support == 25);
  CHECK(high.p_support == 23);
  CHECK(*high.recall == doctest::Approx(0.84).epsilon(1e-9));
  CHECK(*high.precision == doctest::Approx(21.0 / 23.0).epsilon(1e-9));

  const auto& medium = row(result.corpus_scores, Stratum::Medium);
  CHECK(medium.r_support == 8);
  CHECK(medium.p_support == 11);
  CHECK(*medium.recall == doctest::Approx(0.75).epsilon(1e-9));

  const auto& low = row(result.corpus_scores, Stratum::Low);
  CHECK(low.r_support == 2);
  CHECK(low.p_support == 6);
  CHECK(*low.recall == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("fixture corpus: error ledger pools and conserves") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  OracleBackend oracle;
  auto result = evaluate_corpus(cases, oracle, oracle_options());

  CHECK(result.corpus_ledger.omissions.size() == 4);
  CHECK(result.corpus_ledger.partial_omissions.size() == 6);
  CHECK(result.corpus_ledger.unsupported.size() == 9);
  CHECK(result.corpus_ledger.partially_supported.size() == 6);

  // conservation against supports
  const auto& overall = row(result.corpus_scores, Stratum::Overall);
  std::size_t ref_full = 0, cand_full = 0;
  for (const auto& ev : result.patients) {
    for (const auto& jc : ev.judgments.reference_side) {
      if (jc.judgment.label == EntailmentLabel::Full) ++ref_full;
    }
    for (const auto& jc : ev.judgments.candidate_side) {
      if (jc.judgment.label == EntailmentLabel::Full) ++cand_full;
    }
  }
  CHECK(result.corpus_ledger.omissions.size() + result.corpus_ledger.partial_omissions.size() +
            ref_full ==
        static_cast<std::size_t>(overall.r_support));
  CHECK(result.corpus_ledger.unsupported.size() +
            result.corpus_ledger.partially_supported.size() + cand_full ==
        static_cast<std::size_t>(overall.p_support));

  // ledger ordering: High entries first
  REQUIRE(result.corpus_ledger.omissions.size() >= 2);
  CHECK(result.corpus_ledger.omissions[0].claim.importance == ImportanceLevel::High);
  CHECK(result.corpus_ledger.omissions[1].claim.importance == ImportanceLevel::High);
}

TEST_CASE("scoring mode ordering on the fixture corpus") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  OracleBackend oracle;

  auto strict_options = oracle_options();
  strict_options.scoring.mode = ScoringMode::StrictFullOnly;
  auto lenient_options = oracle_options();
  lenient_options.scoring.mode = ScoringMode::Lenient;

  auto strict = evaluate_corpus(cases, oracle, strict_options);
  auto dflt = evaluate_corpus(cases, oracle, oracle_options());
  auto lenient = evaluate_corpus(cases, oracle, lenient_options);

  auto high_recall = [&](const RunResult& r) { return *row(r.corpus_scores, Stratum::High).recall; };
  CHECK(high_recall(strict) == doctest::Approx(19.0 / 25.0).epsilon(1e-9));
  CHECK(high_recall(lenient) == doctest::Approx(23.0 / 25.0).epsilon(1e-9));
  CHECK(high_recall(strict) <= high_recall(dflt));
  CHECK(high_recall(dflt) <= high_recall(lenient));
}

TEST_CASE("determinism: two oracle runs write byte-identical artifacts") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  OracleBackend oracle;
  TempDir dir("determinism");

  auto options = oracle_options();
  options.corpus_path = (fixture_dir() / "corpus.jsonl").string();
  auto a = evaluate_corpus(cases, oracle, options);
  auto b = evaluate_corpus(cases, oracle, options);
  write_run_result(a, dir.path / "a");
  write_run_result(b, dir.path / "b");

  for (const char* name : {"scores.json", "claims.jsonl", "judgments.jsonl", "ledger.json",
                           "report.md"}) {
    CHECK(sha256_hex(read_file(dir.path / "a" / name)) ==
          sha256_hex(read_file(dir.path / "b" / name)));
  }
  CHECK(a.manifest.run_id == b.manifest.run_id);
  CHECK_NOTHROW(validate_artifact(dir.path / "a"));
}

TEST_CASE("determinism: concurrency level does not change the artifact") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  OracleBackend oracle;
  auto serial_options = oracle_options();
  serial_options.concurrency = 1;
  auto parallel_options = oracle_options();
  parallel_options.concurrency = 8;

  TempDir dir("concurrency");
  write_run_result(evaluate_corpus(cases, oracle, serial_options), dir.path / "serial");
  write_run_result(evaluate_corpus(cases, oracle, parallel_options), dir.path / "parallel");
  CHECK(sha256_hex(read_file(dir.path / "serial" / "scores.json")) ==
        sha256_hex(read_file(dir.path / "parallel" / "scores.json")));
  CHECK(sha256_hex(read_file(dir.path / "serial" / "judgments.jsonl")) ==
        sha256_hex(read_file(dir.path / "parallel" / "judgments.jsonl")));
}

TEST_CASE("filter-reference composition identity: evaluate --filter == filter then evaluate") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  OracleBackend oracle;

  auto filtered_options = oracle_options();
  filtered_options.filter_reference = true;
  auto one_shot = evaluate_corpus(cases, oracle, filtered_options);

  // composed path: per patient, filter reference claims first, then judge the
  // retained set against the candidate text
  BidirectionalJudgments pooled;
  for (const auto& pc : cases) {
    ExtractOptions extract_options;
    extract_options.patient_id = pc.patient_id;
    auto cand = mock_classify(
        extract_claims(pc.candidate_summary, ClaimSource::Candidate, oracle, extract_options)
            .claims);
    auto ref = mock_classify(
        extract_claims(pc.reference_summary, ClaimSource::Reference, oracle, extract_options)
            .claims);
    auto report = filter_verifiable(ref, pc.notes, oracle);
    auto judged = judge_bidirectional(cand, report.retained, pc.candidate_summary,
                                      pc.reference_summary, oracle);
    pooled.candidate_side.insert(pooled.candidate_side.end(), judged.candidate_side.begin(),
                                 judged.candidate_side.end());
    pooled.reference_side.insert(pooled.reference_side.end(), judged.reference_side.begin(),
                                 judged.reference_side.end());
  }
  auto composed_scores = aggregate(pooled, filtered_options.scoring);

  REQUIRE(composed_scores.size() == one_shot.corpus_scores.rows.size());
  for (std::size_t i = 0; i < composed_scores.size(); ++i) {
    const auto& a = composed_scores[i];
    const auto& b = one_shot.corpus_scores.rows[i];
    CHECK(a.stratum == b.stratum);
    CHECK(a.p_support == b.p_support);
    CHECK(a.r_support == b.r_support);
    CHECK(a.precision.has_value() == b.precision.has_value());
    if (a.precision) CHECK(*a.precision == doctest::Approx(*b.precision).epsilon(1e-12));
    if (a.recall) CHECK(*a.recall == doctest::Approx(*b.recall).epsilon(1e-12));
  }

  // filtering drops reference claims, so r_support shrinks: 31 of 35 retained
  CHECK(row(one_shot.corpus_scores, Stratum::Overall).r_support == 31);
  std::size_t excluded = 0;
  for (const auto& ev : one_shot.patients) {
    REQUIRE(ev.filter_report.has_value());
    excluded += ev.filter_report->excluded.size();
  }
  CHECK(excluded == 4);
}

TEST_CASE("no-medium fixture: Medium stratum is absent, not zero") {
  auto cases = load_corpus(fixture_dir() / "corpus_no_medium.jsonl");
  OracleBackend oracle;
  auto result = evaluate_corpus(cases, oracle, oracle_options());
  CHECK(result.corpus_scores.find(Stratum::Medium) == nullptr);
  CHECK(result.corpus_scores.find(Stratum::High) != nullptr);
  CHECK(result.corpus_scores.find(Stratum::Low) != nullptr);

  TempDir dir("no-medium");
  write_run_result(result, dir.path);
  auto scores_json = nlohmann::json::parse(read_file(dir.path / "scores.json"));
  for (const auto& s : scores_json.at("micro")) CHECK(s.at("stratum") != "Medium");
  CHECK_NOTHROW(validate_artifact(dir.path));
}

TEST_CASE("cache contract: a second evaluate run invokes the backend zero times") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  TempDir cache_dir("pipeline-cache");
  OracleBackend oracle;

  CountingBackend counting_first(oracle);
  CachingBackend cached_first(counting_first, cache_dir.path);
  auto first = evaluate_corpus(cases, cached_first, oracle_options());
  auto first_calls = counting_first.calls();
  CHECK(first_calls > 0);

  CountingBackend counting_second(oracle);
  CachingBackend cached_second(counting_second, cache_dir.path);
  auto second = evaluate_corpus(cases, cached_second, oracle_options());
  CHECK(counting_second.calls() == 0);
  CHECK(cached_second.cache().stats().hits == first_calls);

  // cache transparency: identical scores either way
  CHECK(nlohmann::json(first.corpus_scores.rows) == nlohmann::json(second.corpus_scores.rows));
}

TEST_CASE("standardize-reference pass keeps dated events and stays deterministic") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  OracleBackend oracle;
  auto options = oracle_options();
  options.standardize_reference = true;
  auto a = evaluate_corpus(cases, oracle, options);
  auto b = evaluate_corpus(cases, oracle, options);
  CHECK(nlohmann::json(a.corpus_scores.rows) == nlohmann::json(b.corpus_scores.rows));
  CHECK(row(a.corpus_scores, Stratum::Overall).r_support > 0);
}

TEST_CASE("report renders the stratified table and per-patient rows") {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  OracleBackend oracle;
  auto result = evaluate_corpus(cases, oracle, oracle_options());
  auto md = render_report_markdown(result);
  CHECK(md.find("| Importance | Precision | Recall | F1 | p_support | r_support |") !=
        std::string::npos);
  CHECK(md.find("| High | ") != std::string::npos);
  CHECK(md.find("| p01 | ") != std::string::npos);
  CHECK(md.find("Omissions") != std::string::npos);
  CHECK(md.find("0.840") != std::string::npos);
}
