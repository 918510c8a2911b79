// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code 0 only when all pass.

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "tbfact/cache.hpp"
#include "tbfact/pipeline.hpp"
#include "tbfact/remote.hpp"

using namespace tbfact;

namespace {

int g_failures = 0;

struct Criterion {
  std::string detail;
  bool ok = true;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

void run_criterion(int number, const std::string& title,
                   const std::function<void(Criterion&)>& body, long max_ms = 0) {
  Criterion c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  if (max_ms > 0 && ms > max_ms) {
    c.ok = false;
    if (!c.detail.empty()) c.detail += "; ";
    c.detail += "runtime " + std::to_string(ms) + " ms exceeds " + std::to_string(max_ms) + " ms";
  }
  std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " ["
            << ms << " ms]";
  if (!c.ok) std::cout << " -- " << c.detail;
  std::cout << "\n";
  if (!c.ok) ++g_failures;
}

std::filesystem::path fixture_dir() { return std::filesystem::path(TBFACT_FIXTURE_DIR); }

std::filesystem::path make_temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("tbfact-acceptance-" + tag + "-" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  return dir;
}

// --- shared random fixtures --------------------------------------------

JudgedClaim random_judged(std::mt19937& rng, const std::string& id, ClaimSource source) {
  std::uniform_int_distribution<int> label_dist(0, 2);
  std::uniform_int_distribution<int> importance_dist(0, 2);
  JudgedClaim jc;
  jc.claim.id = id;
  jc.claim.text = "claim " + id;
  jc.claim.source = source;
  jc.claim.patient_id = "p";
  jc.claim.importance = static_cast<ImportanceLevel>(importance_dist(rng));
  jc.judgment.claim_id = id;
  jc.judgment.target = source == ClaimSource::Candidate ? "reference_summary" : "candidate_summary";
  jc.judgment.label = static_cast<EntailmentLabel>(label_dist(rng));
  jc.judgment.rationale = "r";
  jc.judgment.judge_id = "test";
  return jc;
}

BidirectionalJudgments random_judgments(std::mt19937& rng, int max_per_side = 20) {
  std::uniform_int_distribution<int> count_dist(0, max_per_side);
  BidirectionalJudgments out;
  int n_cand = count_dist(rng);
  int n_ref = count_dist(rng);
  for (int i = 0; i < n_cand; ++i) {
    out.candidate_side.push_back(random_judged(rng, "c" + std::to_string(i), ClaimSource::Candidate));
  }
  for (int i = 0; i < n_ref; ++i) {
    out.reference_side.push_back(random_judged(rng, "r" + std::to_string(i), ClaimSource::Reference));
  }
  return out;
}

double naive_credit(EntailmentLabel label, const ScoringConfig& cfg) {
  if (label == EntailmentLabel::Full) return 1.0;
  if (label == EntailmentLabel::None) return 0.0;
  if (cfg.mode == ScoringMode::StrictFullOnly) return 0.0;
  if (cfg.mode == ScoringMode::Lenient) return 1.0;
  return cfg.partial_credit;
}

bool in_stratum(const JudgedClaim& jc, Stratum s) {
  if (s == Stratum::Overall) return true;
  if (!jc.claim.importance) return false;
  switch (s) {
    case Stratum::High: return *jc.claim.importance == ImportanceLevel::High;
    case Stratum::Medium: return *jc.claim.importance == ImportanceLevel::Medium;
    case Stratum::Low: return *jc.claim.importance == ImportanceLevel::Low;
    case Stratum::Overall: return true;
  }
  return false;
}

// --- criterion bodies ---------------------------------------------------

void criterion_f1(Criterion& c) {
  struct Row {
    double p, r, f1;
  };
  const Row rows[] = {{0.446, 0.711, 0.548}, {0.616, 0.838, 0.710},
                      {0.289, 0.644, 0.399}, {0.200, 0.422, 0.272}};
  for (const auto& row : rows) {
    double computed = f1_of(row.p, row.r);
    std::ostringstream what;
    what << "f1(" << row.p << "," << row.r << ")=" << computed << " expected " << row.f1;
    c.require(std::abs(computed - row.f1) <= 0.001, what.str());
  }
}

int run_cli(const std::string& args, std::string* captured = nullptr) {
  const char* cli = std::getenv("TBFACT_CLI");
  if (!cli) return -1;
  std::string cmd = std::string(cli) + " " + args + " >/tmp/tbfact-cli-out.txt 2>&1";
  int rc = std::system(cmd.c_str());
  if (captured) *captured = read_file("/tmp/tbfact-cli-out.txt");
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

void criterion_determinism(Criterion& c) {
  auto corpus = fixture_dir() / "corpus.jsonl";
  auto dir = make_temp_dir("det");
  const bool have_cli = std::getenv("TBFACT_CLI") != nullptr;
  if (have_cli) {
    for (const char* tag : {"a", "b"}) {
      int rc = run_cli("evaluate --corpus " + corpus.string() + " --backend oracle --out " +
                       (dir / tag).string());
      c.require(rc == 0, std::string("evaluate run ") + tag + " exited " + std::to_string(rc));
    }
  } else {
    auto cases = load_corpus(corpus);
    OracleBackend oracle;
    EvaluateOptions options;
    options.corpus_path = corpus.string();
    write_run_result(evaluate_corpus(cases, oracle, options), dir / "a");
    write_run_result(evaluate_corpus(cases, oracle, options), dir / "b");
  }
  for (const char* name : {"scores.json", "claims.jsonl", "judgments.jsonl"}) {
    c.require(sha256_hex(read_file(dir / "a" / name)) == sha256_hex(read_file(dir / "b" / name)),
              std::string(name) + " differs between runs");
  }
  std::filesystem::remove_all(dir);
}

void criterion_metric_properties(Criterion& c) {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> mode_dist(0, 2);
  std::uniform_real_distribution<double> credit_dist(0.0, 1.0);
  int violations = 0;

  for (int round = 0; round < 1000; ++round) {
    auto j = random_judgments(rng);
    ScoringConfig cfg;
    cfg.mode = static_cast<ScoringMode>(mode_dist(rng));
    cfg.partial_credit = credit_dist(rng);
    auto scores = aggregate(j, cfg);

    // brute-force equivalence + stratification sums
    double strata_p = 0, strata_r = 0, overall_p_num = 0, overall_r_num = 0;
    for (const auto& s : scores) {
      double p_sum = 0, r_sum = 0;
      long p_n = 0, r_n = 0;
      for (const auto& jc : j.candidate_side) {
        if (!in_stratum(jc, s.stratum)) continue;
        p_sum += naive_credit(jc.judgment.label, cfg);
        ++p_n;
      }
      for (const auto& jc : j.reference_side) {
        if (!in_stratum(jc, s.stratum)) continue;
        r_sum += naive_credit(jc.judgment.label, cfg);
        ++r_n;
      }
      if (s.p_support != p_n || s.r_support != r_n) ++violations;
      if (s.precision && std::abs(*s.precision - p_sum / p_n) > 1e-12) ++violations;
      if (s.recall && std::abs(*s.recall - r_sum / r_n) > 1e-12) ++violations;
      if (s.stratum == Stratum::Overall) {
        overall_p_num = p_sum;
        overall_r_num = r_sum;
      } else {
        strata_p += p_sum;
        strata_r += r_sum;
      }
    }
    if (std::abs(overall_p_num - strata_p) > 1e-9) ++violations;
    if (std::abs(overall_r_num - strata_r) > 1e-9) ++violations;

    // mode ordering
    ScoringConfig strict = cfg, dflt = cfg, lenient = cfg;
    strict.mode = ScoringMode::StrictFullOnly;
    dflt.mode = ScoringMode::Default;
    lenient.mode = ScoringMode::Lenient;
    auto s1 = aggregate(j, strict);
    auto s2 = aggregate(j, dflt);
    auto s3 = aggregate(j, lenient);
    for (std::size_t i = 0; i < s1.size(); ++i) {
      if (s1[i].recall && (*s1[i].recall > *s2[i].recall + 1e-12 ||
                           *s2[i].recall > *s3[i].recall + 1e-12)) {
        ++violations;
      }
      if (s1[i].precision && (*s1[i].precision > *s2[i].precision + 1e-12 ||
                              *s2[i].precision > *s3[i].precision + 1e-12)) {
        ++violations;
      }
    }

    // monotone under a single upgrade
    std::size_t total = j.candidate_side.size() + j.reference_side.size();
    if (total > 0) {
      std::uniform_int_distribution<std::size_t> pick(0, total - 1);
      std::size_t at = pick(rng);
      auto& jc = at < j.candidate_side.size() ? j.candidate_side[at]
                                              : j.reference_side[at - j.candidate_side.size()];
      if (jc.judgment.label != EntailmentLabel::Full) {
        auto before = aggregate(j, cfg);
        jc.judgment.label = jc.judgment.label == EntailmentLabel::None ? EntailmentLabel::Partial
                                                                       : EntailmentLabel::Full;
        auto after = aggregate(j, cfg);
        for (std::size_t i = 0; i < before.size(); ++i) {
          if (before[i].precision && *after[i].precision < *before[i].precision - 1e-12) ++violations;
          if (before[i].recall && *after[i].recall < *before[i].recall - 1e-12) ++violations;
          if (before[i].f1 && *after[i].f1 < *before[i].f1 - 1e-12) ++violations;
        }
      }
    }
  }
  c.require(violations == 0, std::to_string(violations) + " metric property violations");
}

void criterion_filtering_properties(Criterion& c) {
  std::mt19937 rng(4321);
  OracleBackend oracle;
  const char* kTerms[] = {"craniotomy", "lomustine", "fatigue", "progression", "resection",
                          "carboplatin", "uptake", "thrombocytopenia", "margin", "nodule"};
  int violations = 0;

  for (int round = 0; round < 500; ++round) {
    std::uniform_int_distribution<int> n_facts(1, 8), n_notes(0, 5), n_words(1, 4), term(0, 9);
    std::vector<ClinicalClaim> facts;
    int nf = n_facts(rng);
    for (int i = 0; i < nf; ++i) {
      std::string text;
      for (int w = 0, words = n_words(rng); w < words; ++w) {
        if (!text.empty()) text += " ";
        text += kTerms[term(rng)];
      }
      ClinicalClaim claim;
      claim.id = "f" + std::to_string(i);
      claim.text = text;
      claim.source = ClaimSource::Reference;
      claim.importance = ImportanceLevel::Medium;
      facts.push_back(claim);
    }
    std::vector<Note> notes;
    for (int i = 0, nn = n_notes(rng); i < nn; ++i) {
      std::string text = "note:";
      for (int w = 0, words = n_words(rng) + 1; w < words; ++w) {
        text += std::string(" ") + kTerms[term(rng)];
      }
      notes.push_back({"n" + std::to_string(i), text});
    }

    auto mask_of = [&](const FilterReport& report) {
      std::vector<bool> mask;
      for (const auto& f : facts) {
        bool retained = false;
        for (const auto& kept : report.retained) retained |= kept.id == f.id;
        mask.push_back(retained);
      }
      return mask;
    };

    FilterOptions early, literal;
    early.early_exit = true;
    literal.early_exit = false;

    auto base = mask_of(filter_verifiable(facts, notes, oracle, early));

    // permutation invariance
    auto shuffled = notes;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    if (mask_of(filter_verifiable(facts, shuffled, oracle, early)) != base) ++violations;

    // note-addition monotonicity
    auto grown = notes;
    grown.push_back({"extra", std::string("note: ") + kTerms[term(rng)]});
    auto grown_mask = mask_of(filter_verifiable(facts, grown, oracle, early));
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (base[i] && !grown_mask[i]) ++violations;
    }

    // early-exit output equivalence
    if (mask_of(filter_verifiable(facts, notes, oracle, literal)) != base) ++violations;
  }
  c.require(violations == 0, std::to_string(violations) + " filtering property violations");
}

// Scripted chat endpoint for the prompt-contract check.
class StubServer {
 public:
  explicit StubServer(std::function<std::string(const std::string&)> responder)
      : responder_(std::move(responder)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = nlohmann::json::parse(req.body);
      std::string prompt = body.at("messages").at(0).at("content").get<std::string>();
      nlohmann::json envelope = {
          {"choices", {{{"message", {{"role", "assistant"}, {"content", responder_(prompt)}}}}}}};
      res.set_content(envelope.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::function<std::string(const std::string&)> responder_;
  int port_ = 0;
  std::thread thread_;
};

void criterion_qualitative_trio(Criterion& c) {
  // the three qualitative claim/reference pairs, via the remote prompt contract
  StubServer server([](const std::string& prompt) {
    nlohmann::json labels = nlohmann::json::array();
    std::istringstream lines(prompt);
    std::string line;
    bool in_facts = false;
    while (std::getline(lines, line)) {
      if (line.rfind("Facts:", 0) == 0) {
        in_facts = true;
        continue;
      }
      if (!in_facts || line.empty()) continue;
      if (line.find("Molecular studies") != std::string::npos) {
        labels.push_back({{"label", "Yes"},
                          {"rationale", "The summary lists the same genetics findings."}});
      } else if (line.find("Immunohistochemistry") != std::string::npos) {
        labels.push_back({{"label", "Partial"},
                          {"rationale", "Some IHC findings match but others are not mentioned."}});
      } else if (line.find("plan was to continue") != std::string::npos) {
        labels.push_back({{"label", "No"}, {"rationale", "No mention of such a plan."}});
      }
    }
    return nlohmann::json{{"labels", labels}}.dump();
  });
  RemoteConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.model = "stub-model";
  cfg.max_attempts = 2;
  RemoteBackend remote(cfg);

  std::vector<std::string> facts = {
      "Molecular studies from the 2019-05-18 surgery identified TERT promoter mutation, PTEN "
      "mutation, EGFR amplification, CDKN2A/B deletion, monosomy 10, and trisomy 7.",
      "Immunohistochemistry from 2019-05-18 showed GFAP positive, BRAF V600E negative, IDH1 "
      "R132H negative, ATRX retained, p53 negative, and a Ki-67 index of 3%.",
      "On 2020-05-16, the plan was to continue CCNU and monitor with imaging.",
  };
  auto verdicts = judge_entailment(
      facts,
      "Tumor Genetics: EGFR amplified, CDKN2A/B deleted, PTEN mutated, TERT mutated, monosomy "
      "10, trisomy 7. IDH1 wildtype, BRAF V600E negative. Timeline: 05/18/2019 diagnosis of "
      "multifocal glioblastoma.",
      remote);
  c.require(verdicts.size() == 3, "remote trio cardinality");
  c.require(verdicts[0].first == EntailmentLabel::Full, "remote genetics claim not Full");
  c.require(verdicts[1].first == EntailmentLabel::Partial, "remote IHC claim not Partial");
  c.require(verdicts[2].first == EntailmentLabel::None, "remote plan claim not None");

  // designed-equivalent lexical fixtures under the oracle
  std::string reference =
      "Molecular studies from the 2019-05-18 surgery identified TERT promoter mutation, PTEN "
      "mutation, EGFR amplification, CDKN2A/B deletion, monosomy 10, and trisomy 7. "
      "Tumor genetics otherwise: IDH1 wildtype and BRAF V600E negative.";
  c.require(oracle_entailment(facts[0], reference) == EntailmentLabel::Full,
            "oracle genetics claim not Full");
  c.require(oracle_entailment("IHC on 05/18/2019 showed BRAF V600E negative, IDH1 R132H "
                              "negative, p53 negative.",
                              "Tumor Genetics: IDH1: Wildtype; BRAF V600E: Negative. Timeline: "
                              "05/18/2019: Diagnosis of multifocal glioblastoma.") ==
                EntailmentLabel::Partial,
            "oracle IHC claim not Partial");
  c.require(oracle_entailment("On 2020-05-16, the plan was to continue CCNU and monitor with "
                              "imaging.",
                              "The visit covered adjuvant radiotherapy scheduling and family "
                              "support resources.") == EntailmentLabel::None,
            "oracle plan claim not None");
}

void criterion_ledger_conservation(Criterion& c) {
  std::mt19937 rng(77);
  int violations = 0;
  for (int round = 0; round < 500; ++round) {
    auto j = random_judgments(rng);
    auto ledger = attribute_errors(j);
    std::size_t ref_full = 0, cand_full = 0;
    for (const auto& jc : j.reference_side) {
      if (jc.judgment.label == EntailmentLabel::Full) ++ref_full;
    }
    for (const auto& jc : j.candidate_side) {
      if (jc.judgment.label == EntailmentLabel::Full) ++cand_full;
    }
    if (ledger.omissions.size() + ledger.partial_omissions.size() + ref_full !=
        j.reference_side.size()) {
      ++violations;
    }
    if (ledger.unsupported.size() + ledger.partially_supported.size() + cand_full !=
        j.candidate_side.size()) {
      ++violations;
    }
  }

  // and on the shipped corpus via the full pipeline
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  OracleBackend oracle;
  EvaluateOptions options;
  auto result = evaluate_corpus(cases, oracle, options);
  for (const auto& ev : result.patients) {
    std::size_t ref_full = 0, cand_full = 0;
    for (const auto& jc : ev.judgments.reference_side) {
      if (jc.judgment.label == EntailmentLabel::Full) ++ref_full;
    }
    for (const auto& jc : ev.judgments.candidate_side) {
      if (jc.judgment.label == EntailmentLabel::Full) ++cand_full;
    }
    if (ev.ledger.omissions.size() + ev.ledger.partial_omissions.size() + ref_full !=
        ev.judgments.reference_side.size()) {
      ++violations;
    }
    if (ev.ledger.unsupported.size() + ev.ledger.partially_supported.size() + cand_full !=
        ev.judgments.candidate_side.size()) {
      ++violations;
    }
  }
  c.require(violations == 0, std::to_string(violations) + " conservation violations");
}

void criterion_agreement(Criterion& c) {
  // percent 0.75 / kappa 7/11 hand case
  auto report = pairwise_agreement({"High", "High", "Medium", "Low"},
                                   {"High", "Medium", "Medium", "Low"}, AnnotationTask::Importance);
  c.require(std::abs(report.percent_agreement - 0.75) <= 1e-9, "percent agreement != 0.75");
  c.require(report.kappa && std::abs(*report.kappa - 0.4375 / 0.6875) <= 1e-9, "kappa != 0.636...");
  c.require(report.adjacent_agreement && std::abs(*report.adjacent_agreement - 1.0) <= 1e-9,
            "adjacent != 1.0");

  // Kendall 2/3 and Spearman 0.8 hand case
  std::vector<double> x = {1, 2, 3, 4}, y = {1, 3, 2, 4};
  auto corr = rank_correlations(x, y);
  c.require(corr.kendall_tau && std::abs(*corr.kendall_tau - 2.0 / 3.0) <= 1e-9, "kendall != 2/3");
  c.require(corr.spearman_rho && std::abs(*corr.spearman_rho - 0.8) <= 1e-9, "spearman != 0.8");

  // perfect and inverted monotone cases
  std::vector<double> up = {1, 2, 3}, down = {3, 2, 1};
  auto perfect = rank_correlations(up, up);
  auto inverted = rank_correlations(up, down);
  for (auto v : {*perfect.kendall_tau, *perfect.pearson_r, *perfect.spearman_rho}) {
    c.require(std::abs(v - 1.0) <= 1e-9, "perfect monotone correlation != 1");
  }
  for (auto v : {*inverted.kendall_tau, *inverted.pearson_r, *inverted.spearman_rho}) {
    c.require(std::abs(v + 1.0) <= 1e-9, "inverted correlation != -1");
  }

  // affine / monotone invariance properties
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> value(-10.0, 10.0), scale(0.2, 5.0), shift(-4.0, 4.0);
  int violations = 0;
  for (int round = 0; round < 300; ++round) {
    std::uniform_int_distribution<int> n_dist(3, 25);
    int n = n_dist(rng);
    std::vector<double> vx(n), vy(n), affine(n), monotone(n);
    for (int i = 0; i < n; ++i) {
      vx[i] = value(rng);
      vy[i] = value(rng);
    }
    auto base = rank_correlations(vx, vy);
    if (base.degenerate) continue;
    double a = scale(rng), b = shift(rng);
    for (int i = 0; i < n; ++i) {
      affine[i] = a * vy[i] + b;
      monotone[i] = std::exp(vy[i] / 4.0);
    }
    auto got_affine = rank_correlations(vx, affine);
    auto got_monotone = rank_correlations(vx, monotone);
    if (std::abs(*got_affine.pearson_r - *base.pearson_r) > 1e-9) ++violations;
    if (std::abs(*got_affine.kendall_tau - *base.kendall_tau) > 1e-9) ++violations;
    if (std::abs(*got_affine.spearman_rho - *base.spearman_rho) > 1e-9) ++violations;
    if (std::abs(*got_monotone.kendall_tau - *base.kendall_tau) > 1e-9) ++violations;
    if (std::abs(*got_monotone.spearman_rho - *base.spearman_rho) > 1e-9) ++violations;
  }
  c.require(violations == 0, std::to_string(violations) + " invariance violations");
}

void criterion_compare(Criterion& c) {
  auto dir = make_temp_dir("compare");
  nlohmann::json config = ScoringConfig{};
  auto score_file = [&](const char* name, double overall_recall, double high_recall) {
    nlohmann::json j = {
        {"config", config},
        {"micro",
         {{{"stratum", "Overall"}, {"recall", overall_recall}, {"p_support", 0}, {"r_support", 100}},
          {{"stratum", "High"}, {"recall", high_recall}, {"p_support", 0}, {"r_support", 50}}}},
    };
    auto path = dir / name;
    write_file_atomic(path, j.dump(2));
    return path;
  };
  auto path_a = score_file("generic.json", 0.56, 0.66);
  auto path_b = score_file("specialized.json", 0.71, 0.84);

  auto load = [](const std::filesystem::path& p) {
    auto j = nlohmann::json::parse(read_file(p));
    RunScores scores;
    scores.config = j.at("config").get<ScoringConfig>();
    scores.rows = j.at("micro").get<std::vector<TbfactScore>>();
    return scores;
  };
  auto report = compare_runs(load(path_a), load(path_b));
  c.require(report.deltas.size() == 2, "expected two strata");
  c.require(report.deltas[0].d_recall && std::abs(*report.deltas[0].d_recall - 0.15) < 1e-12,
            "overall recall delta != +0.15");
  c.require(report.deltas[1].d_recall && std::abs(*report.deltas[1].d_recall - 0.18) < 1e-12,
            "high recall delta != +0.18");
  c.require(report.markdown.find("+0.150") != std::string::npos, "markdown missing +0.150");
  c.require(report.markdown.find("+0.180") != std::string::npos, "markdown missing +0.180");

  // the CLI surface agrees
  std::string out;
  if (std::getenv("TBFACT_CLI")) {
    int rc = run_cli("compare " + path_a.string() + " " + path_b.string(), &out);
    c.require(rc == 0, "compare exited " + std::to_string(rc));
    c.require(out.find("+0.150") != std::string::npos && out.find("+0.180") != std::string::npos,
              "CLI compare output missing deltas");
  }
  std::filesystem::remove_all(dir);
}

void criterion_empty_stratum(Criterion& c) {
  auto corpus = fixture_dir() / "corpus_no_medium.jsonl";
  auto dir = make_temp_dir("nomedium");
  if (std::getenv("TBFACT_CLI")) {
    int rc = run_cli("evaluate --corpus " + corpus.string() + " --backend oracle --out " +
                     dir.string());
    c.require(rc == 0, "evaluate exited " + std::to_string(rc));
  } else {
    auto cases = load_corpus(corpus);
    OracleBackend oracle;
    EvaluateOptions options;
    write_run_result(evaluate_corpus(cases, oracle, options), dir);
  }
  auto scores = nlohmann::json::parse(read_file(dir / "scores.json"));
  bool has_medium = false, has_high = false;
  for (const auto& s : scores.at("micro")) {
    if (s.at("stratum") == "Medium") has_medium = true;
    if (s.at("stratum") == "High") has_high = true;
  }
  c.require(!has_medium, "Medium row present in scores.json");
  c.require(has_high, "High row missing from scores.json");
  std::filesystem::remove_all(dir);
}

void criterion_cache(Criterion& c) {
  auto cases = load_corpus(fixture_dir() / "corpus.jsonl");
  auto dir = make_temp_dir("cache");
  OracleBackend oracle;
  EvaluateOptions options;

  CountingBackend first_counter(oracle);
  CachingBackend first_cache(first_counter, dir);
  evaluate_corpus(cases, first_cache, options);
  std::size_t first_calls = first_counter.calls();
  c.require(first_calls > 0, "first run made no judge calls");

  CountingBackend second_counter(oracle);
  CachingBackend second_cache(second_counter, dir);
  evaluate_corpus(cases, second_cache, options);
  c.require(second_counter.calls() == 0,
            "second run invoked the backend " + std::to_string(second_counter.calls()) +
                " times");
  c.require(second_cache.cache().stats().hits == first_calls,
            "second-run hit count != first-run call count");
  std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
  run_criterion(1, "F1 harmonic-mean consistency on fixed (P,R,F1) rows (+-0.001)",
                criterion_f1, 1000);
  run_criterion(2, "oracle end-to-end determinism (byte-identical artifacts)",
                criterion_determinism, 10000);
  run_criterion(3, "metric properties on 1000 random fixtures", criterion_metric_properties);
  run_criterion(4, "support-filtering properties on 500 random fixtures",
                criterion_filtering_properties);
  run_criterion(5, "qualitative entailment trio: Full/Partial/None under both backends",
                criterion_qualitative_trio);
  run_criterion(6, "error-ledger conservation", criterion_ledger_conservation);
  run_criterion(7, "agreement statistics: hand cases (+-1e-9) and invariance properties",
                criterion_agreement);
  run_criterion(8, "compare deltas +0.15 / +0.18", criterion_compare);
  run_criterion(9, "empty stratum reported absent with exit code 0", criterion_empty_stratum);
  run_criterion(10, "cache contract: zero backend calls on the second run", criterion_cache);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
