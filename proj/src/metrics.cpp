#include "tbfact/metrics.hpp"

#include <array>
#include <cstdio>

namespace tbfact {

const char* to_string(Stratum s) {
  switch (s) {
    case Stratum::Overall: return "Overall";
    case Stratum::High: return "High";
    case Stratum::Medium: return "Medium";
    case Stratum::Low: return "Low";
  }
  return "Overall";
}

Stratum stratum_from_string(std::string_view s) {
  if (s == "Overall") return Stratum::Overall;
  if (s == "High") return Stratum::High;
  if (s == "Medium") return Stratum::Medium;
  if (s == "Low") return Stratum::Low;
  throw UnknownLabel("unknown stratum: " + std::string(s));
}

Stratum stratum_of(ImportanceLevel l) {
  switch (l) {
    case ImportanceLevel::High: return Stratum::High;
    case ImportanceLevel::Medium: return Stratum::Medium;
    case ImportanceLevel::Low: return Stratum::Low;
  }
  return Stratum::Low;
}

double f1_of(double precision, double recall) {
  double sum = precision + recall;
  if (sum <= 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

namespace {

struct Bucket {
  double p_credit = 0.0;
  double r_credit = 0.0;
  std::int64_t p_support = 0;
  std::int64_t r_support = 0;
};

constexpr std::array<Stratum, 4> kStrataOrder = {Stratum::Overall, Stratum::High,
                                                 Stratum::Medium, Stratum::Low};

std::size_t bucket_index(Stratum s) {
  switch (s) {
    case Stratum::Overall: return 0;
    case Stratum::High: return 1;
    case Stratum::Medium: return 2;
    case Stratum::Low: return 3;
  }
  return 0;
}

std::string fmt3(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

}  // namespace

std::vector<TbfactScore> aggregate(const BidirectionalJudgments& judgments,
                                   const ScoringConfig& config) {
  std::array<Bucket, 4> buckets{};

  auto add = [&](const JudgedClaim& jc, bool candidate_side) {
    if (config.stratify_by_importance && !jc.claim.importance.has_value()) {
      throw std::invalid_argument("aggregate: claim '" + jc.claim.id +
                                  "' has no importance label");
    }
    double credit = credit_of(jc.judgment.label, config);
    auto apply = [&](Bucket& b) {
      if (candidate_side) {
        b.p_credit += credit;
        b.p_support += 1;
      } else {
        b.r_credit += credit;
        b.r_support += 1;
      }
    };
    apply(buckets[0]);
    if (config.stratify_by_importance) {
      apply(buckets[bucket_index(stratum_of(*jc.claim.importance))]);
    }
  };

  for (const auto& jc : judgments.candidate_side) add(jc, true);
  for (const auto& jc : judgments.reference_side) add(jc, false);

  std::vector<TbfactScore> scores;
  for (Stratum s : kStrataOrder) {
    if (!config.stratify_by_importance && s != Stratum::Overall) break;
    const Bucket& b = buckets[bucket_index(s)];
    if (s != Stratum::Overall && b.p_support == 0 && b.r_support == 0) continue;

    TbfactScore score;
    score.stratum = s;
    score.config = config;
    score.p_support = b.p_support;
    score.r_support = b.r_support;
    if (b.p_support > 0) score.precision = b.p_credit / static_cast<double>(b.p_support);
    if (b.r_support > 0) score.recall = b.r_credit / static_cast<double>(b.r_support);
    if (score.precision && score.recall) score.f1 = f1_of(*score.precision, *score.recall);
    scores.push_back(score);
  }
  return scores;
}

const TbfactScore* RunScores::find(Stratum s) const {
  for (const auto& row : rows) {
    if (row.stratum == s) return &row;
  }
  return nullptr;
}

CompareReport compare_runs(const RunScores& a, const RunScores& b) {
  if (!(a.config == b.config)) {
    throw ConfigMismatch("compare_runs: scoring configs differ");
  }
  if (a.rows.size() != b.rows.size()) {
    throw ConfigMismatch("compare_runs: strata differ between runs");
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].stratum != b.rows[i].stratum) {
      throw ConfigMismatch("compare_runs: strata differ between runs");
    }
  }

  CompareReport report;
  std::string md = "| Importance | dRecall | dPrecision | dF1 |\n|---|---|---|---|\n";
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const TbfactScore& ra = a.rows[i];
    const TbfactScore& rb = b.rows[i];
    ScoreDelta d;
    d.stratum = ra.stratum;
    auto diff = [](const std::optional<double>& x,
                   const std::optional<double>& y) -> std::optional<double> {
      if (x && y) return *y - *x;
      return std::nullopt;
    };
    d.d_recall = diff(ra.recall, rb.recall);
    d.d_precision = diff(ra.precision, rb.precision);
    d.d_f1 = diff(ra.f1, rb.f1);

    auto fmt_delta = [](const std::optional<double>& v) -> std::string {
      if (!v) return "-";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%+.3f", *v);
      return buf;
    };
    md += "| " + std::string(to_string(d.stratum)) + " | " + fmt_delta(d.d_recall) + " | " +
          fmt_delta(d.d_precision) + " | " + fmt_delta(d.d_f1) + " |\n";
    report.deltas.push_back(d);
  }
  report.markdown = std::move(md);
  return report;
}

std::string render_scores_markdown(const std::vector<TbfactScore>& rows) {
  std::string md =
      "| Importance | Precision | Recall | F1 | p_support | r_support |\n"
      "|---|---|---|---|---|---|\n";
  for (const auto& row : rows) {
    md += "| " + std::string(to_string(row.stratum)) + " | " + fmt3(row.precision) + " | " +
          fmt3(row.recall) + " | " + fmt3(row.f1) + " | " + std::to_string(row.p_support) +
          " | " + std::to_string(row.r_support) + " |\n";
  }
  return md;
}

}  // namespace tbfact
