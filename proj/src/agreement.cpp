#include "tbfact/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace tbfact {

const char* to_string(AnnotationTask t) {
  switch (t) {
    case AnnotationTask::ExtractionValidity: return "ExtractionValidity";
    case AnnotationTask::Importance: return "Importance";
    case AnnotationTask::Entailment: return "Entailment";
  }
  return "Entailment";
}

AnnotationTask annotation_task_from_string(std::string_view s) {
  if (s == "ExtractionValidity") return AnnotationTask::ExtractionValidity;
  if (s == "Importance") return AnnotationTask::Importance;
  if (s == "Entailment") return AnnotationTask::Entailment;
  throw UnknownLabel("unknown annotation task: " + std::string(s));
}

const std::vector<std::string>& task_labels(AnnotationTask t) {
  static const std::vector<std::string> kValidity = {"Valid", "Invalid"};
  static const std::vector<std::string> kImportance = {"High", "Medium", "Low"};
  static const std::vector<std::string> kEntailment = {"Full", "Partial", "None"};
  switch (t) {
    case AnnotationTask::ExtractionValidity: return kValidity;
    case AnnotationTask::Importance: return kImportance;
    case AnnotationTask::Entailment: return kEntailment;
  }
  return kEntailment;
}

namespace {

int importance_ordinal(const std::string& label) {
  if (label == "High") return 2;
  if (label == "Medium") return 1;
  return 0;  // Low
}

void check_labels(const std::vector<std::string>& v, AnnotationTask task) {
  const auto& allowed = task_labels(task);
  for (const auto& label : v) {
    if (std::find(allowed.begin(), allowed.end(), label) == allowed.end()) {
      throw UnknownLabel("label '" + label + "' not valid for task " +
                         std::string(to_string(task)));
    }
  }
}

}  // namespace

AgreementReport pairwise_agreement(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b, AnnotationTask task) {
  if (a.size() != b.size()) {
    throw LengthMismatch("pairwise_agreement: label vectors differ in length");
  }
  if (a.empty()) throw LengthMismatch("pairwise_agreement: label vectors are empty");
  check_labels(a, task);
  check_labels(b, task);

  const double n = static_cast<double>(a.size());
  std::size_t matches = 0;
  std::map<std::string, double> marg_a, marg_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++matches;
    marg_a[a[i]] += 1.0;
    marg_b[b[i]] += 1.0;
  }

  AgreementReport report;
  report.task = task;
  report.n_items = a.size();
  report.percent_agreement = static_cast<double>(matches) / n;

  double pe = 0.0;
  for (const auto& [label, count] : marg_a) {
    auto it = marg_b.find(label);
    if (it != marg_b.end()) pe += (count / n) * (it->second / n);
  }
  if (pe < 1.0) {
    report.kappa = (report.percent_agreement - pe) / (1.0 - pe);
  }

  if (task == AnnotationTask::Importance) {
    std::size_t adjacent = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(importance_ordinal(a[i]) - importance_ordinal(b[i])) <= 1) ++adjacent;
    }
    report.adjacent_agreement = static_cast<double>(adjacent) / n;
  }
  return report;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = x[i] - x[j];
      double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
  double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                 std::sqrt(static_cast<double>(n0 - ties_y));
  if (denom <= 0.0) return std::nullopt;
  return static_cast<double>(concordant - discordant) / denom;
}

}  // namespace

CorrelationReport rank_correlations(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw LengthMismatch("rank_correlations: input vectors differ in length");
  }
  if (x.size() < 2) {
    throw LengthMismatch("rank_correlations: need at least two points");
  }

  CorrelationReport report;
  report.n = x.size();
  report.pearson_r = pearson(x, y);
  report.kendall_tau = kendall_tau_b(x, y);
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  report.spearman_rho = pearson(rx, ry);
  report.degenerate = !report.pearson_r.has_value() || !report.kendall_tau.has_value() ||
                      !report.spearman_rho.has_value();
  if (report.degenerate) {
    report.pearson_r.reset();
    report.kendall_tau.reset();
    report.spearman_rho.reset();
  }
  return report;
}

}  // namespace tbfact
