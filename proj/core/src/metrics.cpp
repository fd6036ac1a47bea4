#include "mvmr/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace mvmr {

namespace {

// Indices sorted by score descending; equal scores keep original index order.
std::vector<Index> ranking(const Vector& scores) {
  std::vector<Index> order(static_cast<size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

std::optional<double> average_precision_11pt(const Vector& scores, const Vector& truth) {
  if (scores.size() != truth.size()) {
    throw std::invalid_argument("scores and truth have different lengths");
  }
  const Index m = scores.size();
  Index positives = 0;
  for (Index i = 0; i < m; ++i) {
    if (truth[i] > 0.0) ++positives;
  }
  if (positives == 0) return std::nullopt;

  const auto order = ranking(scores);
  std::vector<double> precision(static_cast<size_t>(m));
  std::vector<double> recall(static_cast<size_t>(m));
  Index hits = 0;
  for (Index rank = 0; rank < m; ++rank) {
    if (truth[order[static_cast<size_t>(rank)]] > 0.0) ++hits;
    precision[static_cast<size_t>(rank)] =
        static_cast<double>(hits) / static_cast<double>(rank + 1);
    recall[static_cast<size_t>(rank)] =
        static_cast<double>(hits) / static_cast<double>(positives);
  }

  double total = 0.0;
  for (int r = 0; r <= 10; ++r) {
    const double level = static_cast<double>(r) / 10.0;
    double best = 0.0;
    for (Index rank = 0; rank < m; ++rank) {
      if (recall[static_cast<size_t>(rank)] >= level - 1e-12) {
        best = std::max(best, precision[static_cast<size_t>(rank)]);
      }
    }
    total += best;
  }
  return total / 11.0;
}

std::vector<PrPoint> pr_curve(const Vector& scores, const Vector& truth) {
  if (scores.size() != truth.size()) {
    throw std::invalid_argument("scores and truth have different lengths");
  }
  Index positives = 0;
  for (Index i = 0; i < truth.size(); ++i) {
    if (truth[i] > 0.0) ++positives;
  }
  std::vector<PrPoint> points;
  if (positives == 0) return points;

  const auto order = ranking(scores);
  Index hits = 0;
  for (Index rank = 0; rank < scores.size(); ++rank) {
    if (truth[order[static_cast<size_t>(rank)]] > 0.0) ++hits;
    points.push_back({static_cast<double>(hits) / static_cast<double>(positives),
                      static_cast<double>(hits) / static_cast<double>(rank + 1)});
  }
  return points;
}

std::optional<double> auc(const Vector& scores, const Vector& truth) {
  if (scores.size() != truth.size()) {
    throw std::invalid_argument("scores and truth have different lengths");
  }
  Index pos = 0, neg = 0;
  for (Index i = 0; i < truth.size(); ++i) {
    if (truth[i] > 0.0) ++pos;
    else ++neg;
  }
  if (pos == 0 || neg == 0) return std::nullopt;

  double credit = 0.0;
  for (Index i = 0; i < truth.size(); ++i) {
    if (truth[i] <= 0.0) continue;
    for (Index j = 0; j < truth.size(); ++j) {
      if (truth[j] > 0.0) continue;
      if (scores[i] > scores[j]) credit += 1.0;
      else if (scores[i] == scores[j]) credit += 0.5;
    }
  }
  return credit / (static_cast<double>(pos) * static_cast<double>(neg));
}

RankingLossResult ranking_loss(const Matrix& scores, const Matrix& truth) {
  if (scores.rows() != truth.rows() || scores.cols() != truth.cols()) {
    throw std::invalid_argument("scores and truth have different shapes");
  }
  const Index p = truth.cols();
  RankingLossResult out;
  double total = 0.0;
  for (Index i = 0; i < truth.rows(); ++i) {
    Index in_set = 0;
    for (Index j = 0; j < p; ++j) {
      if (truth(i, j) > 0.0) ++in_set;
    }
    if (in_set == 0 || in_set == p) {
      ++out.excluded;
      continue;
    }
    Index violations = 0;
    for (Index y1 = 0; y1 < p; ++y1) {
      if (truth(i, y1) <= 0.0) continue;
      for (Index y2 = 0; y2 < p; ++y2) {
        if (truth(i, y2) > 0.0) continue;
        if (scores(i, y1) <= scores(i, y2)) ++violations;
      }
    }
    total += static_cast<double>(violations) /
             (static_cast<double>(in_set) * static_cast<double>(p - in_set));
    ++out.evaluated;
  }
  if (out.evaluated > 0) out.value = total / static_cast<double>(out.evaluated);
  return out;
}

MaskedMean mean_over_labels(const std::vector<std::optional<double>>& per_label) {
  MaskedMean out;
  double total = 0.0;
  for (const auto& v : per_label) {
    if (v.has_value()) {
      total += *v;
      ++out.valid;
    } else {
      ++out.invalid;
    }
  }
  if (out.valid > 0) out.value = total / static_cast<double>(out.valid);
  return out;
}

EvaluationReport evaluate_predictions(const Matrix& scores, const Matrix& truth) {
  if (scores.rows() != truth.rows() || scores.cols() != truth.cols()) {
    throw std::invalid_argument("scores and truth have different shapes");
  }
  EvaluationReport report;
  for (Index j = 0; j < truth.cols(); ++j) {
    report.ap.push_back(average_precision_11pt(scores.col(j), truth.col(j)));
    report.auc.push_back(auc(scores.col(j), truth.col(j)));
  }
  report.mean_ap = mean_over_labels(report.ap);
  report.mean_auc = mean_over_labels(report.auc);
  report.rl = ranking_loss(scores, truth);
  return report;
}

}  // namespace mvmr
