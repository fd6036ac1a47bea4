#pragma once

#include <optional>
#include <vector>

#include "mvmr/types.hpp"

namespace mvmr {

/// 11-point interpolated average precision over recalls {0, 0.1, ..., 1.0}.
/// Ties are broken by stable original index order. Empty when the label has
/// no positive sample.
std::optional<double> average_precision_11pt(const Vector& scores, const Vector& truth);

/// Mann-Whitney statistic: (#correct pairs + 0.5 #tied) / (#pos * #neg).
/// Empty for single-class inputs.
std::optional<double> auc(const Vector& scores, const Vector& truth);

/// Raw (recall, precision) points at every ranking cut, for external
/// plotting. Empty when the label has no positive sample.
struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};
std::vector<PrPoint> pr_curve(const Vector& scores, const Vector& truth);

struct RankingLossResult {
  std::optional<double> value;
  Index evaluated = 0;
  Index excluded = 0;  // samples with empty or full label sets
};

/// Instance-wise ranking loss; a tie between an in-set and an out-of-set
/// label counts as a violation.
RankingLossResult ranking_loss(const Matrix& scores, const Matrix& truth);

struct MaskedMean {
  std::optional<double> value;
  Index valid = 0;
  Index invalid = 0;
};

MaskedMean mean_over_labels(const std::vector<std::optional<double>>& per_label);

/// Per-label AP/AUC plus their masked means and the instance ranking loss.
struct EvaluationReport {
  std::vector<std::optional<double>> ap;
  std::vector<std::optional<double>> auc;
  MaskedMean mean_ap;
  MaskedMean mean_auc;
  RankingLossResult rl;
};

EvaluationReport evaluate_predictions(const Matrix& scores, const Matrix& truth);

}  // namespace mvmr
