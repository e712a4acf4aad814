//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_EVAL_H_
#define VOXSCREEN_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace voxscreen {

struct RankedEntry {
  std::string id;
  double score = 0;
  bool active = false;
};

using RankedResults = std::vector<RankedEntry>;

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
};

// Points are kept alongside their integer counts so that area sums can be
// formed without rounding.
struct RocCurve {
  std::vector<RocPoint> points;
  std::vector<std::uint64_t> tp;
  std::vector<std::uint64_t> fp;
  std::uint64_t n_actives = 0;
  std::uint64_t n_decoys = 0;
};

// Sorted by score descending; a block of tied scores is one (diagonal) step.
RocCurve roc_curve(const RankedResults &results);

double auc(const RocCurve &curve);

inline constexpr double kDefaultLogAucLambda = 0.001;

// Area under tpr against log10(fpr) for fpr in [lo, hi]. Segments are
// integrated exactly.
double log10_weighted_area(const RocCurve &curve, double lo, double hi);

double random_log_auc(double lambda);
double adjusted_log_auc(const RocCurve &curve,
                        double lambda = kDefaultLogAucLambda);
double adjusted_log_auc(const RankedResults &results,
                        double lambda = kDefaultLogAucLambda);

// Score CSV: header id,score,label with label 1 (active) or 0.
RankedResults read_scores_csv(std::string_view text);
std::string write_scores_csv(const RankedResults &results);

struct TargetMetrics {
  std::string target;
  double auc = 0;
  double adjusted_logauc = 0;
  std::size_t n_actives = 0;
  std::size_t n_decoys = 0;
};

TargetMetrics evaluate(std::string target, const RankedResults &results,
                       double lambda = kDefaultLogAucLambda);

// target,auc,adjusted_logauc,n_actives,n_decoys
std::string write_report_csv(const std::vector<TargetMetrics> &rows);

// fpr<TAB>tpr per line, with a header.
std::string write_roc_tsv(const RocCurve &curve);

}  // namespace voxscreen

#endif  // VOXSCREEN_EVAL_H_
