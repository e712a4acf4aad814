//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen {

RocCurve roc_curve(const RankedResults &results) {
  RocCurve curve;
  for (const RankedEntry &e: results) {
    if (!std::isfinite(e.score))
      throw Error(ErrorKind::kValidation, "non-finite score for " + e.id);
    (e.active ? curve.n_actives : curve.n_decoys)++;
  }
  if (curve.n_actives == 0 || curve.n_decoys == 0)
    throw Error(ErrorKind::kValidation,
                "ROC needs at least one active and one decoy");

  std::vector<const RankedEntry *> order;
  order.reserve(results.size());
  for (const RankedEntry &e: results)
    order.push_back(&e);
  std::sort(order.begin(), order.end(),
            [](const RankedEntry *a, const RankedEntry *b) {
              return a->score > b->score;
            });

  std::uint64_t tp = 0, fp = 0;
  curve.tp.push_back(0);
  curve.fp.push_back(0);
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && order[j]->score == order[i]->score) {
      (order[j]->active ? tp : fp)++;
      ++j;
    }
    curve.tp.push_back(tp);
    curve.fp.push_back(fp);
    i = j;
  }

  const double p = static_cast<double>(curve.n_actives);
  const double n = static_cast<double>(curve.n_decoys);
  for (std::size_t k = 0; k < curve.tp.size(); ++k)
    curve.points.push_back({ curve.fp[k] / n, curve.tp[k] / p });
  return curve;
}

double auc(const RocCurve &curve) {
  if (curve.tp.size() < 2)
    throw Error(ErrorKind::kValidation, "ROC curve is empty");
  // Each step contributes (fp1-fp0)(tp0+tp1)/2 in count units; keep the
  // doubled sum integral.
  unsigned __int128 twice = 0;
  for (std::size_t k = 1; k < curve.tp.size(); ++k) {
    twice += static_cast<unsigned __int128>(curve.fp[k] - curve.fp[k - 1])
             * (curve.tp[k - 1] + curve.tp[k]);
  }
  const double denom =
      2.0 * static_cast<double>(curve.n_actives) * static_cast<double>(curve.n_decoys);
  return static_cast<double>(twice) / denom;
}

namespace {
// Integral of (y0 + m (x - x0)) / x over [a, b], 0 < a <= b.
double segment_integral(double x0, double y0, double m, double a, double b) {
  return (y0 - m * x0) * std::log(b / a) + m * (b - a);
}
}  // namespace

double log10_weighted_area(const RocCurve &curve, double lo, double hi) {
  if (!(lo > 0) || !(lo < 1) || !(hi > lo) || !(hi <= 1))
    throw Error(ErrorKind::kValidation, "need 0 < lo < hi <= 1, lo < 1");
  const auto &pts = curve.points;
  double total = 0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double x0 = pts[k - 1].fpr, x1 = pts[k].fpr;
    if (x1 <= x0)
      continue;  // vertical step, no fpr extent
    const double a = std::max(x0, lo), b = std::min(x1, hi);
    if (b <= a)
      continue;
    const double m = (pts[k].tpr - pts[k - 1].tpr) / (x1 - x0);
    total += segment_integral(x0, pts[k - 1].tpr, m, a, b);
  }
  return total / std::numbers::ln10;
}

double random_log_auc(double lambda) {
  if (!(lambda > 0) || !(lambda < 1))
    throw Error(ErrorKind::kValidation, "lambda must lie in (0, 1)");
  return (1.0 - lambda) / (std::numbers::ln10 * std::log10(1.0 / lambda));
}

double adjusted_log_auc(const RocCurve &curve, double lambda) {
  const double random = random_log_auc(lambda);
  return log10_weighted_area(curve, lambda, 1.0) / std::log10(1.0 / lambda) - random;
}

double adjusted_log_auc(const RankedResults &results, double lambda) {
  random_log_auc(lambda);
  return adjusted_log_auc(roc_curve(results), lambda);
}

RankedResults read_scores_csv(std::string_view text) {
  RankedResults out;
  auto lines = split_lines(text);
  bool header_seen = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty())
      continue;
    auto cols = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (trim(cols[0]) == "id")
        continue;
    }
    if (cols.size() != 3)
      throw ParseError("score row needs id,score,label", ln + 1);
    RankedEntry e;
    e.id = std::string(trim(cols[0]));
    if (!parse_double(cols[1], e.score) || !std::isfinite(e.score))
      throw ParseError("bad score", ln + 1);
    auto label = trim(cols[2]);
    if (label == "1")
      e.active = true;
    else if (label != "0")
      throw ParseError("label must be 0 or 1", ln + 1);
    out.push_back(std::move(e));
  }
  return out;
}

namespace {
std::string fmt(const char *spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}
}  // namespace

std::string write_scores_csv(const RankedResults &results) {
  std::string out = "id,score,label\n";
  for (const RankedEntry &e: results)
    out += e.id + ',' + fmt("%.9g", e.score) + ',' + (e.active ? "1" : "0") + '\n';
  return out;
}

TargetMetrics evaluate(std::string target, const RankedResults &results,
                       double lambda) {
  RocCurve curve = roc_curve(results);
  TargetMetrics m;
  m.target = std::move(target);
  m.auc = auc(curve);
  m.adjusted_logauc = adjusted_log_auc(curve, lambda);
  m.n_actives = curve.n_actives;
  m.n_decoys = curve.n_decoys;
  return m;
}

std::string write_report_csv(const std::vector<TargetMetrics> &rows) {
  std::string out = "target,auc,adjusted_logauc,n_actives,n_decoys\n";
  for (const TargetMetrics &m: rows) {
    out += m.target + ',' + fmt("%.6f", m.auc) + ','
           + fmt("%.6f", m.adjusted_logauc) + ',' + std::to_string(m.n_actives)
           + ',' + std::to_string(m.n_decoys) + '\n';
  }
  return out;
}

std::string write_roc_tsv(const RocCurve &curve) {
  std::string out = "fpr\ttpr\n";
  for (const RocPoint &p: curve.points)
    out += fmt("%.9g", p.fpr) + '\t' + fmt("%.9g", p.tpr) + '\n';
  return out;
}

}  // namespace voxscreen
