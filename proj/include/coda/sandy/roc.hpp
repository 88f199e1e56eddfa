#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "coda/sandy/model.hpp"

namespace coda::sandy {

struct RocPoint {
  double tau = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

struct RocResult {
  std::vector<RocPoint> points;  // sorted by (fpr, tpr)
  double auc = 0.0;
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
};

/// `count` log-spaced thresholds over [min_tau, max_score], plus the sentinels
/// -1 (everything positive), 0, and one just above max_score (nothing positive).
std::vector<double> default_tau_grid(double max_score, int count = 101, double min_tau = 1e-6);

/// Entry predicted positive iff score > tau. AUC is the trapezoid rule over
/// the operating points sorted by (fpr, tpr).
RocResult roc_from_scores(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels,
                          const std::vector<double>& taus);

/// Scores every (node, next-state component) entry of every test transition
/// against its ground-truth mask. The grid defaults to default_tau_grid.
RocResult roc_eval(MaskModel& model, const Dataset& test, const std::optional<std::vector<double>>& taus = {});

void write_roc_csv(std::ostream& out, const RocResult& roc);

}  // namespace coda::sandy
