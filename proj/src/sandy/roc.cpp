#include "coda/sandy/roc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace coda::sandy {

std::vector<double> default_tau_grid(double max_score, int count, double min_tau) {
  if (count < 2 || !(min_tau > 0)) throw std::invalid_argument("tau grid: need count >= 2 and min_tau > 0");
  std::vector<double> taus{-1.0, 0.0};
  const double hi = std::max(max_score, min_tau * 10);
  const double l0 = std::log(min_tau);
  const double l1 = std::log(hi);
  for (int k = 0; k < count; ++k) taus.push_back(std::exp(l0 + (l1 - l0) * k / (count - 1)));
  taus.push_back(std::nextafter(std::max(max_score, hi), INFINITY));
  return taus;
}

RocResult roc_from_scores(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels,
                          const std::vector<double>& taus) {
  if (scores.empty()) throw std::invalid_argument("roc: no scores");
  if (scores.size() != labels.size()) throw std::invalid_argument("roc: scores and labels differ in length");
  std::vector<double> pos, neg;
  for (std::size_t k = 0; k < scores.size(); ++k) (labels[k] ? pos : neg).push_back(scores[k]);
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  RocResult r;
  r.positives = static_cast<std::int64_t>(pos.size());
  r.negatives = static_cast<std::int64_t>(neg.size());
  auto above = [](const std::vector<double>& v, double tau) {
    return static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), tau));
  };
  for (double tau : taus) {
    RocPoint p{tau, pos.empty() ? 0.0 : above(pos, tau) / pos.size(), neg.empty() ? 0.0 : above(neg, tau) / neg.size()};
    r.points.push_back(p);
  }
  std::sort(r.points.begin(), r.points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  for (std::size_t k = 1; k < r.points.size(); ++k) {
    const auto& a = r.points[k - 1];
    const auto& b = r.points[k];
    r.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2;
  }
  return r;
}

RocResult roc_eval(MaskModel& model, const Dataset& test, const std::optional<std::vector<double>>& taus) {
  if (test.size() == 0) throw std::invalid_argument("roc_eval: empty test set");
  if (!test.has_masks()) throw std::invalid_argument("roc_eval: test set has no ground-truth masks");
  const int n = model.space()->num_state_components();
  const int rows = model.space()->num_nodes();
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  scores.reserve(static_cast<std::size_t>(test.size()) * rows * n);
  labels.reserve(scores.capacity());
  constexpr int kChunk = 1024;
  std::vector<int> idx(test.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (int begin = 0; begin < test.size(); begin += kChunk) {
    const int end = std::min(test.size(), begin + kChunk);
    const auto chunk = model.mask_scores(gather_rows(test.x, idx, begin, end));
    for (int b = begin; b < end; ++b) {
      const Tensor& s = chunk[b - begin];
      const LocalMask& m = test.masks[b];
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < n; ++c) {
          scores.push_back(s.at(r, c));
          labels.push_back(m(r, c) ? 1 : 0);
        }
      }
    }
  }
  const double max_score = *std::max_element(scores.begin(), scores.end());
  return roc_from_scores(scores, labels, taus ? *taus : default_tau_grid(max_score));
}

void write_roc_csv(std::ostream& out, const RocResult& roc) {
  out << "tau,fpr,tpr\n";
  out.precision(10);
  for (const auto& p : roc.points) out << p.tau << ',' << p.fpr << ',' << p.tpr << '\n';
}

}  // namespace coda::sandy
