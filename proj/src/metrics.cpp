#include "mldfs/metrics.hpp"

#include <stdexcept>

namespace mldfs {

Metrics evaluate_predictions(std::span<const int> y_true,
                             std::span<const int> y_pred, int n_classes) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("evaluate: size mismatch");
  if (y_true.empty()) throw std::invalid_argument("evaluate: empty input");

  Metrics m;
  m.confusion.assign(n_classes, std::vector<uint64_t>(n_classes, 0));
  uint64_t correct = 0;
  for (size_t i = 0; i < y_true.size(); ++i) {
    int t = y_true[i], p = y_pred[i];
    if (t < 0 || t >= n_classes || p < 0 || p >= n_classes)
      throw std::invalid_argument("evaluate: class out of range");
    ++m.confusion[t][p];
    if (t == p) ++correct;
  }
  const double n = static_cast<double>(y_true.size());
  m.accuracy = static_cast<double>(correct) / n;

  double f1_sum = 0.0;
  for (int k = 0; k < n_classes; ++k) {
    uint64_t tp = m.confusion[k][k];
    uint64_t support = 0, predicted = 0;
    for (int j = 0; j < n_classes; ++j) {
      support += m.confusion[k][j];
      predicted += m.confusion[j][k];
    }
    double precision = predicted ? static_cast<double>(tp) / predicted : 0.0;
    double recall = support ? static_cast<double>(tp) / support : 0.0;
    double f1 = precision + recall > 0.0
                    ? 2.0 * precision * recall / (precision + recall)
                    : 0.0;
    f1_sum += f1 * static_cast<double>(support);
  }
  m.f1_weighted = f1_sum / n;
  return m;
}

double estimate_static_speedup(std::span<const int> preds,
                               std::span<const int> trues,
                               const ClassBoundaries& bounds, int replay_cycles) {
  if (preds.size() != trues.size())
    throw std::invalid_argument("speedup estimate: size mismatch");
  if (preds.empty()) throw std::invalid_argument("speedup estimate: empty input");
  const double t_wc = bounds.t_wc();
  double total = 0.0;
  for (size_t i = 0; i < preds.size(); ++i) {
    total += bounds.uppers[preds[i]];
    if (trues[i] > preds[i]) total += replay_cycles * t_wc;
  }
  double baseline = static_cast<double>(preds.size()) * t_wc;
  return 100.0 * (baseline / total - 1.0);
}

}  // namespace mldfs
