#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mldfs/delay_model.hpp"
#include "mldfs/ml.hpp"

namespace mldfs {

struct Metrics {
  double accuracy = 0.0;
  double f1_weighted = 0.0;
  std::vector<std::vector<uint64_t>> confusion;  // [true][pred]
};

// Accuracy, support-weighted F1, and the confusion matrix. A class with zero
// precision+recall contributes an F1 of 0.
Metrics evaluate_predictions(std::span<const int> y_true,
                             std::span<const int> y_pred, int n_classes);

template <class M>
Metrics evaluate(const M& model, const Dataset& d) {
  std::vector<int> pred;
  pred.reserve(d.size());
  for (const auto& row : d.rows) pred.push_back(model.predict(row));
  return evaluate_predictions(d.labels, pred, d.n_classes);
}

template <class M>
std::vector<int> predict_all(const M& model, const Dataset& d) {
  std::vector<int> pred;
  pred.reserve(d.size());
  for (const auto& row : d.rows) pred.push_back(model.predict(row));
  return pred;
}

// Percent speedup over always running at t_wc, assuming each instruction
// costs its predicted class period, plus replay_cycles extra t_wc periods
// when under-predicted. Ignores pipeline structure; the simulator refines it.
double estimate_static_speedup(std::span<const int> preds,
                               std::span<const int> trues,
                               const ClassBoundaries& bounds, int replay_cycles);

}  // namespace mldfs
