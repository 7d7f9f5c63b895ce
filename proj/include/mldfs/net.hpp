#pragma once

#include <span>
#include <vector>

#include "mldfs/ml.hpp"

namespace mldfs {

// One ReLU hidden layer, softmax output. Weights are row-major: w1 is
// n_hidden x n_in, w2 is n_classes x n_hidden. Inputs are standardized with
// the training-set mean and standard deviation stored in the model.
struct TrainedNet {
  size_t n_in = 0;
  int n_hidden = 0;
  int n_classes = 0;
  std::vector<double> mean, stdev;
  std::vector<double> w1, b1, w2, b2;

  std::vector<double> standardize(std::span<const double> row) const;
  std::vector<double> logits(std::span<const double> row) const;
  int predict(std::span<const double> row) const;  // argmax, lowest tie
};

// Mean cross-entropy of the net over the dataset (raw, unstandardized rows).
double nn_loss(const TrainedNet& net, const Dataset& d);

struct NetGradients {
  std::vector<double> w1, b1, w2, b2;
};

// Full-batch gradients of nn_loss with respect to the weights, by
// backpropagation. Exposed so the finite-difference check can see it.
NetGradients nn_gradients(const TrainedNet& net, const Dataset& d);

// Untrained net with Box-Muller-initialized weights (scaled by 1/sqrt(fan_in))
// and standardization statistics taken from d.
TrainedNet init_net(const Dataset& d, const HyperParams& hp);

// Full-batch gradient descent with classical momentum for hp.nn_epochs
// epochs. Throws TrainingError if the loss stops being finite.
TrainedNet train_net(const Dataset& d, const HyperParams& hp);

}  // namespace mldfs
