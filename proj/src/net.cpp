#include "mldfs/net.hpp"

#include <algorithm>
#include <cmath>

#include "mldfs/rng.hpp"

namespace mldfs {

std::vector<double> TrainedNet::standardize(std::span<const double> row) const {
  std::vector<double> x(n_in);
  for (size_t i = 0; i < n_in; ++i) x[i] = (row[i] - mean[i]) / stdev[i];
  return x;
}

namespace {

// hidden = relu(w1 x + b1), out = w2 hidden + b2
void forward(const TrainedNet& net, std::span<const double> x,
             std::vector<double>& hidden, std::vector<double>& out) {
  hidden.assign(net.n_hidden, 0.0);
  for (int h = 0; h < net.n_hidden; ++h) {
    double s = net.b1[h];
    const double* w = &net.w1[static_cast<size_t>(h) * net.n_in];
    for (size_t i = 0; i < net.n_in; ++i) s += w[i] * x[i];
    hidden[h] = s > 0.0 ? s : 0.0;
  }
  out.assign(net.n_classes, 0.0);
  for (int k = 0; k < net.n_classes; ++k) {
    double s = net.b2[k];
    const double* w = &net.w2[static_cast<size_t>(k) * net.n_hidden];
    for (int h = 0; h < net.n_hidden; ++h) s += w[h] * hidden[h];
    out[k] = s;
  }
}

// logits -> probabilities in place; returns log(sum(exp)) shift for the loss
void softmax(std::vector<double>& z) {
  double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

}  // namespace

std::vector<double> TrainedNet::logits(std::span<const double> row) const {
  auto x = standardize(row);
  std::vector<double> hidden, out;
  forward(*this, x, hidden, out);
  return out;
}

int TrainedNet::predict(std::span<const double> row) const {
  auto z = logits(row);
  int best = 0;
  for (int k = 1; k < n_classes; ++k)
    if (z[k] > z[best]) best = k;
  return best;
}

double nn_loss(const TrainedNet& net, const Dataset& d) {
  double total = 0.0;
  std::vector<double> hidden, out;
  for (size_t i = 0; i < d.size(); ++i) {
    auto x = net.standardize(d.rows[i]);
    forward(net, x, hidden, out);
    double m = *std::max_element(out.begin(), out.end());
    double lse = 0.0;
    for (double v : out) lse += std::exp(v - m);
    total += m + std::log(lse) - out[d.labels[i]];
  }
  return total / static_cast<double>(d.size());
}

NetGradients nn_gradients(const TrainedNet& net, const Dataset& d) {
  NetGradients g;
  g.w1.assign(net.w1.size(), 0.0);
  g.b1.assign(net.b1.size(), 0.0);
  g.w2.assign(net.w2.size(), 0.0);
  g.b2.assign(net.b2.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(d.size());

  std::vector<double> hidden, out, dhidden(net.n_hidden);
  for (size_t i = 0; i < d.size(); ++i) {
    auto x = net.standardize(d.rows[i]);
    forward(net, x, hidden, out);
    softmax(out);            // out becomes p
    out[d.labels[i]] -= 1.0; // dL/dlogits = p - onehot

    for (int k = 0; k < net.n_classes; ++k) {
      double dk = out[k] * inv_n;
      g.b2[k] += dk;
      double* gw = &g.w2[static_cast<size_t>(k) * net.n_hidden];
      for (int h = 0; h < net.n_hidden; ++h) gw[h] += dk * hidden[h];
    }
    for (int h = 0; h < net.n_hidden; ++h) {
      double s = 0.0;
      for (int k = 0; k < net.n_classes; ++k)
        s += out[k] * net.w2[static_cast<size_t>(k) * net.n_hidden + h];
      dhidden[h] = hidden[h] > 0.0 ? s * inv_n : 0.0;  // ReLU gate
    }
    for (int h = 0; h < net.n_hidden; ++h) {
      if (dhidden[h] == 0.0) continue;
      g.b1[h] += dhidden[h];
      double* gw = &g.w1[static_cast<size_t>(h) * net.n_in];
      for (size_t j = 0; j < net.n_in; ++j) gw[j] += dhidden[h] * x[j];
    }
  }
  return g;
}

TrainedNet init_net(const Dataset& d, const HyperParams& hp) {
  d.validate();
  hp.validate();
  if (d.size() == 0) throw TrainingError("cannot train a net on no samples");

  TrainedNet net;
  net.n_in = d.n_features();
  net.n_hidden = hp.nn_hidden;
  net.n_classes = d.n_classes;

  net.mean.assign(net.n_in, 0.0);
  net.stdev.assign(net.n_in, 0.0);
  for (const auto& row : d.rows)
    for (size_t i = 0; i < net.n_in; ++i) net.mean[i] += row[i];
  for (double& m : net.mean) m /= static_cast<double>(d.size());
  for (const auto& row : d.rows)
    for (size_t i = 0; i < net.n_in; ++i) {
      double dv = row[i] - net.mean[i];
      net.stdev[i] += dv * dv;
    }
  for (double& s : net.stdev) {
    s = std::sqrt(s / static_cast<double>(d.size()));
    if (s < 1e-12) s = 1.0;  // constant feature: pass through unscaled
  }

  Rng rng(derive_seed(hp.seed, 0x6e657477ULL));  // distinct from forest streams
  net.w1.resize(static_cast<size_t>(net.n_hidden) * net.n_in);
  net.b1.assign(net.n_hidden, 0.0);
  net.w2.resize(static_cast<size_t>(net.n_classes) * net.n_hidden);
  net.b2.assign(net.n_classes, 0.0);
  double s1 = 1.0 / std::sqrt(static_cast<double>(net.n_in));
  double s2 = 1.0 / std::sqrt(static_cast<double>(net.n_hidden));
  for (double& w : net.w1) w = rng.normal() * s1;
  for (double& w : net.w2) w = rng.normal() * s2;
  return net;
}

TrainedNet train_net(const Dataset& d, const HyperParams& hp) {
  TrainedNet net = init_net(d, hp);

  NetGradients vel;
  vel.w1.assign(net.w1.size(), 0.0);
  vel.b1.assign(net.b1.size(), 0.0);
  vel.w2.assign(net.w2.size(), 0.0);
  vel.b2.assign(net.b2.size(), 0.0);

  auto step = [&](std::vector<double>& w, std::vector<double>& v,
                  const std::vector<double>& g) {
    for (size_t i = 0; i < w.size(); ++i) {
      v[i] = hp.nn_momentum * v[i] - hp.nn_lr * g[i];
      w[i] += v[i];
    }
  };

  for (int epoch = 0; epoch < hp.nn_epochs; ++epoch) {
    NetGradients g = nn_gradients(net, d);
    step(net.w1, vel.w1, g.w1);
    step(net.b1, vel.b1, g.b1);
    step(net.w2, vel.w2, g.w2);
    step(net.b2, vel.b2, g.b2);
    double loss = nn_loss(net, d);
    if (!std::isfinite(loss))
      throw TrainingError("training diverged at epoch " + std::to_string(epoch));
  }
  return net;
}

}  // namespace mldfs
