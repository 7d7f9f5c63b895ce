#include <doctest.h>

#include <cmath>

#include "mldfs/net.hpp"
#include "mldfs/metrics.hpp"
#include "mldfs/rng.hpp"

using namespace mldfs;

namespace {

Dataset toy_separable() {
  Dataset d;
  for (int i = 0; i < 10; ++i) {
    double j = 0.1 * i;
    d.rows.push_back({0.0 + j, 0.0 - j});
    d.labels.push_back(0);
    d.rows.push_back({10.0 - j, 10.0 + j});
    d.labels.push_back(1);
  }
  d.n_classes = 2;
  return d;
}

Dataset random_dataset(int n, int features, int classes, uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  for (int i = 0; i < n; ++i) {
    std::vector<double> row;
    for (int f = 0; f < features; ++f) row.push_back(rng.normal() * 3.0);
    d.rows.push_back(std::move(row));
    d.labels.push_back(static_cast<int>(rng.below(classes)));
  }
  d.n_classes = classes;
  return d;
}

double max_gradient_gap(const TrainedNet& net, const Dataset& d) {
  NetGradients g = nn_gradients(net, d);
  const double h = 1e-5;
  double worst = 0.0;
  auto probe = [&](std::vector<double> TrainedNet::* field,
                   const std::vector<double>& analytic) {
    TrainedNet n = net;
    auto& w = n.*field;
    for (size_t i = 0; i < w.size(); ++i) {
      double keep = w[i];
      w[i] = keep + h;
      double up = nn_loss(n, d);
      w[i] = keep - h;
      double down = nn_loss(n, d);
      w[i] = keep;
      worst = std::max(worst, std::abs((up - down) / (2 * h) - analytic[i]));
    }
  };
  probe(&TrainedNet::w1, g.w1);
  probe(&TrainedNet::b1, g.b1);
  probe(&TrainedNet::w2, g.w2);
  probe(&TrainedNet::b2, g.b2);
  return worst;
}

}  // namespace

TEST_CASE("backprop matches central finite differences") {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    HyperParams hp;
    hp.nn_hidden = 4;
    hp.seed = seed;
    Dataset d = random_dataset(12, 3, 3, seed * 11);
    TrainedNet net = init_net(d, hp);
    double gap = max_gradient_gap(net, d);
    CAPTURE(seed);
    CHECK(gap < 1e-4);
  }
}

TEST_CASE("training separates the separable") {
  HyperParams hp;
  Dataset d = toy_separable();
  TrainedNet net = train_net(d, hp);
  Metrics m = evaluate(net, d);
  CHECK(m.accuracy == 1.0);
}

TEST_CASE("zero epochs means initial weights") {
  HyperParams hp;
  hp.nn_epochs = 0;
  Dataset d = toy_separable();
  TrainedNet net = train_net(d, hp);
  TrainedNet fresh = init_net(d, hp);
  CHECK(net.w1 == fresh.w1);
  CHECK(net.w2 == fresh.w2);
  Metrics m = evaluate(net, d);
  CHECK(m.accuracy >= 0.0);
  CHECK(m.accuracy <= 1.0);
}

TEST_CASE("absurd learning rate reports divergence") {
  HyperParams hp;
  hp.nn_lr = 1e12;
  CHECK_THROWS_AS(train_net(toy_separable(), hp), TrainingError);
}

TEST_CASE("training is deterministic in the seed") {
  HyperParams hp;
  hp.nn_epochs = 50;
  Dataset d = random_dataset(30, 4, 2, 3);
  TrainedNet a = train_net(d, hp);
  TrainedNet b = train_net(d, hp);
  CHECK(a.w1 == b.w1);
  CHECK(a.b1 == b.b1);
  CHECK(a.w2 == b.w2);
  CHECK(a.b2 == b.b2);

  hp.seed = 99;
  TrainedNet c = train_net(d, hp);
  CHECK(a.w1 != c.w1);
}

TEST_CASE("standardization statistics") {
  Dataset d;
  d.rows = {{1.0, 7.0}, {3.0, 7.0}, {5.0, 7.0}, {7.0, 7.0}};
  d.labels = {0, 1, 0, 1};
  d.n_classes = 2;
  HyperParams hp;
  TrainedNet net = init_net(d, hp);
  REQUIRE(net.mean.size() == 2);
  CHECK(net.mean[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(net.mean[1] == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(net.stdev[1] == 1.0);  // constant feature passes through unscaled

  std::vector<double> z = net.standardize(std::vector<double>{4.0, 7.0});
  CHECK(z[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(0.0).epsilon(1e-12));

  // argmax with lowest-index tie-break on the output layer
  TrainedNet flat = net;
  std::fill(flat.w1.begin(), flat.w1.end(), 0.0);
  std::fill(flat.b1.begin(), flat.b1.end(), 0.0);
  std::fill(flat.w2.begin(), flat.w2.end(), 0.0);
  std::fill(flat.b2.begin(), flat.b2.end(), 0.0);
  CHECK(flat.predict(d.rows[0]) == 0);
}

TEST_CASE("empty dataset is rejected") {
  Dataset d;
  d.n_classes = 2;
  CHECK_THROWS_AS(train_net(d, HyperParams{}), TrainingError);
}
