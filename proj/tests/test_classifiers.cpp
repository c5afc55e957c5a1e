#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "stmtcls/classifiers.hpp"
#include "support.hpp"

using namespace stmtcls;

namespace {

double max_rel_error(Model& model, const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<double>& w) {
  std::vector<Eigen::MatrixXd> grads;
  model.loss(x, y, w, &grads);
  double worst = 0.0;
  const double h = 1e-6;
  for (std::size_t p = 0; p < model.params().size(); ++p) {
    auto& m = model.params()[p];
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double keep = m.data()[i];
      m.data()[i] = keep + h;
      const double up = model.loss(x, y, w);
      m.data()[i] = keep - h;
      const double down = model.loss(x, y, w);
      m.data()[i] = keep;
      const double numeric = (up - down) / (2 * h);
      const double analytic = grads[p].data()[i];
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-7});
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
  }
  return worst;
}

// Gaussian blobs around well separated centers
DenseFeatures blobs(std::size_t per_class, std::size_t classes, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(per_class * classes), static_cast<Eigen::Index>(dim));
  std::vector<int> y;
  for (std::size_t k = 0; k < classes; ++k)
    for (std::size_t i = 0; i < per_class; ++i) {
      const auto r = static_cast<Eigen::Index>(y.size());
      for (std::size_t d = 0; d < dim; ++d) x(r, static_cast<Eigen::Index>(d)) = noise(rng) + (d == k ? 3.0 : 0.0);
      y.push_back(static_cast<int>(k));
    }
  return {x, y};
}

}  // namespace

TEST_CASE("zero rule") {
  CHECK(zero_rule({0, 1, 1, 2}, 3).label == 1);
  CHECK(zero_rule({2, 2, 1, 1}, 3).label == 1);  // tie -> lowest index
  CHECK_THROWS_AS(zero_rule({}, 3), std::invalid_argument);
  CHECK(zero_rule_from_counts({5, 9, 9}).label == 1);
}

TEST_CASE("weighted cross entropy examples") {
  const std::vector<double> ones(13, 1.0);
  Eigen::VectorXd uniform = Eigen::VectorXd::Constant(13, 1.0 / 13);
  CHECK(weighted_cross_entropy(uniform, 4, ones) == doctest::Approx(std::log(13.0)));
  CHECK(weighted_cross_entropy(uniform, 4, ones) == doctest::Approx(2.5649).epsilon(1e-4));
  Eigen::VectorXd onehot = Eigen::VectorXd::Zero(13);
  onehot[3] = 1.0;
  CHECK(weighted_cross_entropy(onehot, 3, std::vector<double>(13, 7.0)) == doctest::Approx(0.0));
  Eigen::VectorXd half = Eigen::VectorXd::Zero(13);
  half[0] = half[1] = 0.5;
  auto w = ones;
  w[1] = 2.0;
  CHECK(weighted_cross_entropy(half, 1, w) == doctest::Approx(2 * std::log(2.0)));
  // floor at 1e-12
  CHECK(weighted_cross_entropy(onehot, 0, ones) == doctest::Approx(-std::log(1e-12)));
  Eigen::VectorXd bad = Eigen::VectorXd::Constant(13, 0.1);
  CHECK_THROWS_AS(weighted_cross_entropy(bad, 0, ones), std::invalid_argument);
}

TEST_CASE("unit weights give plain cross entropy") {
  Model m = Model::linear(3, 4);
  m.initialize(3);
  Eigen::MatrixXd x(2, 3);
  x << 1, 2, 3, -1, 0.5, 0;
  std::vector<int> y = {2, 0};
  auto p = m.predict_batch(x);
  const double plain = -(std::log(p(0, 2)) + std::log(p(1, 0))) / 2;
  CHECK(m.loss(x, y, std::vector<double>(4, 1.0)) == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("adam first step and zero gradient") {
  std::vector<Eigen::MatrixXd> p = {Eigen::MatrixXd::Zero(1, 1)};
  std::vector<Eigen::MatrixXd> g = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
  AdamState s;
  adam_step(p, g, s);
  CHECK(p[0](0, 0) == doctest::Approx(-0.001).epsilon(1e-6));
  CHECK(s.step == 1);

  std::vector<Eigen::MatrixXd> q = {Eigen::MatrixXd::Constant(2, 2, 3.0)};
  std::vector<Eigen::MatrixXd> z = {Eigen::MatrixXd::Zero(2, 2)};
  AdamState t;
  adam_step(q, z, t);
  CHECK(q[0].isApproxToConstant(3.0));
  CHECK(t.step == 1);

  std::vector<Eigen::MatrixXd> nan = {Eigen::MatrixXd::Constant(1, 1, std::nan(""))};
  CHECK_THROWS_AS(adam_step(p, nan, s), TrainingError);
}

TEST_CASE("adam decreases a convex quadratic") {
  // reference optimizer written out directly
  double ref_p = 5.0, m = 0, v = 0;
  std::vector<Eigen::MatrixXd> p = {Eigen::MatrixXd::Constant(1, 1, 5.0)};
  AdamState s;
  AdamConfig cfg;
  cfg.learning_rate = 0.05;
  double prev = 25.0;
  for (int t = 1; t <= 300; ++t) {
    const double g = 2 * p[0](0, 0);
    adam_step(p, {Eigen::MatrixXd::Constant(1, 1, g)}, s, cfg);
    const double rg = 2 * ref_p;
    m = 0.9 * m + 0.1 * rg;
    v = 0.999 * v + 0.001 * rg * rg;
    ref_p -= 0.05 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    CHECK(p[0](0, 0) == doctest::Approx(ref_p).epsilon(1e-12));
    const double loss = p[0](0, 0) * p[0](0, 0);
    if (t < 60) CHECK(loss < prev);
    prev = loss;
  }
  CHECK(prev < 1.0);
}

TEST_CASE("early stopping example") {
  EarlyStopping es(0.001, 3);
  CHECK_FALSE(es.update(1.0));
  CHECK_FALSE(es.update(0.9995));
  CHECK_FALSE(es.update(0.9991));
  CHECK(es.update(0.9990));
  CHECK(es.epochs() == 4);

  EarlyStopping improving(0.001, 3);
  for (double l : {1.0, 0.9, 0.8, 0.7, 0.6}) CHECK_FALSE(improving.update(l));
  CHECK_THROWS_AS(EarlyStopping(0.001, 0), std::invalid_argument);
}

TEST_CASE("zero-weight model predicts uniform") {
  Model m = Model::linear(5, 13);
  auto p = m.predict(Eigen::VectorXd::Random(5));
  for (Eigen::Index i = 0; i < 13; ++i) CHECK(p[i] == doctest::Approx(1.0 / 13));
  CHECK_THROWS_AS(m.predict(Eigen::VectorXd::Zero(4)), ModelError);
}

TEST_CASE("predictions are distributions and argmax is shift invariant") {
  Model m = Model::mlp(6, 5, 13);
  m.initialize(11);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(20, 6) * 3;
  auto p = m.predict_batch(x);
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    CHECK(p.row(r).sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.row(r).minCoeff() >= 0.0);
  }
  Eigen::VectorXd z = Eigen::VectorXd::Random(13);
  Eigen::Index a, b;
  softmax(z).maxCoeff(&a);
  softmax((z.array() + 123.0).matrix()).maxCoeff(&b);
  CHECK(a == b);
}

TEST_CASE("gradients match central differences") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(2, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto in = static_cast<std::size_t>(dim(rng));
    const auto classes = static_cast<std::size_t>(dim(rng));
    const int n = dim(rng);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(n, static_cast<Eigen::Index>(in));
    std::vector<int> y;
    std::vector<double> w;
    for (int i = 0; i < n; ++i) y.push_back(static_cast<int>(rng() % classes));
    for (std::size_t k = 0; k < classes; ++k) w.push_back(0.5 + static_cast<double>(rng() % 100) / 50.0);
    Model lin = Model::linear(in, classes);
    lin.initialize(rng());
    lin.params()[1].setRandom();
    CHECK(max_rel_error(lin, x, y, w) <= 1e-4);
    Model mlp = Model::mlp(in, static_cast<std::size_t>(dim(rng)), classes);
    mlp.initialize(rng());
    mlp.params()[1].setRandom();
    mlp.params()[3].setRandom();
    CHECK(max_rel_error(mlp, x, y, w) <= 1e-4);
  }
}

TEST_CASE("training separates blobs, is deterministic and keeps the best snapshot") {
  auto train_set = blobs(100, 2, 4, 1);
  auto val_set = blobs(20, 2, 4, 2);
  TrainConfig cfg;
  cfg.max_epochs = 20;
  cfg.batch_size = 32;
  cfg.adam.learning_rate = 0.01;
  auto r1 = train(ModelKind::Linear, train_set, val_set, 2, cfg);
  auto pred = predict_labels(r1.model, train_set);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == train_set.label(i);
  CHECK(static_cast<double>(hits) / static_cast<double>(pred.size()) >= 0.99);

  auto r2 = train(ModelKind::Linear, train_set, val_set, 2, cfg);
  CHECK(r1.model.params()[0] == r2.model.params()[0]);

  const double best = r1.history[r1.best_epoch - 1].validation_loss;
  for (const auto& h : r1.history) CHECK(best <= h.validation_loss);
}

TEST_CASE("single-class training warns") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(10, 3);
  DenseFeatures t(x, std::vector<int>(10, 1));
  TrainConfig cfg;
  cfg.max_epochs = 2;
  auto r = train(ModelKind::Linear, t, t, 3, cfg);
  CHECK_FALSE(r.warnings.empty());
  DenseFeatures empty(Eigen::MatrixXd(0, 3), {});
  CHECK_THROWS_AS(train(ModelKind::Linear, empty, t, 3, cfg), TrainingError);
}

TEST_CASE("model file round trip and scripted forward pass") {
  Model m = Model::mlp(4, 3, 2);
  m.initialize(5);
  m.class_names = {"a", "b"};
  m.featurization = Featurization::Embedded;
  m.window = 2;
  m.vocab_size = 9;
  std::stringstream buf;
  m.write(buf);
  auto back = Model::read(buf);
  CHECK(back.kind() == ModelKind::Mlp);
  CHECK(back.class_names == m.class_names);
  CHECK(back.window == 2);
  CHECK(back.vocab_size == 9);
  for (std::size_t i = 0; i < 4; ++i) CHECK(back.params()[i] == m.params()[i]);

  // forward pass recomputed by hand from the stored weights
  Eigen::VectorXd x(4);
  x << 0.5, -1.0, 2.0, 0.25;
  const auto& P = back.params();
  Eigen::VectorXd h(3);
  for (int j = 0; j < 3; ++j) {
    double s = P[1](0, j);
    for (int i = 0; i < 4; ++i) s += x[i] * P[0](i, j);
    h[j] = s > 0 ? s : 0;
  }
  double z[2];
  for (int k = 0; k < 2; ++k) {
    z[k] = P[3](0, k);
    for (int j = 0; j < 3; ++j) z[k] += h[j] * P[2](j, k);
  }
  const double p1 = std::exp(z[1]) / (std::exp(z[0]) + std::exp(z[1]));
  CHECK(back.predict(x)[1] == doctest::Approx(p1).epsilon(1e-12));

  std::stringstream junk("not a model");
  CHECK_THROWS_AS(Model::read(junk), ModelError);
}

TEST_CASE("index and embedded featurization") {
  std::istringstream in("a 1 2\nb 3 4\n");
  auto v = parse_vectors(in);
  auto seq = index_tokens({"b", "a"}, v, 3);
  auto idx = featurize(seq, v, Featurization::Index);
  CHECK(idx[0] == doctest::Approx(1.0));
  CHECK(idx[1] == doctest::Approx(0.5));
  CHECK(idx[2] == 0.0);
  auto emb = featurize(seq, v, Featurization::Embedded);
  CHECK(emb.size() == 6);
  CHECK(emb[0] == 3.0);
  CHECK(emb[3] == 2.0);
  CHECK(emb.tail(2).isZero());
}
