#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stmtcls/embeddings.hpp"

namespace stmtcls {

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kProbabilityFloor = 1e-12;

struct ZeroRule {
  int label = 0;
};

/// Most frequent label; ties go to the lowest index.
ZeroRule zero_rule(const std::vector<int>& labels, int num_classes);
ZeroRule zero_rule_from_counts(const std::vector<std::size_t>& counts);

/// Inverse-frequency weights N / (K * count), 1 for absent classes.
std::vector<double> balanced_class_weights(const std::vector<int>& labels, int num_classes);

/// -w[y] * log(max(p[y], 1e-12)). Throws on an invalid distribution.
double weighted_cross_entropy(const Eigen::VectorXd& probs, int truth, const std::vector<double>& class_weights);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<Eigen::MatrixXd> m;
  std::vector<Eigen::MatrixXd> v;
  long step = 0;
};

/// One bias-corrected Adam update. Throws TrainingError on non-finite gradients.
void adam_step(std::vector<Eigen::MatrixXd>& params, const std::vector<Eigen::MatrixXd>& grads, AdamState& state,
               const AdamConfig& config = {});

enum class ModelKind : std::uint32_t { Linear = 1, Mlp = 2 };
enum class Featurization : std::uint32_t { Dense = 0, Index = 1, Embedded = 2 };

std::string to_string(ModelKind kind);
std::string to_string(Featurization f);

/// Logistic regression (one affine layer + softmax) or a one-hidden-layer
/// perceptron with rectifier units. Parameters are {W, b} or {W1, b1, W2, b2};
/// W has shape inputs x outputs, b is a 1 x outputs row.
class Model {
public:
  Model() = default;
  static Model linear(std::size_t inputs, std::size_t classes);
  static Model mlp(std::size_t inputs, std::size_t hidden, std::size_t classes);

  void initialize(std::uint64_t seed);

  ModelKind kind() const { return kind_; }
  std::size_t inputs() const { return inputs_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t classes() const { return classes_; }

  std::vector<Eigen::MatrixXd>& params() { return params_; }
  const std::vector<Eigen::MatrixXd>& params() const { return params_; }

  /// Row-wise logits for a batch (rows = samples).
  Eigen::MatrixXd logits(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd predict_batch(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd predict(const Eigen::VectorXd& x) const;

  /// Mean weighted cross-entropy over the batch; fills `grads` when given.
  double loss(const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<double>& class_weights,
              std::vector<Eigen::MatrixXd>* grads = nullptr) const;

  // metadata carried in the model file
  std::vector<std::string> class_names;
  Featurization featurization = Featurization::Dense;
  std::size_t window = 0;
  std::size_t vocab_size = 0;

  void save(const std::filesystem::path& path) const;
  static Model load(const std::filesystem::path& path);
  void write(std::ostream& out) const;
  static Model read(std::istream& in);

private:
  ModelKind kind_ = ModelKind::Linear;
  std::size_t inputs_ = 0, hidden_ = 0, classes_ = 0;
  std::vector<Eigen::MatrixXd> params_;
  void check_input(Eigen::Index cols) const;
};

using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

/// Source of training rows, materialized one batch at a time.
class FeatureSet {
public:
  virtual ~FeatureSet() = default;
  virtual std::size_t size() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual int label(std::size_t i) const = 0;
  virtual void fill(std::size_t i, RowRef row) const = 0;

  Eigen::MatrixXd batch(const std::vector<std::size_t>& rows) const;
  std::vector<int> labels() const;
};

class DenseFeatures : public FeatureSet {
public:
  DenseFeatures(Eigen::MatrixXd x, std::vector<int> y);
  std::size_t size() const override { return y_.size(); }
  std::size_t dimension() const override { return static_cast<std::size_t>(x_.cols()); }
  int label(std::size_t i) const override { return y_[i]; }
  void fill(std::size_t i, RowRef row) const override { row = x_.row(static_cast<Eigen::Index>(i)); }

private:
  Eigen::MatrixXd x_;
  std::vector<int> y_;
};

/// Index sequences featurized either as scaled raw indices (window inputs)
/// or as the flattened embedded matrix (window * dimension inputs).
class SequenceFeatures : public FeatureSet {
public:
  SequenceFeatures(std::vector<IndexSequence> seqs, std::vector<int> y, const Vocabulary& vocab, Featurization mode);
  std::size_t size() const override { return y_.size(); }
  std::size_t dimension() const override;
  int label(std::size_t i) const override { return y_[i]; }
  void fill(std::size_t i, RowRef row) const override;

private:
  std::vector<IndexSequence> seqs_;
  std::vector<int> y_;
  const Vocabulary* vocab_;
  Featurization mode_;
};

/// Feature row of one index sequence, shared by training and classification.
Eigen::VectorXd featurize(const IndexSequence& seq, const Vocabulary& vocab, Featurization mode);

struct TrainConfig {
  std::vector<double> class_weights;  // empty: balanced weights from the training labels
  AdamConfig adam;
  std::size_t batch_size = 128;
  double min_delta = 0.001;
  std::size_t patience = 3;
  std::size_t max_epochs = 50;
  std::uint64_t seed = 42;
  std::size_t hidden = 128;
};

/// Patience counter over validation losses. An epoch counts as an
/// improvement when it beats the best loss so far by more than min_delta.
class EarlyStopping {
public:
  EarlyStopping(double min_delta, std::size_t patience);
  /// Records one epoch; true when training should stop now.
  bool update(double loss);
  std::size_t epochs() const { return epochs_; }

private:
  double min_delta_;
  std::size_t patience_;
  double best_ = std::numeric_limits<double>::infinity();
  std::size_t wait_ = 0;
  std::size_t epochs_ = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
  double validation_micro_f1 = 0.0;
};

struct TrainResult {
  Model model;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  bool stopped_early = false;
  std::vector<std::string> warnings;
};

TrainResult train(ModelKind kind, const FeatureSet& train_set, const FeatureSet& validation, std::size_t classes,
                  const TrainConfig& config = {});

/// Argmax of each row of `model.predict_batch` over a whole feature set.
std::vector<int> predict_labels(const Model& model, const FeatureSet& set, std::size_t batch_size = 256);

}  // namespace stmtcls
