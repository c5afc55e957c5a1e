#include "stmtcls/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

namespace stmtcls {

ZeroRule zero_rule_from_counts(const std::vector<std::size_t>& counts) {
  if (counts.empty() || std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == 0)
    throw std::invalid_argument("zero rule needs a nonempty label multiset");
  // max_element keeps the first maximum, i.e. the lowest index on ties
  return {static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin())};
}

ZeroRule zero_rule(const std::vector<int>& labels, int num_classes) {
  if (labels.empty()) throw std::invalid_argument("zero rule needs a nonempty label multiset");
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw std::invalid_argument("label out of range");
    ++counts[static_cast<std::size_t>(y)];
  }
  return zero_rule_from_counts(counts);
}

std::vector<double> balanced_class_weights(const std::vector<int>& labels, int num_classes) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (int y : labels) ++counts.at(static_cast<std::size_t>(y));
  std::vector<double> w(counts.size(), 1.0);
  const double n = static_cast<double>(labels.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k]) w[k] = n / (static_cast<double>(num_classes) * static_cast<double>(counts[k]));
  return w;
}

double weighted_cross_entropy(const Eigen::VectorXd& probs, int truth, const std::vector<double>& class_weights) {
  if (truth < 0 || truth >= probs.size()) throw std::invalid_argument("true label out of range");
  if (class_weights.size() != static_cast<std::size_t>(probs.size()))
    throw std::invalid_argument("class weight count does not match the distribution");
  if ((probs.array() < 0.0).any() || !probs.allFinite() || std::abs(probs.sum() - 1.0) > 1e-6)
    throw std::invalid_argument("probabilities do not form a distribution");
  return -class_weights[static_cast<std::size_t>(truth)] * std::log(std::max(probs[truth], kProbabilityFloor));
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

namespace {

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd p = z.colwise() - z.rowwise().maxCoeff();
  p = p.array().exp();
  p.array().colwise() /= p.rowwise().sum().array();
  return p;
}

}  // namespace

void adam_step(std::vector<Eigen::MatrixXd>& params, const std::vector<Eigen::MatrixXd>& grads, AdamState& state,
               const AdamConfig& config) {
  if (grads.size() != params.size()) throw std::invalid_argument("parameter and gradient counts differ");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].rows() != params[i].rows() || grads[i].cols() != params[i].cols())
      throw std::invalid_argument("gradient shape mismatch for parameter " + std::to_string(i));
    if (!grads[i].allFinite())
      throw TrainingError("non-finite gradient for parameter " + std::to_string(i) + " at step " +
                          std::to_string(state.step + 1));
  }
  if (state.m.size() != params.size()) {
    state.m.clear();
    state.v.clear();
    for (const auto& p : params) {
      state.m.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
      state.v.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
    }
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * grads[i];
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * grads[i].cwiseProduct(grads[i]);
    params[i].array() -=
        config.learning_rate * (state.m[i].array() / c1) / ((state.v[i].array() / c2).sqrt() + config.epsilon);
  }
}

std::string to_string(ModelKind kind) { return kind == ModelKind::Linear ? "logreg" : "mlp"; }

std::string to_string(Featurization f) {
  switch (f) {
    case Featurization::Index: return "index";
    case Featurization::Embedded: return "embedded";
    default: return "dense";
  }
}

Model Model::linear(std::size_t inputs, std::size_t classes) {
  Model m;
  m.kind_ = ModelKind::Linear;
  m.inputs_ = inputs;
  m.classes_ = classes;
  m.params_ = {Eigen::MatrixXd::Zero(inputs, classes), Eigen::MatrixXd::Zero(1, classes)};
  return m;
}

Model Model::mlp(std::size_t inputs, std::size_t hidden, std::size_t classes) {
  Model m;
  m.kind_ = ModelKind::Mlp;
  m.inputs_ = inputs;
  m.hidden_ = hidden;
  m.classes_ = classes;
  m.params_ = {Eigen::MatrixXd::Zero(inputs, hidden), Eigen::MatrixXd::Zero(1, hidden),
               Eigen::MatrixXd::Zero(hidden, classes), Eigen::MatrixXd::Zero(1, classes)};
  return m;
}

void Model::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < params_.size(); i += 2) {
    auto& w = params_[i];
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    params_[i + 1].setZero();
  }
}

void Model::check_input(Eigen::Index cols) const {
  if (static_cast<std::size_t>(cols) != inputs_)
    throw ModelError("input has " + std::to_string(cols) + " features, model expects " + std::to_string(inputs_));
}

Eigen::MatrixXd Model::logits(const Eigen::MatrixXd& x) const {
  check_input(x.cols());
  if (kind_ == ModelKind::Linear) return (x * params_[0]).rowwise() + params_[1].row(0);
  Eigen::MatrixXd a = ((x * params_[0]).rowwise() + params_[1].row(0)).cwiseMax(0.0);
  return (a * params_[2]).rowwise() + params_[3].row(0);
}

Eigen::MatrixXd Model::predict_batch(const Eigen::MatrixXd& x) const { return softmax_rows(logits(x)); }

Eigen::VectorXd Model::predict(const Eigen::VectorXd& x) const {
  return predict_batch(x.transpose()).row(0).transpose();
}

double Model::loss(const Eigen::MatrixXd& x, const std::vector<int>& y, const std::vector<double>& class_weights,
                   std::vector<Eigen::MatrixXd>* grads) const {
  check_input(x.cols());
  const auto n = x.rows();
  if (static_cast<std::size_t>(n) != y.size() || n == 0) throw ModelError("batch and label counts differ");
  if (class_weights.size() != classes_) throw ModelError("class weight count does not match the model");

  Eigen::MatrixXd h, a;
  Eigen::MatrixXd z;
  if (kind_ == ModelKind::Linear) {
    z = (x * params_[0]).rowwise() + params_[1].row(0);
  } else {
    h = (x * params_[0]).rowwise() + params_[1].row(0);
    a = h.cwiseMax(0.0);
    z = (a * params_[2]).rowwise() + params_[3].row(0);
  }
  const Eigen::MatrixXd p = softmax_rows(z);

  double total = 0.0;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(classes_));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int t = y[static_cast<std::size_t>(i)];
    if (t < 0 || static_cast<std::size_t>(t) >= classes_) throw ModelError("label out of range");
    const double w = class_weights[static_cast<std::size_t>(t)];
    const double pt = p(i, t);
    total += -w * std::log(std::max(pt, kProbabilityFloor));
    if (pt >= kProbabilityFloor) {
      g.row(i) = w * p.row(i);
      g(i, t) -= w;
    }
  }
  g /= static_cast<double>(n);
  if (grads) {
    grads->clear();
    if (kind_ == ModelKind::Linear) {
      grads->push_back(x.transpose() * g);
      grads->push_back(g.colwise().sum());
    } else {
      Eigen::MatrixXd da = g * params_[2].transpose();
      Eigen::MatrixXd dh = da.cwiseProduct((h.array() > 0.0).cast<double>().matrix());
      grads->push_back(x.transpose() * dh);
      grads->push_back(dh.colwise().sum());
      grads->push_back(a.transpose() * g);
      grads->push_back(g.colwise().sum());
    }
  }
  return total / static_cast<double>(n);
}

namespace {

constexpr char kMagic[8] = {'S', 'T', 'M', 'T', 'M', 'D', 'L', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }
void put_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ModelError("truncated model file");
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ModelError("truncated model file");
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const auto n = get_u32(in);
  if (n > (1u << 20)) throw ModelError("corrupt string in model file");
  std::string s(n, '\0');
  if (!in.read(s.data(), n)) throw ModelError("truncated model file");
  return s;
}

}  // namespace

void Model::write(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(kind_));
  put_u64(out, inputs_);
  put_u64(out, hidden_);
  put_u64(out, classes_);
  put_u32(out, static_cast<std::uint32_t>(featurization));
  put_u64(out, window);
  put_u64(out, vocab_size);
  put_u32(out, static_cast<std::uint32_t>(class_names.size()));
  for (const auto& c : class_names) put_string(out, c);
  put_u32(out, static_cast<std::uint32_t>(params_.size()));
  for (const auto& p : params_) {
    put_u64(out, static_cast<std::uint64_t>(p.rows()));
    put_u64(out, static_cast<std::uint64_t>(p.cols()));
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = p;
    out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
  }
  if (!out) throw ModelError("failed writing model");
}

Model Model::read(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw ModelError("not a model file");
  const auto version = get_u32(in);
  if (version != kVersion) throw ModelError("unsupported model version " + std::to_string(version));
  const auto kind = static_cast<ModelKind>(get_u32(in));
  const auto inputs = get_u64(in), hidden = get_u64(in), classes = get_u64(in);
  Model m = kind == ModelKind::Mlp ? mlp(inputs, hidden, classes)
            : kind == ModelKind::Linear ? linear(inputs, classes)
                                        : throw ModelError("unknown model kind");
  m.featurization = static_cast<Featurization>(get_u32(in));
  m.window = get_u64(in);
  m.vocab_size = get_u64(in);
  const auto names = get_u32(in);
  for (std::uint32_t i = 0; i < names; ++i) m.class_names.push_back(get_string(in));
  if (get_u32(in) != m.params_.size()) throw ModelError("parameter count does not match model kind");
  for (auto& p : m.params_) {
    const auto rows = get_u64(in), cols = get_u64(in);
    if (rows != static_cast<std::uint64_t>(p.rows()) || cols != static_cast<std::uint64_t>(p.cols()))
      throw ModelError("parameter shape does not match header");
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
    if (!in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double))))
      throw ModelError("truncated model file");
    if (!rm.allFinite()) throw ModelError("non-finite weights in model file");
    p = rm;
  }
  return m;
}

void Model::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError("cannot write " + path.string());
  write(out);
}

Model Model::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read " + path.string());
  return read(in);
}

Eigen::MatrixXd FeatureSet::batch(const std::vector<std::size_t>& rows) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dimension()));
  for (std::size_t r = 0; r < rows.size(); ++r) fill(rows[r], x.row(static_cast<Eigen::Index>(r)));
  return x;
}

std::vector<int> FeatureSet::labels() const {
  std::vector<int> y(size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = label(i);
  return y;
}

DenseFeatures::DenseFeatures(Eigen::MatrixXd x, std::vector<int> y) : x_(std::move(x)), y_(std::move(y)) {
  if (static_cast<std::size_t>(x_.rows()) != y_.size()) throw std::invalid_argument("row and label counts differ");
}

SequenceFeatures::SequenceFeatures(std::vector<IndexSequence> seqs, std::vector<int> y, const Vocabulary& vocab,
                                   Featurization mode)
    : seqs_(std::move(seqs)), y_(std::move(y)), vocab_(&vocab), mode_(mode) {
  if (seqs_.size() != y_.size()) throw std::invalid_argument("sequence and label counts differ");
  if (mode_ == Featurization::Dense) throw std::invalid_argument("sequence features are index or embedded");
}

std::size_t SequenceFeatures::dimension() const {
  const std::size_t window = seqs_.empty() ? kDefaultWindow : seqs_.front().ids.size();
  return mode_ == Featurization::Index ? window : window * vocab_->dimension();
}

void SequenceFeatures::fill(std::size_t i, RowRef row) const {
  row = featurize(seqs_[i], *vocab_, mode_).transpose();
}

Eigen::VectorXd featurize(const IndexSequence& seq, const Vocabulary& vocab, Featurization mode) {
  const auto window = seq.ids.size();
  if (mode == Featurization::Index) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(window));
    const double scale = vocab.size() ? static_cast<double>(vocab.size()) : 1.0;
    for (std::size_t i = 0; i < window; ++i) x[static_cast<Eigen::Index>(i)] = seq.ids[i] / scale;
    return x;
  }
  if (mode != Featurization::Embedded) throw ModelError("dense models take no index sequences");
  const auto dim = vocab.dimension();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(window * dim));
  for (std::size_t i = 0; i < window; ++i) {
    if (seq.ids[i] == 0) continue;
    if (seq.ids[i] > vocab.size()) throw EmbeddingError("index out of range: " + std::to_string(seq.ids[i]));
    x.segment(static_cast<Eigen::Index>(i * dim), static_cast<Eigen::Index>(dim)) = vocab.vector(seq.ids[i]).transpose();
  }
  return x;
}

EarlyStopping::EarlyStopping(double min_delta, std::size_t patience) : min_delta_(min_delta), patience_(patience) {
  if (patience_ < 1) throw std::invalid_argument("patience must be at least 1");
}

bool EarlyStopping::update(double loss) {
  ++epochs_;
  if (loss < best_ - min_delta_) {
    best_ = loss;
    wait_ = 0;
    return false;
  }
  return ++wait_ >= patience_;
}

namespace {

double evaluate_loss(const Model& model, const FeatureSet& set, const std::vector<double>& weights,
                     std::size_t batch_size, std::vector<int>* predictions) {
  double total = 0.0;
  std::vector<std::size_t> rows;
  std::vector<int> y;
  for (std::size_t start = 0; start < set.size(); start += batch_size) {
    rows.clear();
    y.clear();
    for (std::size_t i = start; i < std::min(set.size(), start + batch_size); ++i) {
      rows.push_back(i);
      y.push_back(set.label(i));
    }
    const Eigen::MatrixXd x = set.batch(rows);
    total += model.loss(x, y, weights) * static_cast<double>(rows.size());
    if (predictions) {
      const Eigen::MatrixXd z = model.logits(x);
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        Eigen::Index arg;
        z.row(r).maxCoeff(&arg);
        predictions->push_back(static_cast<int>(arg));
      }
    }
  }
  return total / static_cast<double>(set.size());
}

}  // namespace

TrainResult train(ModelKind kind, const FeatureSet& train_set, const FeatureSet& validation, std::size_t classes,
                  const TrainConfig& config) {
  if (train_set.size() == 0 || validation.size() == 0) throw TrainingError("training and validation sets must be nonempty");
  if (train_set.dimension() != validation.dimension()) throw TrainingError("train and validation dimensions differ");
  if (config.batch_size == 0) throw TrainingError("batch size must be positive");

  TrainResult result;
  const auto labels = train_set.labels();
  auto weights = config.class_weights.empty() ? balanced_class_weights(labels, static_cast<int>(classes))
                                              : config.class_weights;
  if (weights.size() != classes) throw TrainingError("class weight count does not match class count");
  for (double w : weights)
    if (!(w > 0.0)) throw TrainingError("class weights must be positive");
  if (std::set<int>(labels.begin(), labels.end()).size() < 2)
    result.warnings.push_back("training set holds a single class");

  Model model = kind == ModelKind::Mlp ? Model::mlp(train_set.dimension(), config.hidden, classes)
                                       : Model::linear(train_set.dimension(), classes);
  model.initialize(config.seed);

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  AdamState adam;
  EarlyStopping stopper(config.min_delta, config.patience);
  double best_loss = std::numeric_limits<double>::infinity();
  result.model = model;

  std::vector<Eigen::MatrixXd> grads;
  std::vector<std::size_t> rows;
  std::vector<int> y;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double train_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const auto end = std::min(order.size(), start + config.batch_size);
      rows.assign(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
      y.clear();
      for (auto r : rows) y.push_back(train_set.label(r));
      train_loss += model.loss(train_set.batch(rows), y, weights, &grads) * static_cast<double>(rows.size());
      adam_step(model.params(), grads, adam, config.adam);
    }
    std::vector<int> predicted;
    const double val_loss = evaluate_loss(model, validation, weights, 256, &predicted);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == validation.label(i);
    result.history.push_back({epoch, train_loss / static_cast<double>(order.size()), val_loss,
                              static_cast<double>(hits) / static_cast<double>(predicted.size())});
    if (!std::isfinite(val_loss)) throw TrainingError("validation loss diverged at epoch " + std::to_string(epoch));
    if (val_loss < best_loss) {
      best_loss = val_loss;
      result.best_epoch = epoch;
      result.model = model;
    }
    if (stopper.update(val_loss)) {
      result.stopped_early = epoch < config.max_epochs;
      break;
    }
  }
  return result;
}

std::vector<int> predict_labels(const Model& model, const FeatureSet& set, std::size_t batch_size) {
  std::vector<int> out;
  out.reserve(set.size());
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < set.size(); start += batch_size) {
    rows.clear();
    for (std::size_t i = start; i < std::min(set.size(), start + batch_size); ++i) rows.push_back(i);
    const Eigen::MatrixXd z = model.logits(set.batch(rows));
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      Eigen::Index arg;
      z.row(r).maxCoeff(&arg);
      out.push_back(static_cast<int>(arg));
    }
  }
  return out;
}

}  // namespace stmtcls
