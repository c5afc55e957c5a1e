#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stmtcls/classifiers.hpp"
#include "stmtcls/embeddings.hpp"

namespace stmtcls {

inline constexpr std::size_t kMaxRequestBytes = 64 * 1024;

struct Classification {
  std::string label;
  std::vector<double> probs;
  std::size_t tokens = 0;  // in-vocabulary tokens inside the window

  /// {"label": ..., "probs": [...], "tokens": n}
  std::string to_json() const;
};

/// Plain text -> normalize -> index -> featurize -> predict. Read-only after
/// construction, safe to share between request threads.
class Classifier {
public:
  Classifier(Model model, Vocabulary vocab);
  Classification classify(std::string_view text) const;
  const Model& model() const { return model_; }

private:
  Model model_;
  Vocabulary vocab_;
};

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// The request handler behind POST /classify, independent of the socket layer.
HttpReply handle_classify(const Classifier& classifier, std::string_view body);

/// HTTP front end for POST /classify.
class ClassifyServer {
public:
  explicit ClassifyServer(const Classifier& classifier);
  ~ClassifyServer();
  /// Binds the socket; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called from another thread.
  void run();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocks serving POST /classify until the process is stopped.
void serve(const Classifier& classifier, const std::string& host, int port);

}  // namespace stmtcls
