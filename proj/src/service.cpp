#include "stmtcls/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "stmtcls/normalizer.hpp"

namespace stmtcls {

std::string Classification::to_json() const {
  nlohmann::ordered_json j;
  j["label"] = label;
  j["probs"] = probs;
  j["tokens"] = tokens;
  return j.dump();
}

Classifier::Classifier(Model model, Vocabulary vocab) : model_(std::move(model)), vocab_(std::move(vocab)) {
  if (model_.featurization == Featurization::Dense) throw ModelError("model was not trained on paragraph input");
  if (model_.class_names.size() != model_.classes()) throw ModelError("model carries no class names");
  if (model_.vocab_size != vocab_.size())
    throw ModelError("model expects a vocabulary of " + std::to_string(model_.vocab_size) + " tokens, got " +
                     std::to_string(vocab_.size()));
  const std::size_t expected =
      model_.featurization == Featurization::Index ? model_.window : model_.window * vocab_.dimension();
  if (expected != model_.inputs()) throw ModelError("vector dimension does not match the model");
}

Classification Classifier::classify(std::string_view text) const {
  const auto para = normalize_text(text);
  const auto seq = index_paragraph(para, vocab_, model_.window);
  const Eigen::VectorXd p = model_.predict(featurize(seq, vocab_, model_.featurization));
  Classification c;
  Eigen::Index best;
  p.maxCoeff(&best);
  c.label = model_.class_names[static_cast<std::size_t>(best)];
  c.probs.assign(p.data(), p.data() + p.size());
  c.tokens = seq.length;
  return c;
}

namespace {

HttpReply error_reply(int status, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = message;
  return {status, j.dump(), "application/json"};
}

}  // namespace

HttpReply handle_classify(const Classifier& classifier, std::string_view body) {
  if (body.size() > kMaxRequestBytes) return error_reply(413, "request body exceeds 64 KiB");
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return error_reply(400, "empty request body");
  try {
    return {200, classifier.classify(body).to_json(), "application/json"};
  } catch (const std::exception&) {
    return error_reply(500, "classification failed");
  }
}

struct ClassifyServer::Impl {
  httplib::Server server;
};

ClassifyServer::ClassifyServer(const Classifier& classifier) : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  server.set_payload_max_length(kMaxRequestBytes + 1);
  server.Post("/classify", [&classifier](const httplib::Request& req, httplib::Response& res) {
    auto reply = handle_classify(classifier, req.body);
    const auto accept = req.get_header_value("Accept");
    // plain text only when asked for and json is not acceptable
    if (reply.status == 200 && accept.find("text/plain") != std::string::npos &&
        accept.find("json") == std::string::npos) {
      reply.body = nlohmann::json::parse(reply.body)["label"].get<std::string>() + "\n";
      reply.content_type = "text/plain";
    }
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 413) res.set_content(R"({"error":"request body exceeds 64 KiB"})", "application/json");
  });
}

ClassifyServer::~ClassifyServer() = default;

int ClassifyServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void ClassifyServer::run() { impl_->server.listen_after_bind(); }

void ClassifyServer::stop() { impl_->server.stop(); }

void serve(const Classifier& classifier, const std::string& host, int port) {
  ClassifyServer server(classifier);
  server.bind(host, port);
  server.run();
}

}  // namespace stmtcls
