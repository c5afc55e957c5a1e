#include <doctest.h>

#include <sstream>
#include <thread>

#include "stmtcls/cli.hpp"
#include "stmtcls/service.hpp"
#include "support.hpp"

// after Eigen: resolv.h defines a _res macro
#include <httplib.h>
#include <json.hpp>

using namespace stmtcls;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run_subcommand(args, out, err);
  return {status, out.str(), err.str()};
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  return {};
}

const char* kRemark = "Importantly, note that italic_c is independent of the italic_epsilon POSTSUBSCRIPT_start "
                      "italic_j POSTSUBSCRIPT_end 's.";

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({}).status == 2);
  auto r = run({"extract", "--input", "x"});
  CHECK(r.status == 2);
  CHECK(r.err.find("--output") != std::string::npos);
  CHECK(run({"--help"}).status == 0);
}

TEST_CASE("runtime failures exit with 1 and a summary line") {
  auto r = run({"stats", "--dataset", "/nonexistent/dataset"});
  CHECK(r.status == 1);
  CHECK(r.err.find("summary: {") != std::string::npos);
  CHECK(r.err.find("\"status\":\"error\"") != std::string::npos);
}

TEST_CASE("pipeline through the command line") {
  TempDir tmp("cli");
  const auto ds = (tmp.path / "ds").string();
  const auto vectors = (fixtures_dir() / "vectors.txt").string();

  auto ex = run({"extract", "--input", (fixtures_dir() / "corpus").string(), "--output", ds});
  REQUIRE(ex.status == 0);
  CHECK(ex.err.find("summary: {\"command\":\"extract\"") != std::string::npos);

  SUBCASE("stats equal the manifest") {
    auto st = run({"stats", "--dataset", ds});
    REQUIRE(st.status == 0);
    CHECK(value_of(st.out, "mean_words") == value_of(ex.out, "stats.mean_words"));
    CHECK(value_of(st.out, "median_words") == value_of(ex.out, "stats.median_words"));
    CHECK(value_of(st.out, "coverage") == value_of(ex.out, "stats.coverage"));
    CHECK(value_of(st.out, "paragraphs") == value_of(ex.out, "paragraphs"));
  }

  SUBCASE("split emits lists and the index export") {
    const auto out = (tmp.path / "export").string();
    auto sp = run({"split", "--dataset", ds, "--emit-lists", "--out", out, "--vectors", vectors, "--window", "16"});
    REQUIRE(sp.status == 0);
    for (const char* f : {"train.lst", "test.lst", "train.idx", "test.idx", "vocab.txt", "labels.txt", "EXPORT"})
      CHECK(fs::exists(fs::path(out) / f));
    const auto lst = read_text_file(fs::path(out) / "train.lst") + read_text_file(fs::path(out) / "test.lst");
    CHECK(std::count(lst.begin(), lst.end(), '\n') == std::stol(value_of(ex.out, "paragraphs")));
    const auto exp = read_text_file(fs::path(out) / "EXPORT");
    CHECK(value_of(exp, "window") == "16");
    CHECK(value_of(exp, "classes") == "13");
    std::istringstream idx(read_text_file(fs::path(out) / "train.idx"));
    std::string line;
    while (std::getline(idx, line)) {
      std::istringstream fields(line);
      std::string rel;
      int label;
      fields >> rel >> label;
      CHECK(label >= 0);
      CHECK(label < 13);
      int n = 0, id;
      while (fields >> id) ++n;
      CHECK(n == 16);
    }
  }

  SUBCASE("train, evaluate, classify and serve agree") {
    const auto model = (tmp.path / "model.bin").string();
    auto tr = run({"train", "--dataset", ds, "--vectors", vectors, "--model", model, "--kind", "mlp", "--hidden", "8",
                   "--window", "32", "--epochs", "3", "--validation", "0.5", "--ratio", "0.8"});
    REQUIRE_MESSAGE(tr.status == 0, tr.err);
    CHECK(fs::exists(model));

    auto ev = run({"evaluate", "--dataset", ds, "--model", model, "--vectors", vectors, "--confusion",
                   (tmp.path / "cm.csv").string(), "--heatmap", (tmp.path / "cm.svg").string()});
    REQUIRE_MESSAGE(ev.status == 0, ev.err);
    CHECK(ev.out.rfind("micro_f1 ", 0) == 0);
    CHECK(fs::exists(tmp.path / "cm.svg"));

    auto ns = run({"nests", "--confusion", (tmp.path / "cm.csv").string()});
    CHECK(ns.status == 0);
    CHECK(ns.out.find("group") != std::string::npos);

    auto zr = run({"evaluate", "--dataset", ds, "--zero-rule"});
    CHECK(zr.status == 0);

    write_text_file(tmp.path / "remark.txt", kRemark);
    auto cl = run({"classify", "--model", model, "--vectors", vectors, "--text", (tmp.path / "remark.txt").string()});
    REQUIRE(cl.status == 0);
    auto j = nlohmann::json::parse(cl.out);
    double sum = 0;
    for (double p : j["probs"]) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(j["probs"].size() == 13);
    CHECK(j["tokens"] == 11);

    Classifier classifier(Model::load(model), load_vectors(vectors));
    auto direct = handle_classify(classifier, kRemark);
    CHECK(direct.status == 200);
    CHECK(direct.body + "\n" == cl.out);
    CHECK(handle_classify(classifier, kRemark).body == direct.body);
    CHECK(handle_classify(classifier, "").status == 400);
    CHECK(handle_classify(classifier, "  \n").status == 400);
    CHECK(handle_classify(classifier, std::string(kMaxRequestBytes + 1, 'a')).status == 413);

    ClassifyServer server(classifier);
    const int port = server.bind("127.0.0.1", 0);
    std::thread th([&] { server.run(); });
    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/classify", kRemark, "text/plain");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body + "\n" == cl.out);
    auto empty = client.Post("/classify", "", "text/plain");
    REQUIRE(empty);
    CHECK(empty->status == 400);
    auto big = client.Post("/classify", std::string(kMaxRequestBytes + 10, 'a'), "text/plain");
    REQUIRE(big);
    CHECK(big->status == 413);
    server.stop();
    th.join();
  }
}

TEST_CASE("lexemes subcommand") {
  TempDir tmp("lex");
  write_text_file(tmp.path / "m.xml", "<math><msub><mi>ϵ</mi><mi>j</mi></msub></math>");
  auto r = run({"lexemes", "--mathml", (tmp.path / "m.xml").string()});
  CHECK(r.status == 0);
  CHECK(r.out == "italic_epsilon POSTSUBSCRIPT_start italic_j POSTSUBSCRIPT_end\n");
}
