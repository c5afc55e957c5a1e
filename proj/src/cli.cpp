#include "stmtcls/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "stmtcls/evaluation.hpp"
#include "stmtcls/math_lexer.hpp"
#include "stmtcls/service.hpp"

namespace stmtcls {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

NestSplits prepare_splits(const fs::path& dataset, const Taxonomy& taxonomy, double ratio,
                          double validation_fraction) {
  NestSplits s;
  s.view = regroup_to_nests(list_dataset(dataset), taxonomy);
  std::vector<DatasetFile> files;
  for (const auto& e : s.view.entries) files.push_back(e.file);
  const auto split = split_train_test(files, ratio);
  const auto carved = carve_validation(split.train, validation_fraction);
  std::set<std::string> train, validation;
  for (const auto& f : carved.train) train.insert(f.relative());
  for (const auto& f : carved.test) validation.insert(f.relative());
  for (const auto& e : s.view.entries) {
    const auto rel = e.file.relative();
    if (train.count(rel)) s.train.push_back(e);
    else if (validation.count(rel)) s.validation.push_back(e);
    else s.test.push_back(e);
  }
  return s;
}

LabeledSequences load_sequences(const fs::path& dataset, const std::vector<NestEntry>& entries,
                                const Vocabulary& vocab, std::size_t window) {
  LabeledSequences out;
  for (const auto& e : entries) {
    out.seqs.push_back(index_tokens(serialized_tokens(read_text_file(dataset / e.file.relative())), vocab, window));
    out.labels.push_back(static_cast<int>(e.nest_index));
  }
  return out;
}

void emit_lists(const fs::path& dataset, const fs::path& out, const Taxonomy& taxonomy, const Split& split,
                const Vocabulary* vocab, std::size_t window, double ratio) {
  fs::create_directories(out);
  auto list = [](const std::vector<DatasetFile>& files) {
    std::string s;
    for (const auto& f : files) s += f.relative() + "\n";
    return s;
  };
  write_text_file(out / "train.lst", list(split.train));
  write_text_file(out / "test.lst", list(split.test));
  if (!vocab) return;

  std::size_t in_task[2] = {0, 0};
  auto indexed = [&](const std::vector<DatasetFile>& files, std::size_t& count) {
    std::string s;
    for (const auto& f : files) {
      auto nest = taxonomy.nest_of(f.label);
      if (!nest) continue;
      const auto seq = index_tokens(serialized_tokens(read_text_file(dataset / f.relative())), *vocab, window);
      s += f.relative() + " " + std::to_string(*taxonomy.nest_index(*nest));
      for (auto id : seq.ids) s += " " + std::to_string(id);
      s += "\n";
      ++count;
    }
    return s;
  };
  write_text_file(out / "train.idx", indexed(split.train, in_task[0]));
  write_text_file(out / "test.idx", indexed(split.test, in_task[1]));
  std::string tokens;
  for (const auto& t : vocab->tokens()) tokens += t + "\n";
  write_text_file(out / "vocab.txt", tokens);
  std::string labels;
  for (const auto& n : taxonomy.nest_names()) labels += n + "\n";
  write_text_file(out / "labels.txt", labels);

  char ratio_text[32];
  std::snprintf(ratio_text, sizeof ratio_text, "%.6f", ratio);
  std::ostringstream e;
  e << "# dataset export\n"
    << "format=1\n"
    << "window=" << window << "\n"
    << "classes=" << taxonomy.nests().size() << "\n"
    << "vocab_size=" << vocab->size() << "\n"
    << "dimension=" << vocab->dimension() << "\n"
    << "ratio=" << ratio_text << "\n"
    << "train=" << in_task[0] << "\n"
    << "test=" << in_task[1] << "\n"
    << "index_file_line=<relative-path> <class-index> <id_1> ... <id_window>\n"
    << "index_base=1\n"
    << "padding_index=0\n"
    << "vocab_file=vocab.txt\n"
    << "labels_file=labels.txt\n";
  write_text_file(out / "EXPORT", e.str());
}

namespace {

struct Common {
  std::string taxonomy;
  Taxonomy load_taxonomy() const { return Taxonomy::load(taxonomy.empty() ? default_taxonomy_path() : fs::path(taxonomy)); }
};

Featurization parse_features(const std::string& s) {
  if (s == "embedded") return Featurization::Embedded;
  if (s == "index") return Featurization::Index;
  throw std::invalid_argument("unknown feature mode '" + s + "'");
}

ModelKind parse_kind(const std::string& s) {
  if (s == "logreg") return ModelKind::Linear;
  if (s == "mlp") return ModelKind::Mlp;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

Vocabulary load_vocab(const std::string& path, std::ostream& err) {
  LoadReport report;
  auto vocab = load_vectors(path, &report);
  if (report.duplicates) err << "warning: " << report.duplicates << " duplicate tokens in " << path << "\n";
  return vocab;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statement classification pipeline over scholarly HTML", "stmtcls"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--taxonomy", common.taxonomy, "Taxonomy file (default: bundled)");
  Json summary;

  // extract
  auto* extract = app.add_subcommand("extract", "Build a labeled dataset from an HTML corpus");
  std::string input, output;
  bool no_math = false, overwrite = false;
  unsigned jobs = 0;
  std::size_t window = kDefaultWindow;
  extract->add_option("--input", input, "Corpus directory")->required();
  extract->add_option("--output", output, "Dataset directory")->required();
  extract->add_option("--taxonomy", common.taxonomy, "Taxonomy file");
  extract->add_flag("--no-math", no_math, "Delete all math content");
  extract->add_flag("--overwrite", overwrite, "Replace a non-empty output directory");
  extract->add_option("--jobs", jobs, "Worker threads (0: all cores)");
  extract->add_option("--window", window, "Coverage window in tokens");

  // stats
  auto* stats = app.add_subcommand("stats", "Word-count statistics of a dataset");
  std::string dataset;
  stats->add_option("--dataset", dataset, "Dataset directory")->required();
  stats->add_option("--window", window, "Coverage window in tokens");

  // split
  auto* split = app.add_subcommand("split", "Deterministic train/test split");
  double ratio = 0.8;
  bool emit = false;
  std::string emit_dir, vectors;
  split->add_option("--dataset", dataset, "Dataset directory")->required();
  split->add_option("--ratio", ratio, "Train fraction");
  split->add_flag("--emit-lists", emit, "Write train.lst/test.lst (and index export with --vectors)");
  split->add_option("--out", emit_dir, "Directory for emitted lists (default: dataset directory)");
  split->add_option("--vectors", vectors, "Word vectors for the index export");
  split->add_option("--window", window, "Sequence length of the index export");
  split->add_option("--taxonomy", common.taxonomy, "Taxonomy file");

  // train
  auto* trn = app.add_subcommand("train", "Train a shallow baseline on the 13-nest task");
  std::string model_path, kind_name = "logreg", features_name = "embedded";
  TrainConfig config;
  double validation_fraction = 0.05;
  trn->add_option("--dataset", dataset, "Dataset directory")->required();
  trn->add_option("--vectors", vectors, "Word vectors")->required();
  trn->add_option("--model", model_path, "Output model file")->required();
  trn->add_option("--kind", kind_name, "logreg or mlp");
  trn->add_option("--features", features_name, "embedded or index");
  trn->add_option("--window", window, "Paragraph window in tokens");
  trn->add_option("--ratio", ratio, "Train fraction");
  trn->add_option("--validation", validation_fraction, "Validation fraction of train");
  trn->add_option("--epochs", config.max_epochs, "Maximum epochs");
  trn->add_option("--batch", config.batch_size, "Batch size");
  trn->add_option("--lr", config.adam.learning_rate, "Adam learning rate");
  trn->add_option("--hidden", config.hidden, "Hidden units (mlp)");
  trn->add_option("--seed", config.seed, "Random seed");
  trn->add_option("--min-delta", config.min_delta, "Early-stopping loss delta");
  trn->add_option("--patience", config.patience, "Early-stopping patience");
  trn->add_option("--taxonomy", common.taxonomy, "Taxonomy file");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Score a model (or the zero rule) on the test split");
  std::string confusion_out, heatmap_out, report_out;
  bool use_zero_rule = false;
  eval->add_option("--dataset", dataset, "Dataset directory")->required();
  eval->add_option("--model", model_path, "Model file");
  eval->add_option("--vectors", vectors, "Word vectors");
  eval->add_flag("--zero-rule", use_zero_rule, "Score the majority-class baseline");
  eval->add_option("--ratio", ratio, "Train fraction");
  eval->add_option("--confusion", confusion_out, "Write the confusion matrix CSV");
  eval->add_option("--heatmap", heatmap_out, "Write an SVG heatmap");
  eval->add_option("--report", report_out, "Write the report");
  eval->add_option("--taxonomy", common.taxonomy, "Taxonomy file");

  // report
  auto* report = app.add_subcommand("report", "Report and heatmap from a confusion matrix CSV");
  std::string confusion_in;
  report->add_option("--confusion", confusion_in, "Confusion matrix CSV")->required();
  report->add_option("--heatmap", heatmap_out, "Write an SVG heatmap");

  // nests
  auto* nests = app.add_subcommand("nests", "Propose confusion nests from a confusion matrix");
  double threshold = 0.25;
  nests->add_option("--confusion", confusion_in, "Confusion matrix CSV")->required();
  nests->add_option("--threshold", threshold, "Minimum symmetric confusion mass");

  // classify
  auto* classify = app.add_subcommand("classify", "Classify a plain-text paragraph");
  std::string text_path;
  classify->add_option("--model", model_path, "Model file")->required();
  classify->add_option("--vectors", vectors, "Word vectors")->required();
  classify->add_option("--text", text_path, "Text file ('-' for stdin)")->required();

  // serve
  auto* srv = app.add_subcommand("serve", "HTTP endpoint POST /classify");
  std::string host = "127.0.0.1";
  int port = 8080;
  srv->add_option("--model", model_path, "Model file")->required();
  srv->add_option("--vectors", vectors, "Word vectors")->required();
  srv->add_option("--host", host, "Listen address");
  srv->add_option("--port", port, "Listen port");

  // lexemes
  auto* lex = app.add_subcommand("lexemes", "Print math lexemes of a MathML fragment");
  std::string markup_path;
  lex->add_option("--mathml", markup_path, "File holding a <math> element ('-' for stdin)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  auto read_input = [](const std::string& path) {
    if (path == "-") {
      std::ostringstream ss;
      ss << std::cin.rdbuf();
      return ss.str();
    }
    return read_text_file(path);
  };

  const std::string command = app.get_subcommands().front()->get_name();
  summary["command"] = command;
  try {
    if (command == "extract") {
      ExtractOptions opt{no_math ? ExtractionMode::NoMath : ExtractionMode::WithMath, jobs, window, overwrite};
      const auto manifest = extract_corpus(input, output, common.load_taxonomy(), opt);
      out << manifest.serialize();
      summary["documents"] = manifest.documents;
      summary["failed_documents"] = manifest.failed_documents;
      summary["paragraphs"] = manifest.paragraphs();
      summary["collisions"] = manifest.collisions;
      summary["skips"] = manifest.skips;
    } else if (command == "stats") {
      const auto s = compute_stats(dataset, window);
      out << "paragraphs=" << s.paragraphs << "\n"
          << "mean_words=" << fixed(s.mean_words) << "\n"
          << "median_words=" << fixed(s.median_words) << "\n"
          << "coverage=" << fixed(s.coverage) << "\n"
          << "window=" << s.window << "\n";
      summary["paragraphs"] = s.paragraphs;
      summary["mean_words"] = s.mean_words;
      summary["median_words"] = s.median_words;
      summary["coverage"] = s.coverage;
    } else if (command == "split") {
      const auto files = list_dataset(dataset);
      const auto parts = split_train_test(files, ratio);
      out << "train=" << parts.train.size() << "\n" << "test=" << parts.test.size() << "\n";
      if (emit) {
        std::optional<Vocabulary> vocab;
        if (!vectors.empty()) vocab = load_vocab(vectors, err);
        const fs::path dir = emit_dir.empty() ? fs::path(dataset) : fs::path(emit_dir);
        emit_lists(dataset, dir, common.load_taxonomy(), parts, vocab ? &*vocab : nullptr, window, ratio);
        out << "lists=" << dir.string() << "\n";
      }
      summary["train"] = parts.train.size();
      summary["test"] = parts.test.size();
    } else if (command == "train") {
      const auto taxonomy = common.load_taxonomy();
      const auto vocab = load_vocab(vectors, err);
      const auto splits = prepare_splits(dataset, taxonomy, ratio, validation_fraction);
      for (const auto& w : splits.view.warnings) err << "warning: " << w << "\n";
      if (splits.validation.empty()) throw std::runtime_error("validation slice is empty; raise --validation");
      const auto mode = parse_features(features_name);
      auto tr = load_sequences(dataset, splits.train, vocab, window);
      auto va = load_sequences(dataset, splits.validation, vocab, window);
      SequenceFeatures train_set(std::move(tr.seqs), std::move(tr.labels), vocab, mode);
      SequenceFeatures val_set(std::move(va.seqs), std::move(va.labels), vocab, mode);
      auto result = train(parse_kind(kind_name), train_set, val_set, taxonomy.nests().size(), config);
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      for (const auto& h : result.history)
        out << "epoch " << h.epoch << " train_loss " << fixed(h.train_loss) << " val_loss " << fixed(h.validation_loss)
            << " val_f1 " << fixed(h.validation_micro_f1) << "\n";
      auto& model = result.model;
      model.class_names = taxonomy.nest_names();
      model.featurization = mode;
      model.window = window;
      model.vocab_size = vocab.size();
      model.save(model_path);
      out << "best_epoch " << result.best_epoch << "\n";
      summary["train"] = splits.train.size();
      summary["validation"] = splits.validation.size();
      summary["epochs"] = result.history.size();
      summary["best_epoch"] = result.best_epoch;
      summary["stopped_early"] = result.stopped_early;
    } else if (command == "evaluate") {
      const auto taxonomy = common.load_taxonomy();
      const auto splits = prepare_splits(dataset, taxonomy, ratio, 0.0);
      if (splits.test.empty()) throw std::runtime_error("test split is empty");
      std::vector<int> truth, predicted;
      for (const auto& e : splits.test) truth.push_back(static_cast<int>(e.nest_index));
      if (use_zero_rule) {
        std::vector<int> train_labels;
        for (const auto& e : splits.train) train_labels.push_back(static_cast<int>(e.nest_index));
        const auto zr = zero_rule(train_labels, static_cast<int>(taxonomy.nests().size()));
        predicted.assign(truth.size(), zr.label);
      } else {
        if (model_path.empty() || vectors.empty()) throw CLI::RequiredError("--model and --vectors (or --zero-rule)");
        const auto model = Model::load(model_path);
        const auto vocab = load_vocab(vectors, err);
        Classifier check(model, vocab);  // validates model/vocabulary compatibility
        auto te = load_sequences(dataset, splits.test, vocab, model.window);
        SequenceFeatures test_set(std::move(te.seqs), std::move(te.labels), vocab, model.featurization);
        predicted = predict_labels(model, test_set);
      }
      const auto cm = confusion(truth, predicted, taxonomy.nests().size(), taxonomy.nest_names());
      const auto text = format_report(cm);
      out << text;
      if (!report_out.empty()) write_text_file(report_out, text);
      if (!confusion_out.empty()) write_text_file(confusion_out, confusion_to_csv(cm));
      if (!heatmap_out.empty()) write_text_file(heatmap_out, heatmap_svg(cm));
      summary["test"] = truth.size();
      summary["micro_f1"] = micro_f1(cm);
    } else if (command == "report") {
      const auto cm = confusion_from_csv(read_text_file(confusion_in));
      out << format_report(cm);
      if (!heatmap_out.empty()) write_text_file(heatmap_out, heatmap_svg(cm));
      summary["micro_f1"] = micro_f1(cm);
    } else if (command == "nests") {
      const auto cm = confusion_from_csv(read_text_file(confusion_in));
      const auto p = propose_nests(row_normalize(cm), threshold);
      for (const auto& m : p.trace)
        out << "merge " << cm.classes[m.i] << " " << cm.classes[m.j] << " " << fixed(m.mass) << "\n";
      for (const auto& g : p.groups) {
        out << "group";
        for (auto k : g) out << " " << cm.classes[k];
        out << "\n";
      }
      summary["groups"] = p.groups.size();
      summary["merges"] = p.trace.size();
    } else if (command == "classify") {
      Classifier classifier(Model::load(model_path), load_vocab(vectors, err));
      const auto c = classifier.classify(read_input(text_path));
      out << c.to_json() << "\n";
      summary["label"] = c.label;
    } else if (command == "serve") {
      Classifier classifier(Model::load(model_path), load_vocab(vectors, err));
      err << "listening on " << host << ":" << port << "\n";
      serve(classifier, host, port);
    } else if (command == "lexemes") {
      math::LexStats ls;
      const auto lexemes = math::lexemize_markup(read_input(markup_path), &ls);
      for (std::size_t i = 0; i < lexemes.size(); ++i) out << (i ? " " : "") << lexemes[i];
      out << "\n";
      summary["lexemes"] = lexemes.size();
      summary["warnings"] = ls.warnings;
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    summary["status"] = "error";
    summary["error"] = e.what();
    err << "summary: " << summary.dump() << "\n";
    return 1;
  }
  summary["status"] = "ok";
  err << "summary: " << summary.dump() << "\n";
  return 0;
}

}  // namespace stmtcls
