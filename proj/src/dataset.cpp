#include "stmtcls/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "stmtcls/corpus_reader.hpp"
#include "stmtcls/langid.hpp"
#include "stmtcls/quality.hpp"
#include "stmtcls/sha256.hpp"
#include "stmtcls/text_util.hpp"

namespace stmtcls {

namespace fs = std::filesystem;

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

bool is_hash_name(const std::string& stem) {
  return stem.size() == 64 &&
         std::all_of(stem.begin(), stem.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

unsigned hash_byte(const std::string& hash, std::size_t index) {
  return static_cast<unsigned>(std::stoul(hash.substr(2 * index, 2), nullptr, 16));
}

struct KeptParagraph {
  std::string label;
  std::string serialized;
};

struct UnitResult {
  std::vector<KeptParagraph> kept;
  ingest::SkipStats skips;
  std::size_t documents = 0;
  std::size_t failed = 0;
};

UnitResult process_unit(const CorpusUnit& unit, const Taxonomy& taxonomy, const ExtractOptions& options,
                        const LanguageIdentifier& langid) {
  UnitResult r;
  const NormalizeOptions norm{.include_math = options.mode == ExtractionMode::WithMath};
  try {
    read_unit(unit, [&](const std::string& doc_id, std::string_view bytes) {
      ++r.documents;
      html::Document doc;
      try {
        doc = ingest::parse_document(bytes, doc_id);
      } catch (const html::ParseError&) {
        ++r.failed;
        r.skips.add("parse-error");
        return;
      }
      const auto statements = ingest::extract_statements(doc, taxonomy, &r.skips);
      DocFlags flags;
      flags.document_language = langid.detect_text(ingest::document_text(doc)).language;
      for (const auto& stmt : statements) {
        const auto para = normalize(stmt, norm);
        flags.error_markup = stmt.error_markup;
        const auto decision = quality_filter(para, flags, langid);
        if (!decision.keep) {
          r.skips.add("dropped-" + decision.reason);
          continue;
        }
        r.kept.push_back({stmt.label, para.serialize()});
      }
    });
  } catch (const std::exception&) {
    ++r.failed;
    r.skips.add("read-error");
  }
  return r;
}

}  // namespace

std::string to_string(ExtractionMode mode) { return mode == ExtractionMode::WithMath ? "with-math" : "no-math"; }

ExtractionMode parse_mode(std::string_view s) {
  if (s == "with-math") return ExtractionMode::WithMath;
  if (s == "no-math") return ExtractionMode::NoMath;
  throw DatasetError("unknown extraction mode '" + std::string(s) + "'");
}

std::size_t DatasetManifest::paragraphs() const {
  std::size_t n = 0;
  for (const auto& l : labels) n += l.count;
  return n;
}

std::string DatasetManifest::serialize() const {
  std::ostringstream out;
  out << "# statement dataset manifest\n";
  out << "format=1\n";
  out << "mode=" << to_string(mode) << "\n";
  out << "split_seed=" << split_seed << "\n";
  out << "documents=" << documents << "\n";
  out << "documents.failed=" << failed_documents << "\n";
  out << "paragraphs=" << paragraphs() << "\n";
  out << "collisions=" << collisions << "\n";
  out << "stats.window=" << stats.window << "\n";
  out << "stats.mean_words=" << fixed6(stats.mean_words) << "\n";
  out << "stats.median_words=" << fixed6(stats.median_words) << "\n";
  out << "stats.coverage=" << fixed6(stats.coverage) << "\n";
  for (const auto& l : labels) {
    out << "label." << l.label << ".count=" << l.count << "\n";
    out << "label." << l.label << ".directory=" << l.directory << "\n";
  }
  for (const auto& [reason, n] : skips) out << "skip." << reason << "=" << n << "\n";
  return out.str();
}

DatasetManifest DatasetManifest::parse(std::string_view text) {
  DatasetManifest m;
  std::map<std::string, LabelEntry> labels;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos) throw DatasetError("malformed manifest line: " + std::string(t));
    const std::string key(t.substr(0, eq));
    const std::string value(t.substr(eq + 1));
    try {
      if (key == "format") {
        if (value != "1") throw DatasetError("unsupported manifest format " + value);
      } else if (key == "mode") {
        m.mode = parse_mode(value);
      } else if (key == "split_seed") {
        m.split_seed = value;
      } else if (key == "documents") {
        m.documents = std::stoul(value);
      } else if (key == "documents.failed") {
        m.failed_documents = std::stoul(value);
      } else if (key == "collisions") {
        m.collisions = std::stoul(value);
      } else if (key == "stats.window") {
        m.stats.window = std::stoul(value);
      } else if (key == "stats.mean_words") {
        m.stats.mean_words = std::stod(value);
      } else if (key == "stats.median_words") {
        m.stats.median_words = std::stod(value);
      } else if (key == "stats.coverage") {
        m.stats.coverage = std::stod(value);
      } else if (key.rfind("label.", 0) == 0) {
        auto dot = key.rfind('.');
        auto name = key.substr(6, dot - 6);
        auto& entry = labels[name];
        entry.label = name;
        if (key.substr(dot + 1) == "count") entry.count = std::stoul(value);
        else entry.directory = value;
      } else if (key.rfind("skip.", 0) == 0) {
        m.skips[key.substr(5)] = std::stoul(value);
      }
    } catch (const std::invalid_argument&) {
      throw DatasetError("bad manifest value for " + key + ": " + value);
    }
  }
  for (auto& [name, e] : labels) m.labels.push_back(std::move(e));
  m.stats.paragraphs = m.paragraphs();
  return m;
}

DatasetManifest DatasetManifest::read(const fs::path& path) { return parse(read_text_file(path)); }

DatasetWriter::DatasetWriter(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

fs::path DatasetWriter::write_paragraph(const NormalizedParagraph& para, const std::string& label) {
  return write_serialized(para.serialize(), label);
}

fs::path DatasetWriter::write_serialized(const std::string& serialized, const std::string& label) {
  const std::string hash = sha256_hex(serialized);
  const fs::path dir = root_ / label;
  const fs::path path = dir / (hash + ".txt");
  std::lock_guard lock(mu_);
  auto& labels = labels_by_hash_[hash];
  if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
    ++duplicates_;
    return path;
  }
  fs::create_directories(dir);
  write_text_file(path, serialized);
  labels.push_back(label);
  ++counts_[label];
  return path;
}

std::vector<Collision> DatasetWriter::collisions() const {
  std::lock_guard lock(mu_);
  std::vector<Collision> out;
  for (const auto& [hash, labels] : labels_by_hash_) {
    if (labels.size() < 2) continue;
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    out.push_back({hash, std::move(sorted)});
  }
  return out;
}

std::map<std::string, std::size_t> DatasetWriter::label_counts() const {
  std::lock_guard lock(mu_);
  return counts_;
}

DatasetManifest extract_corpus(const fs::path& input, const fs::path& output, const Taxonomy& taxonomy,
                               const ExtractOptions& options) {
  if (fs::exists(output) && !fs::is_empty(output)) {
    if (!options.overwrite) throw DatasetError("output directory is not empty: " + output.string());
    fs::remove_all(output);
  }
  const auto units = enumerate_corpus(input);
  if (units.empty()) std::cerr << "warning: no documents found under " << input.string() << "\n";
  const auto& langid = LanguageIdentifier::bundled();

  std::vector<UnitResult> results(units.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < units.size(); i = next++) {
      results[i] = process_unit(units[i], taxonomy, options, langid);
    }
  };
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(units.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }

  DatasetManifest manifest;
  manifest.mode = options.mode;
  ingest::SkipStats skips;
  DatasetWriter writer(output);
  for (const auto& r : results) {
    manifest.documents += r.documents;
    manifest.failed_documents += r.failed;
    skips.merge(r.skips);
    for (const auto& p : r.kept) writer.write_serialized(p.serialized, p.label);
  }
  if (writer.duplicates()) skips.add("duplicate", writer.duplicates());

  const auto collisions = writer.collisions();
  std::string report;
  for (const auto& c : collisions) {
    report += c.hash;
    for (std::size_t i = 0; i < c.labels.size(); ++i) report += (i ? "," : " ") + c.labels[i];
    report += "\n";
  }
  write_text_file(output / "COLLISIONS", report);

  for (const auto& [label, count] : writer.label_counts()) manifest.labels.push_back({label, count, label});
  manifest.collisions = collisions.size();
  manifest.skips = skips.counts;
  const auto files = list_dataset(output);
  if (!files.empty()) manifest.stats = compute_stats(word_counts(output, files), options.window);
  manifest.stats.window = options.window;
  write_text_file(output / "MANIFEST", manifest.serialize());
  return manifest;
}

std::vector<DatasetFile> list_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw DatasetError("not a dataset directory: " + root.string());
  std::vector<DatasetFile> out;
  for (const auto& dir : fs::directory_iterator(root)) {
    if (!dir.is_directory()) continue;
    const auto label = dir.path().filename().string();
    for (const auto& f : fs::directory_iterator(dir.path())) {
      if (!f.is_regular_file() || f.path().extension() != ".txt") continue;
      const auto stem = f.path().stem().string();
      if (is_hash_name(stem)) out.push_back({label, stem});
    }
  }
  std::sort(out.begin(), out.end(), [](const DatasetFile& a, const DatasetFile& b) {
    return a.label != b.label ? a.label < b.label : a.hash < b.hash;
  });
  return out;
}

std::vector<std::size_t> word_counts(const fs::path& root, const std::vector<DatasetFile>& files) {
  std::vector<std::size_t> counts;
  counts.reserve(files.size());
  for (const auto& f : files) counts.push_back(split_ws(read_text_file(root / f.relative())).size());
  return counts;
}

DatasetStats compute_stats(const std::vector<std::size_t>& word_counts, std::size_t window) {
  if (word_counts.empty()) throw DatasetError("empty dataset");
  DatasetStats s;
  s.window = window;
  s.paragraphs = word_counts.size();
  double total = 0;
  std::size_t covered = 0;
  for (auto n : word_counts) {
    total += static_cast<double>(n);
    if (n <= window) ++covered;
  }
  s.mean_words = total / static_cast<double>(word_counts.size());
  auto sorted = word_counts;
  std::sort(sorted.begin(), sorted.end());
  const auto mid = sorted.size() / 2;
  s.median_words = sorted.size() % 2 ? static_cast<double>(sorted[mid])
                                     : (static_cast<double>(sorted[mid - 1]) + static_cast<double>(sorted[mid])) / 2.0;
  s.coverage = static_cast<double>(covered) / static_cast<double>(word_counts.size());
  return s;
}

DatasetStats compute_stats(const fs::path& root, std::size_t window) {
  return compute_stats(word_counts(root, list_dataset(root)), window);
}

Split split_train_test(const std::vector<DatasetFile>& files, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("split ratio must be in (0, 1]");
  const auto cut = static_cast<unsigned>(std::lround(256.0 * ratio));
  Split s;
  for (const auto& f : files) (hash_byte(f.hash, 0) < cut ? s.train : s.test).push_back(f);
  return s;
}

Split carve_validation(const std::vector<DatasetFile>& train, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw std::invalid_argument("validation fraction must be in [0, 1)");
  const auto cut = static_cast<unsigned>(std::lround(256.0 * fraction));
  Split s;  // train = remaining training files, test = validation slice
  for (const auto& f : train) (hash_byte(f.hash, 1) < cut ? s.test : s.train).push_back(f);
  return s;
}

NestView regroup_to_nests(const std::vector<DatasetFile>& files, const Taxonomy& taxonomy) {
  NestView view;
  view.total_files = files.size();
  for (const auto& n : taxonomy.nests()) view.counts[n.name] = 0;
  for (const auto& f : files) {
    if (!taxonomy.has_label(f.label)) {
      view.warnings.push_back("directory '" + f.label + "' is not a taxonomy label");
      continue;
    }
    auto nest = taxonomy.nest_of(f.label);
    if (!nest) continue;
    view.entries.push_back({f, *nest, *taxonomy.nest_index(*nest)});
    ++view.counts[*nest];
  }
  view.retained_fraction =
      files.empty() ? 0.0 : static_cast<double>(view.entries.size()) / static_cast<double>(files.size());
  if (view.entries.empty()) view.warnings.push_back("no files belong to an in-task label");
  std::sort(view.warnings.begin(), view.warnings.end());
  view.warnings.erase(std::unique(view.warnings.begin(), view.warnings.end()), view.warnings.end());
  return view;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DatasetError("write failed for " + path.string());
}

}  // namespace stmtcls
