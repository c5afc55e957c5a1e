#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stmtcls/ingest.hpp"
#include "stmtcls/normalizer.hpp"
#include "stmtcls/taxonomy.hpp"

namespace stmtcls {

inline constexpr std::size_t kDefaultWindow = 480;

class DatasetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ExtractionMode { WithMath, NoMath };

std::string to_string(ExtractionMode mode);
ExtractionMode parse_mode(std::string_view s);

struct DatasetStats {
  std::size_t paragraphs = 0;
  double mean_words = 0.0;
  double median_words = 0.0;
  /// Fraction of paragraphs with at most `window` tokens (math lexemes included).
  double coverage = 0.0;
  std::size_t window = kDefaultWindow;
};

struct LabelEntry {
  std::string label;
  std::size_t count = 0;
  std::string directory;
};

struct DatasetManifest {
  std::vector<LabelEntry> labels;
  std::string split_seed = "sha256-first-byte";
  ExtractionMode mode = ExtractionMode::WithMath;
  DatasetStats stats;
  std::size_t documents = 0;
  std::size_t failed_documents = 0;
  std::size_t collisions = 0;
  std::map<std::string, std::size_t> skips;

  std::size_t paragraphs() const;
  /// Line-oriented key=value text with a fixed key order.
  std::string serialize() const;
  static DatasetManifest parse(std::string_view text);
  static DatasetManifest read(const std::filesystem::path& path);
};

/// One paragraph file of a dataset on disk.
struct DatasetFile {
  std::string label;
  std::string hash;
  /// `<label>/<hash>.txt`
  std::string relative() const { return label + "/" + hash + ".txt"; }
};

struct Collision {
  std::string hash;
  std::vector<std::string> labels;
};

/// Writes paragraphs as `<root>/<label>/<sha256>.txt`. Same content under the
/// same label is written once; identical content under different labels is
/// kept under each label and reported as a collision.
class DatasetWriter {
public:
  explicit DatasetWriter(std::filesystem::path root);

  std::filesystem::path write_paragraph(const NormalizedParagraph& para, const std::string& label);
  std::filesystem::path write_serialized(const std::string& serialized, const std::string& label);

  std::size_t duplicates() const { return duplicates_; }
  std::vector<Collision> collisions() const;
  std::map<std::string, std::size_t> label_counts() const;
  const std::filesystem::path& root() const { return root_; }

private:
  std::filesystem::path root_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<std::string>> labels_by_hash_;
  std::map<std::string, std::size_t> counts_;
  std::size_t duplicates_ = 0;
};

struct ExtractOptions {
  ExtractionMode mode = ExtractionMode::WithMath;
  unsigned jobs = 0;  // 0: hardware concurrency
  std::size_t window = kDefaultWindow;
  bool overwrite = false;
};

/// Full pipeline over a corpus directory: ingest, normalize, filter, write.
/// Writes MANIFEST and COLLISIONS next to the label directories.
DatasetManifest extract_corpus(const std::filesystem::path& input, const std::filesystem::path& output,
                               const Taxonomy& taxonomy, const ExtractOptions& options = {});

/// Paragraph files of a dataset, sorted by label then hash.
std::vector<DatasetFile> list_dataset(const std::filesystem::path& root);

std::vector<std::size_t> word_counts(const std::filesystem::path& root, const std::vector<DatasetFile>& files);
DatasetStats compute_stats(const std::vector<std::size_t>& word_counts, std::size_t window = kDefaultWindow);
DatasetStats compute_stats(const std::filesystem::path& root, std::size_t window = kDefaultWindow);

struct Split {
  std::vector<DatasetFile> train;
  std::vector<DatasetFile> test;
};

/// Deterministic assignment by the first byte `b` of the file hash:
/// train iff b < round(256 * ratio).
Split split_train_test(const std::vector<DatasetFile>& files, double ratio = 0.8);

/// Carves a validation slice off a training list by the second hash byte.
Split carve_validation(const std::vector<DatasetFile>& train, double fraction = 0.05);

struct NestEntry {
  DatasetFile file;
  std::string nest;
  std::size_t nest_index = 0;
};

struct NestView {
  std::vector<NestEntry> entries;
  std::map<std::string, std::size_t> counts;
  std::size_t total_files = 0;
  double retained_fraction = 0.0;
  std::vector<std::string> warnings;
};

NestView regroup_to_nests(const std::vector<DatasetFile>& files, const Taxonomy& taxonomy);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace stmtcls
