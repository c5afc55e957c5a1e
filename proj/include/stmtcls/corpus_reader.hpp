#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace stmtcls {

/// One input file: a single HTML document (optionally gzip-compressed) or a
/// tar archive (optionally gzip-compressed) holding one document per entry.
struct CorpusUnit {
  std::filesystem::path path;
  /// Path relative to the corpus root, with '/' separators.
  std::string relative;
  bool archive = false;
};

/// Input units under `root` in lexicographic order of their relative path.
/// Recognized: .html, .htm, .xhtml (each optionally .gz), .tar, .tar.gz, .tgz.
std::vector<CorpusUnit> enumerate_corpus(const std::filesystem::path& root);

/// Calls `sink(doc_id, bytes)` for each document of the unit, in archive
/// order. Archive documents get ids of the form `archive.tar!entry.html`.
void read_unit(const CorpusUnit& unit, const std::function<void(const std::string&, std::string_view)>& sink);

/// Whole file contents, transparently gunzipped.
std::string read_file_maybe_gz(const std::filesystem::path& path);

}  // namespace stmtcls
