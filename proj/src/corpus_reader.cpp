#include "stmtcls/corpus_reader.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace stmtcls {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_html_name(std::string_view name) {
  if (ends_with(name, ".gz")) name.remove_suffix(3);
  return ends_with(name, ".html") || ends_with(name, ".htm") || ends_with(name, ".xhtml");
}

bool is_archive_name(std::string_view name) {
  return ends_with(name, ".tar") || ends_with(name, ".tar.gz") || ends_with(name, ".tgz");
}

std::uint64_t parse_octal(const char* field, std::size_t len) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len && field[i]; ++i) {
    if (field[i] == ' ') continue;
    if (field[i] < '0' || field[i] > '7') break;
    v = v * 8 + static_cast<std::uint64_t>(field[i] - '0');
  }
  return v;
}

std::string field_string(const char* field, std::size_t len) {
  return std::string(field, strnlen(field, len));
}

}  // namespace

std::string read_file_maybe_gz(const std::filesystem::path& path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::string out;
  char buf[1 << 16];
  while (true) {
    int n = gzread(f, buf, sizeof buf);
    if (n < 0) {
      int err = 0;
      std::string msg = gzerror(f, &err);
      gzclose(f);
      throw std::runtime_error("read error in " + path.string() + ": " + msg);
    }
    if (n == 0) break;
    out.append(buf, static_cast<std::size_t>(n));
  }
  gzclose(f);
  return out;
}

std::vector<CorpusUnit> enumerate_corpus(const std::filesystem::path& root) {
  std::vector<CorpusUnit> units;
  if (!std::filesystem::is_directory(root)) throw std::runtime_error("not a directory: " + root.string());
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    const bool archive = is_archive_name(name);
    if (!archive && !is_html_name(name)) continue;
    units.push_back({entry.path(), std::filesystem::relative(entry.path(), root).generic_string(), archive});
  }
  std::sort(units.begin(), units.end(), [](const CorpusUnit& a, const CorpusUnit& b) { return a.relative < b.relative; });
  return units;
}

void read_unit(const CorpusUnit& unit, const std::function<void(const std::string&, std::string_view)>& sink) {
  const std::string data = read_file_maybe_gz(unit.path);
  if (!unit.archive) {
    sink(unit.relative, data);
    return;
  }
  std::size_t pos = 0;
  std::string long_name;
  while (pos + 512 <= data.size()) {
    const char* hdr = data.data() + pos;
    if (std::all_of(hdr, hdr + 512, [](char c) { return c == 0; })) break;
    const std::uint64_t size = parse_octal(hdr + 124, 12);
    const char type = hdr[156];
    std::string name = field_string(hdr, 100);
    const std::string prefix = field_string(hdr + 345, 155);
    if (std::memcmp(hdr + 257, "ustar", 5) == 0 && !prefix.empty()) name = prefix + "/" + name;
    const std::size_t body = pos + 512;
    if (body + size > data.size()) throw std::runtime_error("truncated tar archive " + unit.relative);
    if (type == 'L') {
      long_name = field_string(data.data() + body, size);
    } else if (type == '0' || type == '\0') {
      if (!long_name.empty()) name = long_name;
      long_name.clear();
      if (is_html_name(name)) sink(unit.relative + "!" + name, std::string_view(data).substr(body, size));
    } else {
      long_name.clear();
    }
    pos = body + (size + 511) / 512 * 512;
  }
}

}  // namespace stmtcls
