#include "stmtcls/taxonomy.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "stmtcls/text_util.hpp"

#ifndef STMTCLS_DATA_DIR
#define STMTCLS_DATA_DIR "data"
#endif

namespace stmtcls {

namespace {

bool valid_label_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string strip_comment(std::string_view line) {
  // '#' starts a comment at line start or after whitespace.
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    auto item = trim(s.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

std::uint64_t parse_count(std::string_view value, const std::string& where) {
  auto v = trim(value);
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw TaxonomyError(where + ": invalid count '" + std::string(v) + "'");
  }
  return std::stoull(std::string(v));
}

}  // namespace

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TaxonomyError("cannot open taxonomy file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

Taxonomy Taxonomy::parse(std::string_view text, const std::string& source) {
  struct LabelDecl {
    std::vector<std::string> sources;
  };
  std::vector<std::pair<std::string, LabelDecl>> declared;
  std::vector<std::pair<std::string, std::string>> alias_lines;
  std::vector<std::pair<std::string, std::vector<std::string>>> nest_lines;
  std::vector<std::pair<std::string, std::uint64_t>> label_counts;
  std::map<std::string, std::uint64_t> nest_counts;

  std::string section;
  std::istringstream lines{std::string(text)};
  std::string raw_line;
  int lineno = 0;
  while (std::getline(lines, raw_line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    auto line = std::string(trim(strip_comment(raw_line)));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw TaxonomyError(where + ": malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "labels" && section != "aliases" && section != "nests" && section != "frequencies") {
        throw TaxonomyError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    if (section.empty()) throw TaxonomyError(where + ": entry outside of a section");

    if (section == "nests") {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw TaxonomyError(where + ": expected 'nest: member,...'");
      auto name = std::string(trim(std::string_view(line).substr(0, colon)));
      nest_lines.emplace_back(name, split_list(std::string_view(line).substr(colon + 1), ','));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw TaxonomyError(where + ": expected 'key=value'");
    auto key = std::string(trim(std::string_view(line).substr(0, eq)));
    auto value = std::string(trim(std::string_view(line).substr(eq + 1)));
    if (section == "labels") {
      LabelDecl decl{split_list(value, ',')};
      for (const auto& s : decl.sources) {
        if (s != "environment" && s != "heading") {
          throw TaxonomyError(where + ": unknown label source '" + s + "'");
        }
      }
      if (decl.sources.empty()) throw TaxonomyError(where + ": label without source");
      declared.emplace_back(key, std::move(decl));
    } else if (section == "aliases") {
      alias_lines.emplace_back(ascii_lower(collapse_spaces(key)), value);
    } else {
      if (key.rfind("nest:", 0) == 0) {
        auto nest = std::string(trim(std::string_view(key).substr(5)));
        if (nest_counts.count(nest)) throw TaxonomyError(where + ": duplicate nest frequency '" + nest + "'");
        nest_counts[nest] = parse_count(value, where);
      } else {
        label_counts.emplace_back(key, parse_count(value, where));
      }
    }
  }

  Taxonomy tax;
  auto add_label = [&](const std::string& name, const std::vector<std::string>& sources) {
    if (!valid_label_name(name)) throw TaxonomyError(source + ": invalid label name '" + name + "'");
    if (tax.label_index_.count(name)) throw TaxonomyError(source + ": duplicate label '" + name + "'");
    StatementLabel label;
    label.name = name;
    label.origin = sources.front() == "heading" ? LabelOrigin::Heading : LabelOrigin::Environment;
    for (const auto& s : sources) {
      if (s == "heading") label.from_heading = true;
      else label.from_environment = true;
    }
    tax.label_index_.emplace(name, tax.labels_.size());
    tax.labels_.push_back(std::move(label));
  };

  if (!declared.empty()) {
    for (const auto& [name, decl] : declared) add_label(name, decl.sources);
  } else {
    // No explicit label list: every label referenced elsewhere is an environment label.
    std::set<std::string> implied;
    for (const auto& [raw, target] : alias_lines) implied.insert(target);
    for (const auto& [nest, members] : nest_lines) implied.insert(members.begin(), members.end());
    for (const auto& [name, count] : label_counts) implied.insert(name);
    for (const auto& name : implied) add_label(name, {"environment"});
  }

  for (const auto& l : tax.labels_) tax.aliases_.emplace(l.name, l.name);
  for (const auto& [raw, target] : alias_lines) {
    if (raw.empty()) throw TaxonomyError(source + ": empty alias name");
    if (!tax.label_index_.count(target)) {
      throw TaxonomyError(source + ": alias '" + raw + "' targets unknown label '" + target + "'");
    }
    auto [it, inserted] = tax.aliases_.emplace(raw, target);
    if (!inserted) throw TaxonomyError(source + ": duplicate raw name '" + raw + "'");
  }

  std::set<std::string> nest_names;
  for (const auto& [name, members] : nest_lines) {
    if (!valid_label_name(name)) throw TaxonomyError(source + ": invalid nest name '" + name + "'");
    if (!nest_names.insert(name).second) throw TaxonomyError(source + ": duplicate nest '" + name + "'");
    if (members.empty()) throw TaxonomyError(source + ": nest '" + name + "' has no members");
    NestLabel nest{name, {}, 0};
    for (const auto& m : members) {
      if (!tax.label_index_.count(m)) {
        throw TaxonomyError(source + ": nest '" + name + "' lists unknown label '" + m + "'");
      }
      auto [it, inserted] = tax.nest_of_label_.emplace(m, tax.nests_.size());
      if (!inserted) {
        throw TaxonomyError(source + ": overlapping nests: label '" + m + "' is in both '" +
                            tax.nests_[it->second].name + "' and '" + name + "'");
      }
      nest.members.push_back(m);
    }
    tax.nests_.push_back(std::move(nest));
  }

  std::set<std::string> counted;
  for (const auto& [name, count] : label_counts) {
    auto it = tax.label_index_.find(name);
    if (it == tax.label_index_.end()) throw TaxonomyError(source + ": frequency for unknown label '" + name + "'");
    if (!counted.insert(name).second) throw TaxonomyError(source + ": duplicate frequency for '" + name + "'");
    tax.labels_[it->second].frequency = count;
  }
  for (auto& nest : tax.nests_) {
    for (const auto& m : nest.members) nest.frequency += tax.label(m).frequency;
  }
  for (const auto& [name, declared_total] : nest_counts) {
    auto idx = tax.nest_index(name);
    if (!idx) throw TaxonomyError(source + ": frequency for unknown nest '" + name + "'");
    const auto& nest = tax.nests_[*idx];
    if (nest.frequency != declared_total) {
      throw TaxonomyError(source + ": frequency mismatch for nest '" + name + "': declared " +
                          std::to_string(declared_total) + ", members sum to " +
                          std::to_string(nest.frequency));
    }
  }
  return tax;
}

std::optional<std::string> Taxonomy::canonicalize_env(std::string_view raw) const {
  auto key = ascii_lower(collapse_spaces(raw));
  auto it = aliases_.find(key);
  if (it == aliases_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Taxonomy::nest_of(std::string_view label) const {
  if (!has_label(label)) throw TaxonomyError("taxonomy corruption: unknown label '" + std::string(label) + "'");
  auto it = nest_of_label_.find(label);
  if (it == nest_of_label_.end()) return std::nullopt;
  return nests_[it->second].name;
}

std::optional<std::size_t> Taxonomy::nest_index(std::string_view nest) const {
  for (std::size_t i = 0; i < nests_.size(); ++i) {
    if (nests_[i].name == nest) return i;
  }
  return std::nullopt;
}

bool Taxonomy::has_label(std::string_view name) const { return label_index_.find(name) != label_index_.end(); }

const StatementLabel& Taxonomy::label(std::string_view name) const {
  auto it = label_index_.find(name);
  if (it == label_index_.end()) throw TaxonomyError("unknown label '" + std::string(name) + "'");
  return labels_[it->second];
}

std::vector<std::string> Taxonomy::nest_names() const {
  std::vector<std::string> out;
  out.reserve(nests_.size());
  for (const auto& n : nests_) out.push_back(n.name);
  return out;
}

std::uint64_t Taxonomy::total_frequency() const {
  return std::accumulate(labels_.begin(), labels_.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const StatementLabel& l) { return acc + l.frequency; });
}

std::uint64_t Taxonomy::in_task_frequency() const {
  return std::accumulate(nests_.begin(), nests_.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const NestLabel& n) { return acc + n.frequency; });
}

double Taxonomy::retained_fraction() const {
  auto total = total_frequency();
  return total == 0 ? 0.0 : static_cast<double>(in_task_frequency()) / static_cast<double>(total);
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("STMTCLS_DATA"); env && *env) return env;
  return STMTCLS_DATA_DIR;
}

std::filesystem::path default_taxonomy_path() { return data_dir() / "taxonomy.conf"; }

}  // namespace stmtcls
