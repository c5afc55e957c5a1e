#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stmtcls {

class TaxonomyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class LabelOrigin { Environment, Heading };

/// One of the canonical statement labels. `origin` is the more common source;
/// `from_environment` / `from_heading` record every source the label has.
struct StatementLabel {
  std::string name;
  LabelOrigin origin = LabelOrigin::Environment;
  bool from_environment = false;
  bool from_heading = false;
  std::uint64_t frequency = 0;
};

struct NestLabel {
  std::string name;
  std::vector<std::string> members;
  std::uint64_t frequency = 0;
};

/// Label taxonomy loaded from a config file. Immutable after load, so a single
/// instance may be shared by any number of readers.
class Taxonomy {
public:
  static Taxonomy load(const std::filesystem::path& path);
  static Taxonomy parse(std::string_view text, const std::string& source = "<string>");

  /// Case-insensitive alias lookup. Unknown names yield an empty result.
  std::optional<std::string> canonicalize_env(std::string_view raw) const;

  /// Nest containing `label`; empty for labels dropped from the nest task.
  /// Throws TaxonomyError for a name that is not a canonical label.
  std::optional<std::string> nest_of(std::string_view label) const;

  std::optional<std::size_t> nest_index(std::string_view nest) const;

  bool has_label(std::string_view name) const;
  const StatementLabel& label(std::string_view name) const;

  const std::vector<StatementLabel>& labels() const { return labels_; }
  const std::vector<NestLabel>& nests() const { return nests_; }
  std::vector<std::string> nest_names() const;

  std::uint64_t total_frequency() const;
  std::uint64_t in_task_frequency() const;
  /// Share of all labeled paragraphs that survive the nest regrouping.
  double retained_fraction() const;

private:
  std::vector<StatementLabel> labels_;
  std::map<std::string, std::size_t, std::less<>> label_index_;
  std::map<std::string, std::string, std::less<>> aliases_;
  std::vector<NestLabel> nests_;
  std::map<std::string, std::size_t, std::less<>> nest_of_label_;
};

/// Location of the bundled data directory (taxonomy, language samples).
/// Honors the STMTCLS_DATA environment variable.
std::filesystem::path data_dir();
std::filesystem::path default_taxonomy_path();

std::string ascii_lower(std::string_view s);

}  // namespace stmtcls
