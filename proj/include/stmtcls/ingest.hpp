#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stmtcls/html.hpp"
#include "stmtcls/math_lexer.hpp"
#include "stmtcls/taxonomy.hpp"

namespace stmtcls::ingest {

class EmptyStatement : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct InlineItem {
  enum class Kind { Text, Math, Citation, Reference };
  Kind kind = Kind::Text;
  std::string text;
  math::MathNode math;
};

/// A narrative block is a run of inline items from one `ltx_p`; a math block
/// holds the display formulas of one equation container.
struct Block {
  enum class Kind { Narrative, Math };
  Kind kind = Kind::Narrative;
  std::vector<InlineItem> items;
};

struct RawStatement {
  std::string label;
  std::vector<Block> blocks;
  std::string source_doc;
  int nesting_depth = 0;
  bool error_markup = false;
};

struct StatementMatch {
  const html::Node* element = nullptr;
  std::string label;
  int nesting_depth = 0;
};

/// Counts per skip reason, e.g. "unknown-environment" or "empty-statement".
struct SkipStats {
  std::map<std::string, std::size_t> counts;
  void add(const std::string& reason, std::size_t n = 1) { counts[reason] += n; }
  void merge(const SkipStats& other);
};

html::Document parse_document(std::string_view bytes, std::string doc_id);

/// Labeled statement elements in document order (outer before nested).
std::vector<StatementMatch> find_statements(const html::Document& doc, const Taxonomy& taxonomy,
                                            SkipStats* skips = nullptr);

/// First logical paragraph of a matched environment or section. Throws
/// EmptyStatement when it holds no paragraph content.
RawStatement first_logical_paragraph(const html::Node& statement, const std::string& label,
                                     const std::string& doc_id = {});

/// find_statements followed by first_logical_paragraph on each match.
std::vector<RawStatement> extract_statements(const html::Document& doc, const Taxonomy& taxonomy,
                                             SkipStats* skips = nullptr);

/// All narrative text of the document body, used for document-level language
/// identification.
std::string document_text(const html::Document& doc);

/// Heading text as matched against closed-set section labels: tags removed,
/// leading/trailing numbering and punctuation dropped, case-folded.
std::string normalize_heading(const html::Node& title);

}  // namespace stmtcls::ingest
