#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stmtcls::html {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Element or text node. Text nodes have an empty tag.
struct Node {
  std::string tag;
  std::vector<std::string> classes;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;
  std::vector<Node> children;

  bool is_text() const { return tag.empty(); }
  bool has_class(std::string_view cls) const;
  /// First class token starting with `prefix`, with the prefix removed.
  std::optional<std::string_view> class_with_prefix(std::string_view prefix) const;
  std::optional<std::string_view> attribute(std::string_view name) const;
  /// Concatenated descendant text.
  std::string text_content() const;
};

struct Document {
  std::string doc_id;
  Node root;
};

/// Parses HTML/XHTML into an element tree. Invalid UTF-8 is repaired
/// (stray bytes read as Latin-1). Throws ParseError on truncated or
/// structurally broken markup.
Document parse(std::string_view bytes, std::string doc_id = {});

/// Parses a standalone markup fragment (e.g. one `<math>` element).
Node parse_fragment(std::string_view markup);

/// Pre-order walk; returning false from `visit` skips the node's subtree.
void walk(const Node& node, const std::function<bool(const Node&, int depth)>& visit, int depth = 0);

std::string decode_entities(std::string_view s);

}  // namespace stmtcls::html
