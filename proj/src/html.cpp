#include "stmtcls/html.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "stmtcls/text_util.hpp"

namespace stmtcls::html {

namespace {

constexpr std::array kVoidElements = {"area", "base", "br",    "col",  "embed", "hr",   "img",
                                      "input", "link", "meta", "param", "source", "track", "wbr"};

bool is_void(std::string_view tag) {
  return std::find(kVoidElements.begin(), kVoidElements.end(), tag) != kVoidElements.end();
}

bool may_stay_open(std::string_view tag) { return tag == "html" || tag == "body" || tag == "head"; }

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
         c == ':' || c == '.';
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
  static const std::unordered_map<std::string_view, char32_t> table = {
      {"amp", U'&'},       {"lt", U'<'},        {"gt", U'>'},         {"quot", U'"'},
      {"apos", U'\''},     {"nbsp", 0xA0},      {"ndash", 0x2013},    {"mdash", 0x2014},
      {"hellip", 0x2026},  {"lsquo", 0x2018},   {"rsquo", 0x2019},    {"ldquo", 0x201C},
      {"rdquo", 0x201D},   {"times", 0xD7},     {"minus", 0x2212},    {"le", 0x2264},
      {"ge", 0x2265},      {"ne", 0x2260},      {"infin", 0x221E},    {"isin", 0x2208},
      {"epsilon", 0x3B5},  {"alpha", 0x3B1},    {"beta", 0x3B2},      {"InvisibleTimes", 0x2062},
      {"ApplyFunction", 0x2061}, {"it", 0x2062}, {"af", 0x2061},      {"InvisibleComma", 0x2063},
      {"eacute", 0xE9},    {"egrave", 0xE8},    {"agrave", 0xE0},     {"ccedil", 0xE7},
      {"uuml", 0xFC},      {"ouml", 0xF6},      {"auml", 0xE4},       {"szlig", 0xDF},
  };
  return table;
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  Node run() {
    Node root;
    root.tag = "#document";
    std::vector<Node*> stack{&root};
    while (pos_ < src_.size()) {
      if (src_[pos_] != '<') {
        auto end = src_.find('<', pos_);
        if (end == std::string_view::npos) end = src_.size();
        append_text(*stack.back(), decode_entities(src_.substr(pos_, end - pos_)));
        pos_ = end;
        continue;
      }
      if (starts_with("<!--")) {
        auto end = src_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) throw ParseError(where() + "unterminated comment");
        pos_ = end + 3;
      } else if (starts_with("<![CDATA[")) {
        auto end = src_.find("]]>", pos_ + 9);
        if (end == std::string_view::npos) throw ParseError(where() + "unterminated CDATA section");
        append_text(*stack.back(), std::string(src_.substr(pos_ + 9, end - pos_ - 9)));
        pos_ = end + 3;
      } else if (starts_with("<!") || starts_with("<?")) {
        auto end = src_.find('>', pos_);
        if (end == std::string_view::npos) throw ParseError(where() + "unterminated declaration");
        pos_ = end + 1;
      } else if (starts_with("</")) {
        close_tag(stack);
      } else if (pos_ + 1 < src_.size() && is_name_char(src_[pos_ + 1])) {
        open_tag(stack);
      } else {
        append_text(*stack.back(), "<");
        ++pos_;
      }
    }
    for (std::size_t i = stack.size(); i-- > 1;) {
      if (!may_stay_open(stack[i]->tag)) {
        throw ParseError("unexpected end of input: unclosed <" + stack[i]->tag + ">");
      }
    }
    if (std::none_of(root.children.begin(), root.children.end(), [](const Node& n) { return !n.is_text(); })) {
      throw ParseError("no elements in input");
    }
    return root;
  }

private:
  bool starts_with(std::string_view p) const { return src_.substr(pos_, p.size()) == p; }

  std::string where() const { return "offset " + std::to_string(pos_) + ": "; }

  static void append_text(Node& parent, std::string text) {
    if (text.empty()) return;
    if (!parent.children.empty() && parent.children.back().is_text()) {
      parent.children.back().text += text;
      return;
    }
    Node t;
    t.text = std::move(text);
    parent.children.push_back(std::move(t));
  }

  void skip_space() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r' ||
                                  src_[pos_] == '\f'))
      ++pos_;
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
    return ascii_lower_copy(src_.substr(start, pos_ - start));
  }

  static std::string ascii_lower_copy(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
  }

  void open_tag(std::vector<Node*>& stack) {
    ++pos_;
    Node el;
    el.tag = read_name();
    bool self_closing = false;
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) throw ParseError("unexpected end of input inside <" + el.tag + ">");
      if (src_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (starts_with("/>")) {
        pos_ += 2;
        self_closing = true;
        break;
      }
      if (!is_name_char(src_[pos_])) {
        ++pos_;
        continue;
      }
      std::string name = read_name();
      skip_space();
      std::string value;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input inside <" + el.tag + ">");
        char q = src_[pos_];
        if (q == '"' || q == '\'') {
          auto end = src_.find(q, pos_ + 1);
          if (end == std::string_view::npos) throw ParseError(where() + "unterminated attribute value");
          value = decode_entities(src_.substr(pos_ + 1, end - pos_ - 1));
          pos_ = end + 1;
        } else {
          std::size_t start = pos_;
          while (pos_ < src_.size() && src_[pos_] != '>' && src_[pos_] != ' ' && src_[pos_] != '\t' &&
                 src_[pos_] != '\n')
            ++pos_;
          value = decode_entities(src_.substr(start, pos_ - start));
        }
      }
      if (name == "class") el.classes = split_ws(value);
      el.attributes.emplace_back(std::move(name), std::move(value));
    }

    const std::string tag = el.tag;
    if (tag == "script" || tag == "style") {
      auto close = "</" + tag;
      auto end = pos_;
      while (true) {
        end = src_.find(close, end);
        if (end == std::string_view::npos) throw ParseError("unterminated <" + tag + ">");
        if (ascii_lower_copy(src_.substr(end, close.size())) == close) break;
        ++end;
      }
      auto gt = src_.find('>', end);
      if (gt == std::string_view::npos) throw ParseError("unterminated <" + tag + ">");
      pos_ = gt + 1;
      stack.back()->children.push_back(std::move(el));
      return;
    }
    stack.back()->children.push_back(std::move(el));
    if (!self_closing && !is_void(tag)) stack.push_back(&stack.back()->children.back());
  }

  void close_tag(std::vector<Node*>& stack) {
    pos_ += 2;
    std::string name = read_name();
    auto gt = src_.find('>', pos_);
    if (gt == std::string_view::npos) throw ParseError("unexpected end of input inside </" + name + ">");
    pos_ = gt + 1;
    for (std::size_t i = stack.size(); i-- > 1;) {
      if (stack[i]->tag == name) {
        stack.resize(i);
        return;
      }
    }
    // Stray end tag: ignored.
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

bool Node::has_class(std::string_view cls) const {
  return std::find(classes.begin(), classes.end(), cls) != classes.end();
}

std::optional<std::string_view> Node::class_with_prefix(std::string_view prefix) const {
  for (const auto& c : classes) {
    if (c.size() > prefix.size() && std::string_view(c).substr(0, prefix.size()) == prefix) {
      return std::string_view(c).substr(prefix.size());
    }
  }
  return std::nullopt;
}

std::optional<std::string_view> Node::attribute(std::string_view name) const {
  for (const auto& [k, v] : attributes) {
    if (k == name) return std::string_view(v);
  }
  return std::nullopt;
}

std::string Node::text_content() const {
  if (is_text()) return text;
  std::string out;
  for (const auto& c : children) out += c.text_content();
  return out;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 32) {
      out.push_back(s[i++]);
      continue;
    }
    auto name = s.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    if (!name.empty() && name[0] == '#') {
      try {
        if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X')) {
          cp = static_cast<char32_t>(std::stoul(std::string(name.substr(2)), nullptr, 16));
        } else {
          cp = static_cast<char32_t>(std::stoul(std::string(name.substr(1)), nullptr, 10));
        }
      } catch (const std::exception&) {
        cp = 0;
      }
    } else if (auto it = named_entities().find(name); it != named_entities().end()) {
      cp = it->second;
    }
    if (cp == 0 || cp > 0x10FFFF) {
      out.push_back(s[i++]);
      continue;
    }
    utf8_append(out, cp);
    i = semi + 1;
  }
  return out;
}

Document parse(std::string_view bytes, std::string doc_id) {
  const std::string repaired = repair_utf8(bytes);
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.root = Parser(repaired).run();
  return doc;
}

Node parse_fragment(std::string_view markup) {
  const std::string repaired = repair_utf8(markup);
  Node root = Parser(repaired).run();
  for (auto& c : root.children) {
    if (!c.is_text()) return std::move(c);
  }
  throw ParseError("fragment has no element");
}

void walk(const Node& node, const std::function<bool(const Node&, int)>& visit, int depth) {
  if (!visit(node, depth)) return;
  for (const auto& c : node.children) walk(c, visit, depth + 1);
}

}  // namespace stmtcls::html
