#include "stmtcls/ingest.hpp"

#include <algorithm>
#include <array>

#include "stmtcls/text_util.hpp"

namespace stmtcls::ingest {

namespace {

constexpr std::array kSectionClasses = {"ltx_section",  "ltx_subsection",  "ltx_subsubsection", "ltx_chapter",
                                        "ltx_appendix", "ltx_paragraph",   "ltx_abstract",      "ltx_acknowledgements",
                                        "ltx_acknowledgement", "ltx_keywords", "ltx_bibliography"};

bool is_sectional(const html::Node& el) {
  return std::any_of(kSectionClasses.begin(), kSectionClasses.end(), [&](const char* c) { return el.has_class(c); });
}

bool is_theorem_like(const html::Node& el) { return el.has_class("ltx_theorem") || el.has_class("ltx_proof"); }

bool is_title(const html::Node& el) { return el.has_class("ltx_title") || el.has_class("ltx_tag"); }

bool is_display_math(const html::Node& el) {
  if (el.has_class("ltx_equation") || el.has_class("ltx_equationgroup") || el.has_class("ltx_eqn_table")) return true;
  if (el.tag == "math") {
    auto d = el.attribute("display");
    return d && *d == "block";
  }
  return false;
}

bool is_error(const html::Node& el) { return el.has_class("ltx_ERROR") || el.tag == "merror"; }

bool contains_error(const html::Node& el) {
  bool found = false;
  html::walk(el, [&](const html::Node& n, int) {
    if (found || n.is_text()) return false;
    if (is_error(n)) found = true;
    return !found;
  });
  return found;
}

/// Fallback labels for sectional containers whose class already names them.
std::optional<std::string> label_from_class(const html::Node& el) {
  if (el.has_class("ltx_abstract")) return "abstract";
  if (el.has_class("ltx_acknowledgements") || el.has_class("ltx_acknowledgement")) return "acknowledgement";
  if (el.has_class("ltx_keywords")) return "keywords";
  return std::nullopt;
}

const html::Node* title_of(const html::Node& el) {
  for (const auto& c : el.children) {
    if (!c.is_text() && c.has_class("ltx_title")) return &c;
  }
  return nullptr;
}

struct Collector {
  RawStatement& out;

  void text(std::string s) {
    if (s.empty()) return;
    auto& items = current().items;
    if (!items.empty() && items.back().kind == InlineItem::Kind::Text) {
      items.back().text += s;
    } else {
      items.push_back({InlineItem::Kind::Text, std::move(s), {}});
    }
  }

  Block& current() { return out.blocks.back(); }

  void inline_content(const html::Node& node) {
    for (const auto& c : node.children) {
      if (c.is_text()) {
        text(c.text);
        continue;
      }
      if (is_error(c)) {
        out.error_markup = true;
        continue;
      }
      if (c.tag == "math") {
        if (contains_error(c)) out.error_markup = true;
        current().items.push_back({InlineItem::Kind::Math, {}, math::from_mathml(c)});
        continue;
      }
      if (c.tag == "cite" || c.has_class("ltx_cite")) {
        current().items.push_back({InlineItem::Kind::Citation, {}, {}});
        continue;
      }
      if (c.has_class("ltx_ref")) {
        current().items.push_back({InlineItem::Kind::Reference, {}, {}});
        continue;
      }
      if (c.has_class("ltx_note") || is_title(c) || c.tag == "script" || c.tag == "style" || c.tag == "figure" ||
          c.tag == "table" || c.has_class("ltx_itemize") || c.has_class("ltx_enumerate") ||
          c.has_class("ltx_description")) {
        continue;
      }
      if (c.tag == "br") {
        text(" ");
        continue;
      }
      inline_content(c);
    }
  }

  void narrative(const html::Node& p) {
    out.blocks.push_back({Block::Kind::Narrative, {}});
    inline_content(p);
    auto& b = out.blocks.back();
    const bool blank = std::all_of(b.items.begin(), b.items.end(), [](const InlineItem& it) {
      return it.kind == InlineItem::Kind::Text && trim(it.text).empty();
    });
    if (blank) out.blocks.pop_back();
  }

  void display(const html::Node& eq) {
    Block block{Block::Kind::Math, {}};
    if (contains_error(eq)) out.error_markup = true;
    html::walk(eq, [&](const html::Node& n, int) {
      if (n.is_text()) return false;
      if (n.tag == "math") {
        block.items.push_back({InlineItem::Kind::Math, {}, math::from_mathml(n)});
        return false;
      }
      return !n.has_class("ltx_tag");
    });
    if (!block.items.empty()) out.blocks.push_back(std::move(block));
  }

  /// Content of one paragraph container: its `ltx_p` blocks and equations.
  void container(const html::Node& para) {
    for (const auto& c : para.children) {
      if (c.is_text()) continue;
      if (is_error(c)) {
        out.error_markup = true;
        continue;
      }
      if (c.has_class("ltx_p")) narrative(c);
      else if (is_display_math(c)) display(c);
    }
  }
};

}  // namespace

void SkipStats::merge(const SkipStats& other) {
  for (const auto& [k, v] : other.counts) counts[k] += v;
}

html::Document parse_document(std::string_view bytes, std::string doc_id) {
  return html::parse(bytes, std::move(doc_id));
}

std::string normalize_heading(const html::Node& title) {
  std::string text;
  html::walk(title, [&](const html::Node& n, int depth) {
    if (n.is_text()) {
      text += n.text;
      return false;
    }
    return depth == 0 || !n.has_class("ltx_tag");
  });
  text = collapse_spaces(text);
  auto is_noise = [](char c) {
    return !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || static_cast<unsigned char>(c) >= 0x80);
  };
  std::size_t b = 0, e = text.size();
  while (b < e && is_noise(text[b])) ++b;
  while (e > b && is_noise(text[e - 1])) --e;
  return ascii_lower(collapse_spaces(std::string_view(text).substr(b, e - b)));
}

std::vector<StatementMatch> find_statements(const html::Document& doc, const Taxonomy& taxonomy, SkipStats* skips) {
  std::vector<StatementMatch> out;
  std::function<void(const html::Node&, int)> visit = [&](const html::Node& node, int depth) {
    for (const auto& c : node.children) {
      if (c.is_text()) continue;
      std::optional<std::string> label;
      if (c.has_class("ltx_theorem")) {
        if (auto env = c.class_with_prefix("ltx_theorem_")) {
          auto canon = taxonomy.canonicalize_env(*env);
          if (canon && taxonomy.label(*canon).from_environment) {
            label = canon;
          } else if (skips) {
            skips->add("unknown-environment");
          }
        } else if (skips) {
          skips->add("unnamed-environment");
        }
      } else if (c.has_class("ltx_proof")) {
        if (taxonomy.has_label("proof")) label = "proof";
      } else if (is_sectional(c)) {
        if (const auto* title = title_of(c)) {
          auto canon = taxonomy.canonicalize_env(normalize_heading(*title));
          if (canon && taxonomy.label(*canon).from_heading) label = canon;
        }
        if (!label) {
          auto by_class = label_from_class(c);
          if (by_class && taxonomy.has_label(*by_class)) label = by_class;
        }
        if (!label && skips && !c.has_class("ltx_bibliography")) skips->add("unmatched-heading");
      }
      if (label) {
        out.push_back({&c, *label, depth});
        visit(c, depth + 1);
      } else {
        visit(c, depth);
      }
    }
  };
  visit(doc.root, 0);
  return out;
}

RawStatement first_logical_paragraph(const html::Node& statement, const std::string& label, const std::string& doc_id) {
  RawStatement out;
  out.label = label;
  out.source_doc = doc_id;
  Collector collect{out};

  const bool has_para = std::any_of(statement.children.begin(), statement.children.end(),
                                    [](const html::Node& c) { return !c.is_text() && c.has_class("ltx_para"); });
  // Sections hold `ltx_para` containers; abstracts often hold bare `ltx_p`.
  const char* container_class = has_para ? "ltx_para" : "ltx_p";

  bool started = false;
  for (const auto& c : statement.children) {
    if (c.is_text() || is_title(c)) continue;
    if (c.has_class(container_class)) {
      if (started) break;
      started = true;
      if (has_para) collect.container(c);
      else collect.narrative(c);
      continue;
    }
    if (!started) continue;
    if (is_display_math(c)) {
      collect.display(c);
    } else if (is_sectional(c) || is_theorem_like(c)) {
      break;
    }
  }
  if (out.blocks.empty()) {
    throw EmptyStatement("statement '" + label + "' in " + (doc_id.empty() ? "<doc>" : doc_id) +
                         " has no paragraph content");
  }
  return out;
}

std::vector<RawStatement> extract_statements(const html::Document& doc, const Taxonomy& taxonomy, SkipStats* skips) {
  std::vector<RawStatement> out;
  for (const auto& match : find_statements(doc, taxonomy, skips)) {
    try {
      auto stmt = first_logical_paragraph(*match.element, match.label, doc.doc_id);
      stmt.nesting_depth = match.nesting_depth;
      out.push_back(std::move(stmt));
    } catch (const EmptyStatement&) {
      if (skips) skips->add("empty-statement");
    }
  }
  return out;
}

std::string document_text(const html::Document& doc) {
  std::string out;
  html::walk(doc.root, [&](const html::Node& n, int) {
    if (n.is_text()) return false;
    if (n.tag == "math" || n.tag == "script" || n.tag == "style" || n.tag == "head" || is_title(n) ||
        n.has_class("ltx_bibliography") || n.has_class("ltx_cite") || is_error(n))
      return false;
    if (n.has_class("ltx_p")) {
      // Inline math and citations are skipped by collecting text children only.
      html::walk(n, [&](const html::Node& m, int) {
        if (m.is_text()) {
          out += m.text;
          return false;
        }
        return m.tag != "math" && !m.has_class("ltx_cite") && !m.has_class("ltx_ref") && !is_title(m);
      });
      out += '\n';
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace stmtcls::ingest
