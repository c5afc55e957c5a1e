#include <doctest.h>

#include "stmtcls/html.hpp"
#include "stmtcls/ingest.hpp"
#include "stmtcls/taxonomy.hpp"

using namespace stmtcls;

namespace {
const Taxonomy& taxonomy() {
  static const Taxonomy t = Taxonomy::load(default_taxonomy_path());
  return t;
}

std::string wrap(const std::string& body) { return "<html><body><article class=\"ltx_document\">" + body + "</article></body></html>"; }

std::string theorem(const std::string& env, const std::string& inner) {
  return "<div class=\"ltx_theorem ltx_theorem_" + env + "\"><h6 class=\"ltx_title\"><span class=\"ltx_tag\">X 1</span>.</h6>" +
         inner + "</div>";
}

std::string para(const std::string& text) { return "<div class=\"ltx_para\"><p class=\"ltx_p\">" + text + "</p></div>"; }
}  // namespace

TEST_CASE("parser builds a tree with classes, attributes and entities") {
  auto doc = html::parse("<html><body><p class=\"a  b\" id=x>1 &lt; 2 &amp; &#x3B1;<br>end</p></body></html>", "d");
  const html::Node* p = nullptr;
  html::walk(doc.root, [&](const html::Node& n, int) {
    if (n.tag == "p") p = &n;
    return true;
  });
  REQUIRE(p);
  CHECK(p->has_class("a"));
  CHECK(p->has_class("b"));
  CHECK(p->attribute("id") == std::optional<std::string_view>("x"));
  CHECK(p->text_content() == "1 < 2 & \xCE\xB1" "end");
}

TEST_CASE("parser rejects truncated or element-free input") {
  CHECK_THROWS_AS(html::parse("<html><body><div class=\"x\"><p>cut off", "d"), html::ParseError);
  CHECK_THROWS_AS(html::parse("just text", "d"), html::ParseError);
  CHECK_NOTHROW(html::parse("<html><body><p>ok</p></body>", "d"));
}

TEST_CASE("theorem environments are labeled through aliases") {
  auto doc = html::parse(wrap(theorem("thm", para("All cats are grey in the dark."))), "d");
  ingest::SkipStats skips;
  auto st = ingest::extract_statements(doc, taxonomy(), &skips);
  REQUIRE(st.size() == 1);
  CHECK(st[0].label == "theorem");
  CHECK(st[0].blocks.size() == 1);
}

TEST_CASE("unknown and unnamed environments are skipped with a reason") {
  auto doc = html::parse(wrap(theorem("frobnicate", para("text")) +
                              "<div class=\"ltx_theorem\">" + para("no name") + "</div>"),
                         "d");
  ingest::SkipStats skips;
  CHECK(ingest::extract_statements(doc, taxonomy(), &skips).empty());
  CHECK(skips.counts["unknown-environment"] == 1);
  CHECK(skips.counts["unnamed-environment"] == 1);
}

TEST_CASE("nested environments are both extracted with depth") {
  auto inner = theorem("lemma", para("Inner lemma text."));
  auto doc = html::parse(wrap("<div class=\"ltx_proof\">" + para("Outer proof text.") + inner + "</div>"), "d");
  auto st = ingest::extract_statements(doc, taxonomy());
  REQUIRE(st.size() == 2);
  CHECK(st[0].label == "proof");
  CHECK(st[0].nesting_depth == 0);
  CHECK(st[1].label == "lemma");
  CHECK(st[1].nesting_depth == 1);
}

TEST_CASE("only the first logical paragraph is kept, with trailing display math") {
  std::string body = "<div class=\"ltx_para\"><p class=\"ltx_p\">First.</p></div>"
                     "<table class=\"ltx_equation ltx_eqn_table\"><tr><td><math display=\"block\"><mi>x</mi></math></td></tr></table>"
                     "<div class=\"ltx_para\"><p class=\"ltx_p\">Second.</p></div>";
  auto doc = html::parse(wrap(theorem("remark", body)), "d");
  auto st = ingest::extract_statements(doc, taxonomy());
  REQUIRE(st.size() == 1);
  REQUIRE(st[0].blocks.size() == 2);
  CHECK(st[0].blocks[0].kind == ingest::Block::Kind::Narrative);
  CHECK(st[0].blocks[1].kind == ingest::Block::Kind::Math);
}

TEST_CASE("sections match closed-set headings after dropping numbering") {
  auto doc = html::parse(wrap("<section class=\"ltx_section\"><h2 class=\"ltx_title\"><span class=\"ltx_tag\">1 </span>Introduction</h2>" +
                              para("We introduce things.") + "</section>"
                              "<section class=\"ltx_section\"><h2 class=\"ltx_title\">2. Related Work:</h2>" +
                              para("Others did things.") + "</section>"
                              "<section class=\"ltx_section\"><h2 class=\"ltx_title\">Main argument</h2>" +
                              para("Not a statement.") + "</section>"),
                         "d");
  ingest::SkipStats skips;
  auto st = ingest::extract_statements(doc, taxonomy(), &skips);
  REQUIRE(st.size() == 2);
  CHECK(st[0].label == "introduction");
  CHECK(st[1].label == "relatedwork");
  CHECK(skips.counts["unmatched-heading"] == 1);
}

TEST_CASE("abstract without ltx_para uses its first ltx_p") {
  auto doc = html::parse(wrap("<div class=\"ltx_abstract\"><h6 class=\"ltx_title\">Abstract</h6><p class=\"ltx_p\">We do it.</p>"
                              "<p class=\"ltx_p\">Second.</p></div>"),
                         "d");
  auto st = ingest::extract_statements(doc, taxonomy());
  REQUIRE(st.size() == 1);
  CHECK(st[0].label == "abstract");
  CHECK(st[0].blocks.size() == 1);
}

TEST_CASE("citations, references and error markup are marked") {
  auto doc = html::parse(wrap(theorem("lemma", para("See <cite class=\"ltx_cite\">[1]</cite> and <a class=\"ltx_ref\">3</a> "
                                                    "with <span class=\"ltx_ERROR\">\\bad</span>."))),
                         "d");
  auto st = ingest::extract_statements(doc, taxonomy());
  REQUIRE(st.size() == 1);
  CHECK(st[0].error_markup);
  int cites = 0, refs = 0;
  for (const auto& b : st[0].blocks)
    for (const auto& item : b.items) {
      cites += item.kind == ingest::InlineItem::Kind::Citation;
      refs += item.kind == ingest::InlineItem::Kind::Reference;
    }
  CHECK(cites == 1);
  CHECK(refs == 1);
}

TEST_CASE("empty environment is counted, not extracted") {
  auto doc = html::parse(wrap(theorem("lemma", "")), "d");
  ingest::SkipStats skips;
  CHECK(ingest::extract_statements(doc, taxonomy(), &skips).empty());
  CHECK(skips.counts["empty-statement"] == 1);
}
