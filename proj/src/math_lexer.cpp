#include "stmtcls/math_lexer.hpp"

#include <array>
#include <cstdio>
#include <optional>
#include <unordered_map>

#include "stmtcls/text_util.hpp"

namespace stmtcls::math {

namespace {

struct StyledChar {
  char32_t base;
  Font font;
};

constexpr std::array<const char*, 25> kGreekLower = {
    "alpha", "beta",  "gamma", "delta",   "epsilon", "zeta", "eta", "theta", "iota",
    "kappa", "lambda", "mu",   "nu",      "xi",      "omicron", "pi", "rho", "varsigma",
    "sigma", "tau",   "upsilon", "phi",   "chi",     "psi",  "omega"};

const std::unordered_map<char32_t, std::string>& symbol_names() {
  static const std::unordered_map<char32_t, std::string> table = [] {
    std::unordered_map<char32_t, std::string> t = {
        // Greek variants and capitals without a lowercase counterpart position.
        {0x3F5, "epsilon"}, {0x3D1, "vartheta"}, {0x3D5, "phi"}, {0x3D6, "varpi"}, {0x3F1, "varrho"},
        {0x3F0, "varkappa"}, {0x3F4, "Theta"}, {0x3DD, "digamma"},
        // Letter-like and miscellaneous symbols.
        {0x2202, "partial"}, {0x221E, "infty"}, {0x2207, "nabla"}, {0x2205, "emptyset"},
        {0x2135, "aleph"}, {0x2113, "ell"}, {0x210F, "hbar"}, {0x2118, "wp"}, {0x0131, "imath"},
        {0x0237, "jmath"}, {0x2032, "prime"}, {0x2033, "double_prime"}, {0x00B0, "degree"},
        {0x2220, "angle"}, {0x22A5, "bottom"}, {0x22A4, "top"}, {0x2020, "dagger"},
        // Operators and relations.
        {U'+', "plus"}, {U'-', "minus"}, {0x2212, "minus"}, {U'=', "equals"}, {U'<', "less"},
        {U'>', "greater"}, {U'*', "asterisk"}, {U'/', "slash"}, {U'\\', "backslash"}, {U'|', "vertical_bar"},
        {U'(', "open_paren"}, {U')', "close_paren"}, {U'[', "open_bracket"}, {U']', "close_bracket"},
        {U'{', "open_brace"}, {U'}', "close_brace"}, {U',', "comma"}, {U'.', "period"}, {U';', "semicolon"},
        {U':', "colon"}, {U'!', "factorial"}, {U'\'', "prime"}, {U'^', "caret"}, {U'~', "tilde"},
        {U'&', "ampersand"}, {U'%', "percent"}, {U'#', "hash"}, {U'@', "at"}, {U'?', "question_mark"},
        {0x00B1, "plus_minus"}, {0x2213, "minus_plus"}, {0x00D7, "times"}, {0x00F7, "divide"},
        {0x22C5, "cdot"}, {0x00B7, "cdot"}, {0x2219, "bullet"}, {0x2218, "circ"}, {0x2217, "ast"},
        {0x2260, "not_equals"}, {0x2264, "leq"}, {0x2265, "geq"}, {0x2266, "leqq"}, {0x2267, "geqq"},
        {0x226A, "much_less"}, {0x226B, "much_greater"}, {0x2248, "approx"}, {0x223C, "sim"},
        {0x2243, "simeq"}, {0x2245, "cong"}, {0x2261, "equiv"}, {0x221D, "propto"}, {0x2254, "coloneq"},
        {0x2208, "element_of"}, {0x2209, "not_element_of"}, {0x220B, "contains"}, {0x2282, "subset"},
        {0x2283, "supset"}, {0x2286, "subseteq"}, {0x2287, "supseteq"}, {0x228A, "subsetneq"},
        {0x222A, "union"}, {0x2229, "intersection"}, {0x2216, "setminus"}, {0x2211, "sum"},
        {0x220F, "product"}, {0x2210, "coproduct"}, {0x222B, "integral"}, {0x222C, "double_integral"},
        {0x222E, "contour_integral"}, {0x22C3, "big_union"}, {0x22C2, "big_intersection"},
        {0x2200, "forall"}, {0x2203, "exists"}, {0x2204, "not_exists"}, {0x00AC, "neg"}, {0x2227, "wedge"},
        {0x2228, "vee"}, {0x2192, "rightarrow"}, {0x2190, "leftarrow"}, {0x2194, "leftrightarrow"},
        {0x21A6, "mapsto"}, {0x21D2, "implies"}, {0x21D0, "implied_by"}, {0x21D4, "iff"},
        {0x27F6, "longrightarrow"}, {0x27F9, "long_implies"}, {0x2191, "uparrow"}, {0x2193, "downarrow"},
        {0x21AA, "hookrightarrow"}, {0x2297, "otimes"}, {0x2295, "oplus"}, {0x2299, "odot"},
        {0x2296, "ominus"}, {0x22C6, "star"}, {0x2026, "ldots"}, {0x22EF, "cdots"}, {0x22EE, "vdots"},
        {0x22F1, "ddots"}, {0x27E8, "langle"}, {0x27E9, "rangle"}, {0x2329, "langle"}, {0x232A, "rangle"},
        {0x2016, "double_vertical_bar"}, {0x2225, "parallel"}, {0x2223, "divides"},
        {0x2224, "not_divides"}, {0x230A, "lfloor"}, {0x230B, "rfloor"}, {0x2308, "lceil"},
        {0x2309, "rceil"}, {0x22A2, "vdash"}, {0x22A8, "models"}, {0x2243, "simeq"}, {0x2240, "wr"},
        {0x2227, "wedge"}, {0x22C0, "big_wedge"}, {0x22C1, "big_vee"}, {0x2A01, "big_oplus"},
        {0x2A02, "big_otimes"}, {0x25A1, "square"}, {0x220E, "qed"}, {0x2A7D, "leqslant"},
        {0x2A7E, "geqslant"}, {0x02C6, "hat"}, {0x00AF, "bar"}, {0x02DC, "tilde"}, {0x2192, "rightarrow"},
        {0x20D7, "vec"}, {0x02D9, "dot"}, {0x00A8, "ddot"}, {0x02C7, "check"}, {0x02D8, "breve"},
        {0x2032, "prime"}, {0x23DE, "overbrace"}, {0x23DF, "underbrace"},
        // Invisible operators carry no lexeme.
        {0x2061, ""}, {0x2062, ""}, {0x2063, ""}, {0x2064, ""}, {0x200B, ""}, {0x00A0, ""},
    };
    for (char32_t c = 0x3B1; c <= 0x3C9; ++c) t.emplace(c, kGreekLower[c - 0x3B1]);
    for (char32_t c = 0x391; c <= 0x3A9; ++c) {
      if (c == 0x3A2) continue;
      std::string name = kGreekLower[c - 0x391];
      name[0] = static_cast<char>(name[0] - 'a' + 'A');
      t.emplace(c, name);
    }
    return t;
  }();
  return table;
}

bool is_ascii_alpha(char32_t c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z'); }
bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
bool is_greek_letter(char32_t c) {
  return (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) || (c >= 0x3B1 && c <= 0x3C9) || c == 0x3F5 || c == 0x3D1 ||
         c == 0x3D5 || c == 0x3D6 || c == 0x3F1 || c == 0x3F0 || c == 0x3F4;
}

constexpr std::array<FontStyle, 13> kLatinStyles = {
    FontStyle::Normal,    FontStyle::Italic,    FontStyle::Italic,    FontStyle::Caligraphic, FontStyle::Caligraphic,
    FontStyle::Fraktur,   FontStyle::Blackboard, FontStyle::Fraktur,  FontStyle::SansSerif,   FontStyle::SansSerif,
    FontStyle::SansSerif, FontStyle::SansSerif, FontStyle::Typewriter};
constexpr std::array<bool, 13> kLatinBold = {true, false, true, false, true, false, false,
                                             true, false, true, false, true, false};

/// Maps Mathematical Alphanumeric Symbols and the letter-like block back to a
/// base character plus font.
std::optional<StyledChar> decompose(char32_t cp) {
  static const std::unordered_map<char32_t, StyledChar> letterlike = {
      {0x212C, {U'B', {FontStyle::Caligraphic, false}}}, {0x2130, {U'E', {FontStyle::Caligraphic, false}}},
      {0x2131, {U'F', {FontStyle::Caligraphic, false}}}, {0x210B, {U'H', {FontStyle::Caligraphic, false}}},
      {0x2110, {U'I', {FontStyle::Caligraphic, false}}}, {0x2112, {U'L', {FontStyle::Caligraphic, false}}},
      {0x2133, {U'M', {FontStyle::Caligraphic, false}}}, {0x211B, {U'R', {FontStyle::Caligraphic, false}}},
      {0x212F, {U'e', {FontStyle::Caligraphic, false}}}, {0x210A, {U'g', {FontStyle::Caligraphic, false}}},
      {0x2134, {U'o', {FontStyle::Caligraphic, false}}}, {0x210E, {U'h', {FontStyle::Italic, false}}},
      {0x212D, {U'C', {FontStyle::Fraktur, false}}},     {0x210C, {U'H', {FontStyle::Fraktur, false}}},
      {0x2111, {U'I', {FontStyle::Fraktur, false}}},     {0x211C, {U'R', {FontStyle::Fraktur, false}}},
      {0x2128, {U'Z', {FontStyle::Fraktur, false}}},     {0x2102, {U'C', {FontStyle::Blackboard, false}}},
      {0x210D, {U'H', {FontStyle::Blackboard, false}}},  {0x2115, {U'N', {FontStyle::Blackboard, false}}},
      {0x2119, {U'P', {FontStyle::Blackboard, false}}},  {0x211A, {U'Q', {FontStyle::Blackboard, false}}},
      {0x211D, {U'R', {FontStyle::Blackboard, false}}},  {0x2124, {U'Z', {FontStyle::Blackboard, false}}},
  };
  if (auto it = letterlike.find(cp); it != letterlike.end()) return it->second;

  if (cp >= 0x1D400 && cp < 0x1D400 + 13 * 52) {
    const auto offset = cp - 0x1D400;
    const auto variant = offset / 52;
    const auto idx = offset % 52;
    const char32_t base = idx < 26 ? U'A' + idx : U'a' + (idx - 26);
    return StyledChar{base, {kLatinStyles[variant], kLatinBold[variant]}};
  }
  if (cp == 0x1D6A4) return StyledChar{0x131, {FontStyle::Italic, false}};
  if (cp == 0x1D6A5) return StyledChar{0x237, {FontStyle::Italic, false}};
  if (cp >= 0x1D6A8 && cp < 0x1D6A8 + 5 * 58) {
    static constexpr std::array<char32_t, 58> layout = [] {
      std::array<char32_t, 58> a{};
      std::size_t k = 0;
      for (char32_t c = 0x391; c <= 0x3A1; ++c) a[k++] = c;
      a[k++] = 0x3F4;
      for (char32_t c = 0x3A3; c <= 0x3A9; ++c) a[k++] = c;
      a[k++] = 0x2207;
      for (char32_t c = 0x3B1; c <= 0x3C9; ++c) a[k++] = c;
      for (char32_t c : {0x2202u, 0x3F5u, 0x3D1u, 0x3F0u, 0x3D5u, 0x3F1u, 0x3D6u}) a[k++] = c;
      return a;
    }();
    static constexpr std::array<Font, 5> fonts = {Font{FontStyle::Normal, true}, Font{FontStyle::Italic, false},
                                                  Font{FontStyle::Italic, true}, Font{FontStyle::SansSerif, true},
                                                  Font{FontStyle::SansSerif, true}};
    const auto offset = cp - 0x1D6A8;
    return StyledChar{layout[offset % 58], fonts[offset / 58]};
  }
  if (cp >= 0x1D7CE && cp <= 0x1D7FF) {
    static constexpr std::array<Font, 5> fonts = {Font{FontStyle::Normal, true}, Font{FontStyle::Blackboard, false},
                                                  Font{FontStyle::SansSerif, false}, Font{FontStyle::SansSerif, true},
                                                  Font{FontStyle::Typewriter, false}};
    const auto offset = cp - 0x1D7CE;
    return StyledChar{U'0' + offset % 10, fonts[offset / 10]};
  }
  return std::nullopt;
}

std::string hex_escape(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U%04X", static_cast<unsigned>(cp));
  return buf;
}

std::string name_of(char32_t cp) {
  if (cp < 0x80 && (is_ascii_alpha(cp) || is_ascii_digit(cp))) return std::string(1, static_cast<char>(cp));
  if (auto it = symbol_names().find(cp); it != symbol_names().end()) return it->second;
  return hex_escape(cp);
}

/// Joins per-character names: ASCII alphanumerics run together, anything
/// spelled out is separated by underscores.
std::string join_names(const std::vector<char32_t>& cps) {
  std::string out;
  bool prev_simple = false;
  for (char32_t cp : cps) {
    const bool simple = cp < 0x80 && (is_ascii_alpha(cp) || is_ascii_digit(cp));
    std::string part = name_of(cp);
    if (part.empty()) continue;
    if (!out.empty() && !(simple && prev_simple)) out.push_back('_');
    out += part;
    prev_simple = simple;
  }
  return out;
}

std::string style_name(FontStyle style) {
  switch (style) {
    case FontStyle::Normal: return "normal";
    case FontStyle::Italic: return "italic";
    case FontStyle::Caligraphic: return "caligraphic";
    case FontStyle::Blackboard: return "blackboard";
    case FontStyle::Fraktur: return "fraktur";
    case FontStyle::SansSerif: return "sansserif";
    case FontStyle::Typewriter: return "typewriter";
  }
  return "normal";
}

void emit_wrapped(std::vector<std::string>& out, const char* marker, const MathNode& inner, LexStats* stats);

void emit(std::vector<std::string>& out, const MathNode& node, LexStats* stats) {
  auto arity_ok = [&](std::size_t n) { return node.children.size() == n; };
  switch (node.kind) {
    case Kind::Symbol: {
      auto lex = leaf_lexeme(node.font, node.glyph);
      if (!lex.empty()) out.push_back(std::move(lex));
      return;
    }
    case Kind::Operator: {
      auto name = transliterate(node.glyph);
      if (!name.empty()) out.push_back(std::move(name));
      return;
    }
    case Kind::Number: {
      std::string lex;
      std::size_t pos = 0;
      bool sep = false;
      while (pos < node.glyph.size()) {
        char32_t cp = next_code_point(node.glyph, pos);
        if (auto styled = decompose(cp)) cp = styled->base;
        if (is_ascii_digit(cp) || is_ascii_alpha(cp)) {
          if (sep && !lex.empty()) lex.push_back('_');
          sep = false;
          lex.push_back(static_cast<char>(cp));
        } else {
          sep = true;
        }
      }
      if (!lex.empty()) out.push_back(std::move(lex));
      return;
    }
    case Kind::Text: {
      std::string word;
      for (char c : node.glyph) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
          word.push_back(c);
        } else if (c >= 'A' && c <= 'Z') {
          word.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (!word.empty()) {
          out.push_back(std::move(word));
          word.clear();
        }
      }
      if (!word.empty()) out.push_back(std::move(word));
      return;
    }
    case Kind::Row:
      for (const auto& c : node.children) emit(out, c, stats);
      return;
    case Kind::Subscript:
    case Kind::Superscript:
      if (!arity_ok(2)) break;
      emit(out, node.children[0], stats);
      emit_wrapped(out, node.kind == Kind::Subscript ? "POSTSUBSCRIPT" : "POSTSUPERSCRIPT", node.children[1], stats);
      return;
    case Kind::SubSuperscript:
      if (!arity_ok(3)) break;
      emit(out, node.children[0], stats);
      emit_wrapped(out, "POSTSUBSCRIPT", node.children[1], stats);
      emit_wrapped(out, "POSTSUPERSCRIPT", node.children[2], stats);
      return;
    case Kind::Fraction:
      if (!arity_ok(2)) break;
      emit_wrapped(out, "NUMERATOR", node.children[0], stats);
      emit_wrapped(out, "DENOMINATOR", node.children[1], stats);
      return;
    case Kind::Sqrt:
      if (!arity_ok(1)) break;
      emit_wrapped(out, "SQRT", node.children[0], stats);
      return;
    case Kind::Root:
      if (!arity_ok(2)) break;
      emit_wrapped(out, "ROOTINDEX", node.children[1], stats);
      emit_wrapped(out, "SQRT", node.children[0], stats);
      return;
    case Kind::Under:
    case Kind::Over:
      if (!arity_ok(2)) break;
      emit(out, node.children[0], stats);
      emit_wrapped(out, node.kind == Kind::Under ? "UNDERSCRIPT" : "OVERSCRIPT", node.children[1], stats);
      return;
    case Kind::UnderOver:
      if (!arity_ok(3)) break;
      emit(out, node.children[0], stats);
      emit_wrapped(out, "UNDERSCRIPT", node.children[1], stats);
      emit_wrapped(out, "OVERSCRIPT", node.children[2], stats);
      return;
    case Kind::Table: {
      out.emplace_back("ARRAY_start");
      for (const auto& c : node.children) emit(out, c, stats);
      out.emplace_back("ARRAY_end");
      return;
    }
    case Kind::Other:
      break;
  }
  // Unknown structure or wrong arity: children without a wrapper.
  if (stats) ++stats->warnings;
  for (const auto& c : node.children) emit(out, c, stats);
}

void emit_wrapped(std::vector<std::string>& out, const char* marker, const MathNode& inner, LexStats* stats) {
  out.push_back(std::string(marker) + "_start");
  emit(out, inner, stats);
  out.push_back(std::string(marker) + "_end");
}

// ---- MathML conversion ----

std::optional<Font> font_from_variant(std::string_view v) {
  if (v == "normal") return Font{FontStyle::Normal, false};
  if (v == "italic") return Font{FontStyle::Italic, false};
  if (v == "bold") return Font{FontStyle::Normal, true};
  if (v == "bold-italic") return Font{FontStyle::Italic, true};
  if (v == "double-struck") return Font{FontStyle::Blackboard, false};
  if (v == "script") return Font{FontStyle::Caligraphic, false};
  if (v == "bold-script") return Font{FontStyle::Caligraphic, true};
  if (v == "fraktur") return Font{FontStyle::Fraktur, false};
  if (v == "bold-fraktur") return Font{FontStyle::Fraktur, true};
  if (v == "sans-serif" || v == "sans-serif-italic") return Font{FontStyle::SansSerif, false};
  if (v == "bold-sans-serif" || v == "sans-serif-bold-italic") return Font{FontStyle::SansSerif, true};
  if (v == "monospace") return Font{FontStyle::Typewriter, false};
  return std::nullopt;
}

std::optional<Font> font_from_classes(const html::Node& el) {
  std::optional<Font> font;
  for (const auto& cls : el.classes) {
    if (cls == "ltx_font_mathcaligraphic") font = Font{FontStyle::Caligraphic, font && font->bold};
    else if (cls == "ltx_font_mathblackboard" || cls == "ltx_font_blackboard")
      font = Font{FontStyle::Blackboard, font && font->bold};
    else if (cls == "ltx_font_fraktur") font = Font{FontStyle::Fraktur, font && font->bold};
    else if (cls == "ltx_font_sansserif") font = Font{FontStyle::SansSerif, font && font->bold};
    else if (cls == "ltx_font_typewriter") font = Font{FontStyle::Typewriter, font && font->bold};
    else if (cls == "ltx_font_bold") font = Font{font ? font->style : FontStyle::Normal, true};
    else if (cls == "ltx_font_upright") font = Font{FontStyle::Normal, font && font->bold};
  }
  return font;
}

bool skipped_tag(std::string_view tag) {
  return tag == "annotation" || tag == "annotation-xml" || tag == "mspace" || tag == "mphantom" || tag == "none" ||
         tag == "mprescripts" || tag == "maligngroup" || tag == "malignmark";
}

std::vector<const html::Node*> element_children(const html::Node& el) {
  std::vector<const html::Node*> out;
  for (const auto& c : el.children) {
    if (!c.is_text() && !skipped_tag(c.tag)) out.push_back(&c);
  }
  return out;
}

MathNode convert(const html::Node& el, const std::optional<Font>& inherited);

std::vector<MathNode> convert_children(const html::Node& el, const std::optional<Font>& inherited) {
  std::vector<MathNode> out;
  for (const auto* c : element_children(el)) out.push_back(convert(*c, inherited));
  return out;
}

MathNode structure(Kind kind, const html::Node& el, const std::optional<Font>& inherited) {
  return MathNode::node(kind, convert_children(el, inherited));
}

MathNode convert(const html::Node& el, const std::optional<Font>& inherited) {
  const auto& tag = el.tag;
  std::optional<Font> font = inherited;
  if (auto v = el.attribute("mathvariant")) {
    if (auto f = font_from_variant(*v)) font = f;
  }
  if (auto f = font_from_classes(el)) font = f;

  if (tag == "math" || tag == "semantics") {
    auto kids = element_children(el);
    if (tag == "semantics" && !kids.empty()) return convert(*kids.front(), font);
    return structure(Kind::Row, el, font);
  }
  if (tag == "mi" || tag == "mn" || tag == "mo" || tag == "mtext" || tag == "ms") {
    std::string glyph(trim(el.text_content()));
    if (tag == "mn") return MathNode::leaf(Kind::Number, glyph);
    if (tag == "mo") return MathNode::leaf(Kind::Operator, glyph);
    if (tag == "mtext" || tag == "ms") return MathNode::leaf(Kind::Text, glyph);
    Font f;
    if (font) {
      f = *font;
    } else {
      // MathML default: single-character identifiers are italic.
      std::size_t pos = 0;
      if (!glyph.empty()) next_code_point(glyph, pos);
      f.style = (pos == glyph.size()) ? FontStyle::Italic : FontStyle::Normal;
    }
    return MathNode::leaf(Kind::Symbol, glyph, f);
  }
  if (tag == "msub") return structure(Kind::Subscript, el, font);
  if (tag == "msup") return structure(Kind::Superscript, el, font);
  if (tag == "msubsup") return structure(Kind::SubSuperscript, el, font);
  if (tag == "mfrac") return structure(Kind::Fraction, el, font);
  if (tag == "msqrt") return MathNode::node(Kind::Sqrt, {MathNode::node(Kind::Row, convert_children(el, font))});
  if (tag == "mroot") return structure(Kind::Root, el, font);
  if (tag == "munder") return structure(Kind::Under, el, font);
  if (tag == "mover") return structure(Kind::Over, el, font);
  if (tag == "munderover") return structure(Kind::UnderOver, el, font);
  if (tag == "mtable") return structure(Kind::Table, el, font);
  if (tag == "mrow" || tag == "mstyle" || tag == "mpadded" || tag == "mtr" || tag == "mtd" || tag == "mlabeledtr" ||
      tag == "merror" || tag == "mfenced")
    return structure(Kind::Row, el, font);
  return structure(Kind::Other, el, font);
}

}  // namespace

MathNode MathNode::leaf(Kind kind, std::string glyph, Font font) {
  MathNode n;
  n.kind = kind;
  n.glyph = std::move(glyph);
  n.font = font;
  return n;
}

MathNode MathNode::node(Kind kind, std::vector<MathNode> children) {
  MathNode n;
  n.kind = kind;
  n.children = std::move(children);
  return n;
}

std::vector<std::string> lexemize(const MathNode& root, LexStats* stats) {
  std::vector<std::string> out;
  emit(out, root, stats);
  return out;
}

std::string font_prefix(const Font& font) {
  if (!font.bold) return style_name(font.style);
  if (font.style == FontStyle::Normal) return "bold";
  return "bold_" + style_name(font.style);
}

std::string leaf_lexeme(const Font& font, std::string_view glyph) {
  auto cps = utf8_decode(glyph);
  Font effective = font;
  bool alphabetic = !cps.empty();
  for (auto& cp : cps) {
    if (auto styled = decompose(cp)) {
      cp = styled->base;
      effective.style = styled->font.style;
      effective.bold = effective.bold || styled->font.bold;
    }
    if (!is_ascii_alpha(cp) && !is_greek_letter(cp) && cp != 0x131 && cp != 0x237) alphabetic = false;
  }
  std::string name = join_names(cps);
  if (name.empty()) return name;
  if (!alphabetic) return name;
  return font_prefix(effective) + "_" + name;
}

std::string transliterate(std::string_view glyph) {
  auto cps = utf8_decode(glyph);
  for (auto& cp : cps) {
    if (auto styled = decompose(cp)) cp = styled->base;
  }
  return join_names(cps);
}

bool is_math_lexeme(std::string_view token) {
  for (char c : token) {
    if (c == '_' || (c >= 'A' && c <= 'Z')) return true;
  }
  return false;
}

MathNode from_mathml(const html::Node& element) { return convert(element, std::nullopt); }

std::vector<std::string> lexemize_markup(std::string_view markup, LexStats* stats) {
  return lexemize(from_mathml(html::parse_fragment(markup)), stats);
}

}  // namespace stmtcls::math
