#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stmtcls/html.hpp"

namespace stmtcls::math {

enum class FontStyle { Normal, Italic, Caligraphic, Blackboard, Fraktur, SansSerif, Typewriter };

struct Font {
  FontStyle style = FontStyle::Normal;
  bool bold = false;

  friend bool operator==(const Font&, const Font&) = default;
};

enum class Kind {
  Symbol,
  Operator,
  Number,
  Text,
  Row,
  Subscript,       // base, script
  Superscript,     // base, script
  SubSuperscript,  // base, subscript, superscript
  Fraction,        // numerator, denominator
  Sqrt,            // radicand
  Root,            // radicand, index
  Under,           // base, underscript
  Over,            // base, overscript
  UnderOver,       // base, underscript, overscript
  Table,
  Other,
};

/// Presentation-math tree node. Leaves (symbol, operator, number, text) carry
/// a glyph and have no children.
struct MathNode {
  Kind kind = Kind::Row;
  std::string glyph;
  Font font;
  std::vector<MathNode> children;

  static MathNode leaf(Kind kind, std::string glyph, Font font = {});
  static MathNode node(Kind kind, std::vector<MathNode> children);
};

struct LexStats {
  std::size_t warnings = 0;
};

/// Depth-first lexeme serialization. Scripts and other layout structure are
/// wrapped in balanced `NAME_start` / `NAME_end` markers.
std::vector<std::string> lexemize(const MathNode& root, LexStats* stats = nullptr);

/// Font prefix of an alphabetic glyph: one of italic, caligraphic, blackboard,
/// fraktur, sansserif, typewriter, normal, or a `bold`-combined form
/// (`bold` for upright bold, `bold_italic`, `bold_fraktur`, ...).
std::string font_prefix(const Font& font);

/// Lexeme of a single symbol leaf: `<prefix>_<name>` for letters, the bare
/// transliterated name for digits and other symbols.
std::string leaf_lexeme(const Font& font, std::string_view glyph);

/// Spelled-out name of a glyph (Greek letters, operators); ASCII alphanumerics
/// pass through and anything unknown becomes `U<hex>`.
std::string transliterate(std::string_view glyph);

/// True if `token` can only have come from the math lexer: it carries a font
/// prefix or structure marker, an underscore, an uppercase letter or a `U<hex>`
/// escape. Bare digits and single-word operator names are not matched.
bool is_math_lexeme(std::string_view token);

/// Converts a MathML presentation element (`<math>` or any descendant) into a
/// MathNode tree. Content-markup annotations are ignored.
MathNode from_mathml(const html::Node& element);

/// Parses one `<math>...</math>` string and lexemizes it.
std::vector<std::string> lexemize_markup(std::string_view markup, LexStats* stats = nullptr);

}  // namespace stmtcls::math
