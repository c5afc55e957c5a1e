#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stmtcls/ingest.hpp"

namespace stmtcls {

inline constexpr std::string_view kCitationPlaceholder = "citationelement";
inline constexpr std::string_view kReferencePlaceholder = "refelement";
inline constexpr std::string_view kNumberPlaceholder = "numliteral";

/// Longest narrative word that survives the quality filter.
inline constexpr std::size_t kMaxWordLength = 25;

enum class TokenOrigin { Narrative, Math, Placeholder };

struct Token {
  std::string text;
  TokenOrigin origin = TokenOrigin::Narrative;

  friend bool operator==(const Token&, const Token&) = default;
};

struct ParagraphFlags {
  bool had_math = false;
  bool had_citation = false;
  bool had_ref = false;
  bool had_number = false;

  friend bool operator==(const ParagraphFlags&, const ParagraphFlags&) = default;
};

struct NormalizedParagraph {
  std::vector<std::vector<Token>> sentences;
  ParagraphFlags flags;

  std::size_t word_count() const;
  std::vector<std::string> tokens() const;
  /// Narrative words only: no math lexemes, no placeholders.
  std::vector<std::string> narrative_words() const;
  bool empty() const { return word_count() == 0; }

  /// One sentence per line, tokens separated by single spaces.
  std::string serialize() const;
};

struct NormalizeOptions {
  /// When false every math run is deleted outright (the formula-free control).
  bool include_math = true;
};

NormalizedParagraph normalize(const ingest::RawStatement& stmt, const NormalizeOptions& options = {});

/// Normalizes plain text. Newlines end sentences and tokens already in
/// math-lexeme form are kept verbatim, so serialized paragraphs normalize to
/// themselves.
NormalizedParagraph normalize_text(std::string_view text, const NormalizeOptions& options = {});

/// Reads back a serialized paragraph file.
NormalizedParagraph parse_serialized(std::string_view text);

/// Folds Latin-1 / Latin Extended-A letters to ASCII (é -> e, ß -> ss).
/// Returns an empty view for code points without a fold.
std::string_view fold_latin(char32_t cp);

}  // namespace stmtcls
