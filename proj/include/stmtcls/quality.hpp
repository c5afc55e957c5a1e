#pragma once

#include <string>

#include "stmtcls/langid.hpp"
#include "stmtcls/normalizer.hpp"

namespace stmtcls {

/// Document-level facts the paragraph filter needs.
struct DocFlags {
  bool error_markup = false;
  /// Language of the whole document, used for paragraphs too short to detect.
  std::string document_language = std::string(kUndetermined);
};

struct FilterDecision {
  bool keep = true;
  /// Empty when kept; otherwise error-markup, empty, long-word or non-english.
  std::string reason;
  std::string language;
};

/// Checks run in order: error-markup, empty, long-word, non-english. A
/// paragraph too short to identify inherits the document language; when that
/// is undetermined too the paragraph is kept.
FilterDecision quality_filter(const NormalizedParagraph& para, const DocFlags& flags,
                              const LanguageIdentifier& langid = LanguageIdentifier::bundled());

}  // namespace stmtcls
