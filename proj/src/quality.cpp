#include "stmtcls/quality.hpp"

#include <algorithm>

namespace stmtcls {

FilterDecision quality_filter(const NormalizedParagraph& para, const DocFlags& flags, const LanguageIdentifier& langid) {
  FilterDecision d;
  if (flags.error_markup) {
    d.keep = false;
    d.reason = "error-markup";
    return d;
  }
  if (para.empty()) {
    d.keep = false;
    d.reason = "empty";
    return d;
  }
  const auto words = para.narrative_words();
  if (std::any_of(words.begin(), words.end(), [](const std::string& w) { return w.size() > kMaxWordLength; })) {
    d.keep = false;
    d.reason = "long-word";
    return d;
  }
  auto guess = langid.detect(words);
  d.language = guess.language;
  if (guess.language == kUndetermined) d.language = flags.document_language;
  // nothing to go on at either level: keep
  if (d.language != "english" && d.language != kUndetermined) {
    d.keep = false;
    d.reason = "non-english";
  }
  return d;
}

}  // namespace stmtcls
