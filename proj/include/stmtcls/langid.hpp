#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stmtcls/normalizer.hpp"

namespace stmtcls {

inline constexpr std::size_t kProfileSize = 300;
inline constexpr std::size_t kMinDetectableWords = 10;
inline constexpr std::string_view kUndetermined = "undetermined";
/// Relative margin to the runner-up below which a guess is not trusted.
inline constexpr double kMinConfidence = 0.05;

/// Rank-ordered character trigram profile (Cavnar & Trenkle n-gram text
/// categorization restricted to trigrams).
struct NgramProfile {
  std::vector<std::string> ranked;
  std::unordered_map<std::string, std::size_t> rank;

  static NgramProfile from_words(const std::vector<std::string>& words, std::size_t size = kProfileSize);
  /// Sum of rank displacements; n-grams missing from `reference` cost `size`.
  std::size_t out_of_place(const NgramProfile& reference) const;
};

struct LanguageGuess {
  std::string language;
  std::size_t distance = 0;
  /// Relative margin to the runner-up, in [0, 1].
  double confidence = 0.0;
  std::map<std::string, std::size_t> distances;
};

class LanguageIdentifier {
public:
  /// Builds one profile per `<name>.txt` sample in `dir`.
  static LanguageIdentifier load(const std::filesystem::path& dir);
  static const LanguageIdentifier& bundled();

  void add(std::string name, const std::vector<std::string>& words);

  /// Best language by minimal out-of-place distance; "undetermined" when fewer
  /// than kMinDetectableWords words are given or the margin to the runner-up
  /// is below kMinConfidence (short keyword lists are noisy).
  LanguageGuess detect(const std::vector<std::string>& words) const;
  LanguageGuess detect(const NormalizedParagraph& para) const { return detect(para.narrative_words()); }
  LanguageGuess detect_text(std::string_view text) const;

  std::vector<std::string> languages() const;

private:
  std::vector<std::pair<std::string, NgramProfile>> profiles_;
};

/// Lowercased narrative words of free text, numbers and punctuation removed.
std::vector<std::string> profile_words(std::string_view text);

}  // namespace stmtcls
