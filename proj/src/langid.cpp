#include "stmtcls/langid.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stmtcls/taxonomy.hpp"

namespace stmtcls {

NgramProfile NgramProfile::from_words(const std::vector<std::string>& words, std::size_t size) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& w : words) {
    const std::string padded = "_" + w + "_";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) ++counts[padded.substr(i, 3)];
  }
  std::vector<std::pair<std::string, std::size_t>> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  NgramProfile p;
  for (std::size_t i = 0; i < sorted.size() && i < size; ++i) {
    p.rank.emplace(sorted[i].first, i);
    p.ranked.push_back(std::move(sorted[i].first));
  }
  return p;
}

std::size_t NgramProfile::out_of_place(const NgramProfile& reference) const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    auto it = reference.rank.find(ranked[i]);
    if (it == reference.rank.end()) {
      total += kProfileSize;
    } else {
      total += it->second > i ? it->second - i : i - it->second;
    }
  }
  return total;
}

std::vector<std::string> profile_words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& w : normalize_text(text, {.include_math = false}).narrative_words()) out.push_back(std::move(w));
  return out;
}

LanguageIdentifier LanguageIdentifier::load(const std::filesystem::path& dir) {
  LanguageIdentifier id;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no language samples in " + dir.string());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    id.add(f.stem().string(), profile_words(ss.str()));
  }
  return id;
}

const LanguageIdentifier& LanguageIdentifier::bundled() {
  static const LanguageIdentifier id = load(data_dir() / "lang");
  return id;
}

void LanguageIdentifier::add(std::string name, const std::vector<std::string>& words) {
  profiles_.emplace_back(std::move(name), NgramProfile::from_words(words));
}

LanguageGuess LanguageIdentifier::detect(const std::vector<std::string>& words) const {
  LanguageGuess guess;
  guess.language = std::string(kUndetermined);
  if (words.size() < kMinDetectableWords || profiles_.empty()) return guess;
  const auto doc = NgramProfile::from_words(words);
  for (const auto& [name, profile] : profiles_) guess.distances[name] = doc.out_of_place(profile);

  std::size_t best = SIZE_MAX, second = SIZE_MAX;
  std::string best_name;
  for (const auto& [name, d] : guess.distances) {
    if (d < best) {
      second = best;
      best = d;
      best_name = name;
    } else if (d < second) {
      second = d;
    }
  }
  guess.distance = best;
  if (second == best) return guess;  // tie: no strictly minimal language
  guess.confidence = second == SIZE_MAX || second == 0 ? 1.0 : static_cast<double>(second - best) / second;
  if (guess.confidence >= kMinConfidence) guess.language = best_name;
  return guess;
}

LanguageGuess LanguageIdentifier::detect_text(std::string_view text) const { return detect(profile_words(text)); }

std::vector<std::string> LanguageIdentifier::languages() const {
  std::vector<std::string> out;
  for (const auto& [name, p] : profiles_) out.push_back(name);
  return out;
}

}  // namespace stmtcls
