#include "stmtcls/normalizer.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "stmtcls/math_lexer.hpp"
#include "stmtcls/text_util.hpp"

namespace stmtcls {

namespace {

// Folds for U+00C0..U+017F, indexed from 0xC0. Empty entries have no fold.
constexpr std::array<std::string_view, 0x180 - 0xC0> kLatinFolds = {
    // C0
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    // D0
    "d", "n", "o", "o", "o", "o", "o", "", "o", "u", "u", "u", "u", "y", "th", "ss",
    // E0
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    // F0
    "d", "n", "o", "o", "o", "o", "o", "", "o", "u", "u", "u", "u", "y", "th", "y",
    // 100
    "a", "a", "a", "a", "a", "a", "c", "c", "c", "c", "c", "c", "c", "c", "d", "d",
    // 110
    "d", "d", "e", "e", "e", "e", "e", "e", "e", "e", "e", "e", "g", "g", "g", "g",
    // 120
    "g", "g", "g", "g", "h", "h", "h", "h", "i", "i", "i", "i", "i", "i", "i", "i",
    // 130
    "i", "i", "ij", "ij", "j", "j", "k", "k", "k", "l", "l", "l", "l", "l", "l", "l",
    // 140
    "l", "l", "l", "n", "n", "n", "n", "n", "n", "n", "n", "n", "o", "o", "o", "o",
    // 150
    "o", "o", "oe", "oe", "r", "r", "r", "r", "r", "r", "s", "s", "s", "s", "s", "s",
    // 160
    "s", "s", "t", "t", "t", "t", "t", "t", "u", "u", "u", "u", "u", "u", "u", "u",
    // 170
    "u", "u", "u", "u", "w", "w", "y", "y", "y", "z", "z", "z", "z", "z", "z", "s",
};

const std::unordered_set<std::string_view>& abbreviations() {
  static const std::unordered_set<std::string_view> set = {
      "cf",  "fig", "figs", "eq",  "eqs", "al",  "resp", "vs",  "thm", "sec", "secs", "ref",
      "refs", "prop", "lem", "def", "cor", "no",  "nos",  "ch",  "approx", "dr", "mr",  "ms",
      "prof", "st",  "viz",  "etal", "ie", "eg",  "pp",   "vol", "eqn", "eqns", "tab", "app"};
  return set;
}

bool is_placeholder(std::string_view w) {
  return w == kCitationPlaceholder || w == kReferencePlaceholder || w == kNumberPlaceholder;
}

struct Segment {
  enum class Kind { Text, Lexemes, Citation, Reference, Break };
  Kind kind = Kind::Text;
  std::string text;
  std::vector<std::string> lexemes;
};

class Builder {
public:
  explicit Builder(NormalizedParagraph& out) : out_(out) {}

  void run(const std::vector<Segment>& segments) {
    for (const auto& seg : segments) {
      switch (seg.kind) {
        case Segment::Kind::Text:
          scan_text(seg.text);
          break;
        case Segment::Kind::Lexemes:
          if (seg.lexemes.empty()) break;
          settle_pending();
          for (const auto& lex : seg.lexemes) push({lex, TokenOrigin::Math});
          out_.flags.had_math = true;
          break;
        case Segment::Kind::Citation:
          settle_pending();
          push({std::string(kCitationPlaceholder), TokenOrigin::Placeholder});
          break;
        case Segment::Kind::Reference:
          settle_pending();
          push({std::string(kReferencePlaceholder), TokenOrigin::Placeholder});
          break;
        case Segment::Kind::Break:
          end_word();
          end_sentence();
          pending_ = Pending::None;
          break;
      }
    }
    end_word();
    end_sentence();
  }

private:
  enum class Pending { None, Punct, Confirmed };

  void push(Token t) {
    if (t.origin == TokenOrigin::Placeholder || is_placeholder(t.text)) {
      t.origin = TokenOrigin::Placeholder;
      if (t.text == kCitationPlaceholder) out_.flags.had_citation = true;
      else if (t.text == kReferencePlaceholder) out_.flags.had_ref = true;
      else out_.flags.had_number = true;
    }
    last_word_ = t.origin == TokenOrigin::Narrative ? t.text : std::string();
    sentence_.push_back(std::move(t));
  }

  void end_sentence() {
    if (!sentence_.empty()) out_.sentences.push_back(std::move(sentence_));
    sentence_.clear();
  }

  void end_word() {
    if (word_.empty()) return;
    const bool numeric = std::all_of(word_.begin(), word_.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (numeric) {
      push({std::string(kNumberPlaceholder), TokenOrigin::Placeholder});
    } else {
      push({word_, TokenOrigin::Narrative});
    }
    word_.clear();
  }

  bool abbreviation_before() const {
    return last_word_.size() == 1 || abbreviations().count(last_word_) > 0;
  }

  /// A pending terminal mark turns into a boundary before non-text content.
  void settle_pending() {
    end_word();
    if (pending_ != Pending::None && !abbreviation_before()) end_sentence();
    pending_ = Pending::None;
  }

  void scan_text(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
      char32_t cp = next_code_point(s, pos);
      std::string_view letters;
      char ascii[2] = {0, 0};
      bool upper = false;
      if (cp < 0x80 && ((cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9'))) {
        ascii[0] = static_cast<char>(cp);
        letters = std::string_view(ascii, 1);
      } else if (cp >= 'A' && cp <= 'Z') {
        ascii[0] = static_cast<char>(cp - 'A' + 'a');
        letters = std::string_view(ascii, 1);
        upper = true;
      } else if (auto fold = fold_latin(cp); !fold.empty()) {
        letters = fold;
        upper = (cp >= 0xC0 && cp <= 0xDE) || (cp >= 0x100 && cp < 0x180 && cp % 2 == 0);
      }

      if (!letters.empty()) {
        if (pending_ != Pending::None) {
          const bool digit = ascii[0] >= '0' && ascii[0] <= '9';
          if (word_.empty() && pending_ == Pending::Confirmed && (upper || digit) && !abbreviation_before()) {
            end_sentence();
          }
          pending_ = Pending::None;
        }
        word_ += letters;
        continue;
      }

      // Decimal and thousands separators inside a number: "3.5", "10,000".
      if ((cp == '.' || cp == ',') && !word_.empty() &&
          std::all_of(word_.begin(), word_.end(), [](char c) { return c >= '0' && c <= '9'; }) && pos < s.size() &&
          s[pos] >= '0' && s[pos] <= '9') {
        continue;
      }

      end_word();
      if (cp == '.' || cp == '!' || cp == '?') {
        // "e.g." and friends keep the previous word as the abbreviation check.
        if (pending_ == Pending::None) pending_ = Pending::Punct;
      } else if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0xA0) {
        if (pending_ == Pending::Punct) pending_ = Pending::Confirmed;
      } else if (cp == ')' || cp == '"' || cp == '\'' || cp == ']' || cp == 0x201D || cp == 0x2019) {
        // Closing marks keep a pending terminal mark alive.
      } else {
        pending_ = Pending::None;
      }
    }
    end_word();
    if (pending_ == Pending::Punct) pending_ = Pending::Confirmed;
  }

  NormalizedParagraph& out_;
  std::vector<Token> sentence_;
  std::string word_;
  std::string last_word_;
  Pending pending_ = Pending::None;
};

void append_segments(const ingest::RawStatement& stmt, const NormalizeOptions& options, std::vector<Segment>& out) {
  using Item = ingest::InlineItem;
  for (const auto& block : stmt.blocks) {
    for (const auto& item : block.items) {
      switch (item.kind) {
        case Item::Kind::Text:
          out.push_back({Segment::Kind::Text, item.text, {}});
          break;
        case Item::Kind::Math:
          if (options.include_math) out.push_back({Segment::Kind::Lexemes, {}, math::lexemize(item.math)});
          break;
        case Item::Kind::Citation:
          out.push_back({Segment::Kind::Citation, {}, {}});
          break;
        case Item::Kind::Reference:
          out.push_back({Segment::Kind::Reference, {}, {}});
          break;
      }
    }
    // Blocks are whitespace-separated even when the markup has none between them.
    out.push_back({Segment::Kind::Text, " ", {}});
  }
}

bool lexeme_shaped(std::string_view tok) {
  if (tok.empty() || !math::is_math_lexeme(tok)) return false;
  const bool word_chars = std::all_of(tok.begin(), tok.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
  if (!word_chars) return false;
  // capitalised prose words are not lexemes; bare markers like FRACTION are
  if (tok.find('_') != std::string_view::npos) return true;
  return tok.size() >= 2 && std::none_of(tok.begin(), tok.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

std::string_view fold_latin(char32_t cp) {
  if (cp >= 0xC0 && cp < 0x180) return kLatinFolds[cp - 0xC0];
  return {};
}

std::size_t NormalizedParagraph::word_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

std::vector<std::string> NormalizedParagraph::tokens() const {
  std::vector<std::string> out;
  out.reserve(word_count());
  for (const auto& s : sentences)
    for (const auto& t : s) out.push_back(t.text);
  return out;
}

std::vector<std::string> NormalizedParagraph::narrative_words() const {
  std::vector<std::string> out;
  for (const auto& s : sentences)
    for (const auto& t : s)
      if (t.origin == TokenOrigin::Narrative) out.push_back(t.text);
  return out;
}

std::string NormalizedParagraph::serialize() const {
  std::string out;
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out.push_back(' ');
      out += s[i].text;
    }
    out.push_back('\n');
  }
  return out;
}

NormalizedParagraph normalize(const ingest::RawStatement& stmt, const NormalizeOptions& options) {
  std::vector<Segment> segments;
  append_segments(stmt, options, segments);
  NormalizedParagraph out;
  Builder(out).run(segments);
  return out;
}

NormalizedParagraph normalize_text(std::string_view text, const NormalizeOptions& options) {
  std::vector<Segment> segments;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    std::string run;
    for (const auto& tok : split_ws(line)) {
      if (lexeme_shaped(tok)) {
        if (!run.empty()) segments.push_back({Segment::Kind::Text, std::move(run), {}});
        run.clear();
        if (options.include_math) segments.push_back({Segment::Kind::Lexemes, {}, {tok}});
        continue;
      }
      run += tok;
      run.push_back(' ');
    }
    if (!run.empty()) segments.push_back({Segment::Kind::Text, std::move(run), {}});
    segments.push_back({Segment::Kind::Break, {}, {}});
    start = end + 1;
  }
  NormalizedParagraph out;
  Builder(out).run(segments);
  return out;
}

NormalizedParagraph parse_serialized(std::string_view text) {
  NormalizedParagraph out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::vector<Token> sentence;
    for (auto& tok : split_ws(text.substr(start, end - start))) {
      Token t{std::move(tok), TokenOrigin::Narrative};
      if (is_placeholder(t.text)) {
        t.origin = TokenOrigin::Placeholder;
        if (t.text == kCitationPlaceholder) out.flags.had_citation = true;
        else if (t.text == kReferencePlaceholder) out.flags.had_ref = true;
        else out.flags.had_number = true;
      } else if (math::is_math_lexeme(t.text)) {
        t.origin = TokenOrigin::Math;
        out.flags.had_math = true;
      }
      sentence.push_back(std::move(t));
    }
    if (!sentence.empty()) out.sentences.push_back(std::move(sentence));
    start = end + 1;
  }
  return out;
}

}  // namespace stmtcls
