#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stmtcls {

std::string_view trim(std::string_view s);

/// Trims and collapses internal runs of ASCII whitespace to one space.
std::string collapse_spaces(std::string_view s);

/// Decodes one UTF-8 code point at `pos`, advancing it. Malformed bytes decode
/// as U+FFFD and consume a single byte.
char32_t next_code_point(std::string_view s, std::size_t& pos);

std::vector<char32_t> utf8_decode(std::string_view s);
void utf8_append(std::string& out, char32_t cp);

/// Replaces invalid UTF-8 sequences by interpreting stray bytes as Latin-1.
std::string repair_utf8(std::string_view s);

std::vector<std::string> split_ws(std::string_view s);

std::string hex_lower(const std::uint8_t* data, std::size_t n);

}  // namespace stmtcls
