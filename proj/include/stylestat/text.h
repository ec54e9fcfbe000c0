#ifndef STYLESTAT_TEXT_H_
#define STYLESTAT_TEXT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stylestat {

// Returns the byte offset of the first invalid UTF-8 sequence, or nullopt if
// the text is well formed. Overlong encodings and surrogates are invalid.
std::optional<std::size_t> FindInvalidUtf8(std::string_view text);

// Decodes well-formed UTF-8. Behaviour on invalid input is unspecified; call
// FindInvalidUtf8 first.
std::vector<char32_t> DecodeUtf8(std::string_view text);
void AppendUtf8(char32_t cp, std::string *out);

std::size_t CodepointCount(std::string_view text);

// ASCII punctuation/symbols plus the common Unicode punctuation blocks
// (Latin-1 marks, General Punctuation, CJK punctuation).
bool IsPunctCodepoint(char32_t cp);

// True iff text is non-empty and every code point is punctuation.
bool IsPunctuation(std::string_view text);

bool HasAlphabetic(std::string_view text);

// Lowercases ASCII and the Latin-1 / Latin Extended-A letters. Other scripts
// pass through unchanged.
std::string ToLower(std::string_view text);

// Splits on ASCII whitespace; no empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view text);

}  // namespace stylestat

#endif  // STYLESTAT_TEXT_H_
