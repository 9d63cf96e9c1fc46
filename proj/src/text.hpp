// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace subseg {

// Strict UTF-8 decoding. Rejects overlong forms, surrogates and values above
// U+10FFFF. On failure throws InputError naming base_offset plus the byte
// position of the offending sequence.
std::u32string decode_utf8(std::string_view text, uint64_t base_offset = 0);

std::string encode_utf8(std::u32string_view scalars);
void append_utf8(std::string& out, char32_t c);

// Number of Unicode scalar values in a string already known to be valid UTF-8.
size_t scalar_length(std::string_view utf8);

// Simple one-to-one case folding covering ASCII, Latin-1 and Latin Extended-A
// (enough for Czech and German). Always length-preserving in scalars.
char32_t fold_scalar(char32_t c);
std::string fold_utf8(std::string_view utf8);

// Splits a line on spaces/tabs, dropping empty fields.
std::vector<std::string_view> split_tokens(std::string_view line);
std::string join_tokens(const std::vector<std::string>& tokens);

bool ends_with(std::string_view s, std::string_view suffix);

// "%.<decimals>f" with the C locale.
std::string format_fixed(double value, int decimals);

}  // namespace subseg
