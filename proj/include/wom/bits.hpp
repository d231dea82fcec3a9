#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wom {

// Bit sequences (memory states y, codewords x, transformed words u) are kept
// one bit per byte, index 0 first.
using BitVec = std::vector<std::uint8_t>;

bool is_power_of_two(std::size_t n);

std::string format_bits(const BitVec& bits);
BitVec parse_bits(std::string_view text);  // throws std::invalid_argument

// File format: a single line of ASCII '0'/'1' characters, index 0 first,
// newline-terminated.
BitVec read_bits_file(const std::filesystem::path& path);
void write_bits_file(const std::filesystem::path& path, const BitVec& bits);

}  // namespace wom
