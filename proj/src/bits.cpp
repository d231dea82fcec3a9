#include "wom/bits.hpp"

#include <fstream>
#include <stdexcept>

namespace wom {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string format_bits(const BitVec& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

BitVec parse_bits(std::string_view text) {
  BitVec out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '0')
      out.push_back(0);
    else if (c == '1')
      out.push_back(1);
    else
      throw std::invalid_argument("bit sequence: unexpected character '" +
                                  std::string(1, c) + "'");
  }
  return out;
}

BitVec read_bits_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty bit-sequence file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  try {
    return parse_bits(line);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_bits_file(const std::filesystem::path& path, const BitVec& bits) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_bits(bits) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace wom
