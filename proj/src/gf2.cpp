#include "qcommit/gf2.hpp"

#include <stdexcept>

namespace qcommit {

namespace {
// Lowest-weight irreducible polynomial per degree, x^w term included.
constexpr std::uint32_t kIrreducible[17] = {
    0,     0x3,   0x7,   0xB,    0x13,   0x25,   0x43,   0x83,    0x11B,
    0x203, 0x409, 0x805, 0x1009, 0x201B, 0x4021, 0x8003, 0x1002B};
}  // namespace

std::uint32_t GF2::irreducible(int width) {
  if (width < 1 || width > 16) throw std::invalid_argument("GF(2^w) supported for 1 <= w <= 16");
  return kIrreducible[width];
}

GF2::GF2(int width) : width_(width), poly_(irreducible(width)) {}

std::uint32_t GF2::mul(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t prod = 0;
  while (b) {
    if (b & 1u) prod ^= a;
    b >>= 1;
    a <<= 1;
  }
  // reduce the up-to-(2w-2)-degree product
  for (int bit = 2 * width_ - 2; bit >= width_; --bit)
    if (prod & (std::uint32_t{1} << bit)) prod ^= poly_ << (bit - width_);
  return prod;
}

}  // namespace qcommit
