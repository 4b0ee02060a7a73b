#pragma once

#include <cstdint>

namespace qcommit {

// Binary field GF(2^w) for w <= 16. Elements are w-bit integers; products use
// carry-less multiplication followed by reduction modulo a fixed irreducible
// polynomial per width, so keys evaluate identically across runs and
// platforms.
class GF2 {
 public:
  explicit GF2(int width);

  int width() const { return width_; }
  std::uint32_t order() const { return std::uint32_t{1} << width_; }
  std::uint32_t modulus() const { return poly_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;

  static std::uint32_t irreducible(int width);

 private:
  int width_;
  std::uint32_t poly_;
};

}  // namespace qcommit
