#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qcommit/gf2.hpp"

namespace qcommit {

// Explicit table {0,1}^lambda_in -> {0,1}^n_out.
struct FunctionTable {
  int lambda_in = 0;
  int n_out = 0;
  std::vector<std::uint32_t> table;  // length 2^lambda_in

  std::uint32_t eval(std::uint32_t x) const { return table.at(x); }
};

// Coefficient vector of a degree-(k-1) polynomial over GF(2^w).
struct HashKey {
  std::vector<std::uint32_t> coeffs;
};

// k-wise independent family {0,1}^lambda_in -> {0,1}^n_out realized as
// degree-(k-1) polynomials over GF(2^w), w = max(lambda_in, n_out), with the
// output truncated to the low n_out bits. For any k distinct inputs the joint
// output over a uniform key is exactly uniform.
class KWiseFamily {
 public:
  KWiseFamily(int lambda_in, int n_out, int k);

  int lambda_in() const { return lambda_in_; }
  int n_out() const { return n_out_; }
  int k() const { return k_; }
  int field_width() const { return field_.width(); }
  const GF2& field() const { return field_; }

  // 2^{w·k} when it fits in 64 bits.
  std::optional<std::uint64_t> key_count() const;

  HashKey key_from_index(std::uint64_t index) const;  // exhaustive iteration order
  HashKey key_random(std::mt19937_64& rng) const;

  std::uint32_t eval(const HashKey& key, std::uint32_t x) const;
  FunctionTable materialize(const HashKey& key) const;

  std::string key_hex(const HashKey& key) const;
  HashKey key_from_hex(const std::string& hex) const;

 private:
  int lambda_in_, n_out_, k_;
  GF2 field_;
};

// Exact k-wise uniformity check by exhaustive counting: for every k-subset of
// distinct inputs, every joint output tuple must occur the same number of
// times over all keys.
struct KWiseReport {
  bool pass = true;
  std::uint64_t keys_checked = 0;
  std::uint64_t subsets_checked = 0;
  // populated on failure
  std::vector<std::uint32_t> violating_inputs;
  std::string detail;
};

KWiseReport verify_kwise(const KWiseFamily& family);

// Generic form used for negative controls and exotic families: evaluates
// `eval(key_index, x)` over key_index in [0, key_count).
KWiseReport verify_kwise(int lambda_in, int n_out, int k, std::uint64_t key_count,
                         const std::function<std::uint32_t(std::uint64_t, std::uint32_t)>& eval);

// Visits every FunctionTable {0,1}^lambda_in -> {0,1}^n_out exactly once.
// Throws cap_exceeded when (2^n_out)^(2^lambda_in) exceeds the budget.
std::uint64_t function_space_size(int lambda_in, int n_out);  // checked
void enumerate_functions(int lambda_in, int n_out,
                         const std::function<void(const FunctionTable&)>& visit);

}  // namespace qcommit
