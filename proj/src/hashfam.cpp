#include "qcommit/hashfam.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qcommit/qla.hpp"
#include "qcommit/tolerances.hpp"

namespace qcommit {

KWiseFamily::KWiseFamily(int lambda_in, int n_out, int k)
    : lambda_in_(lambda_in), n_out_(n_out), k_(k), field_(std::max(lambda_in, n_out)) {
  if (lambda_in < 1 || n_out < 1 || k < 1) throw std::invalid_argument("family parameters must be positive");
}

std::optional<std::uint64_t> KWiseFamily::key_count() const {
  const int bits = field_.width() * k_;
  if (bits >= 64) return std::nullopt;
  return std::uint64_t{1} << bits;
}

HashKey KWiseFamily::key_from_index(std::uint64_t index) const {
  HashKey key;
  key.coeffs.resize(static_cast<std::size_t>(k_));
  const std::uint64_t mask = (std::uint64_t{1} << field_.width()) - 1;
  for (int i = 0; i < k_; ++i) {
    key.coeffs[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(index & mask);
    index >>= field_.width();
  }
  if (index != 0) throw std::invalid_argument("key index out of range");
  return key;
}

HashKey KWiseFamily::key_random(std::mt19937_64& rng) const {
  HashKey key;
  key.coeffs.resize(static_cast<std::size_t>(k_));
  const std::uint64_t mask = (std::uint64_t{1} << field_.width()) - 1;
  for (auto& c : key.coeffs) c = static_cast<std::uint32_t>(rng() & mask);
  return key;
}

std::uint32_t KWiseFamily::eval(const HashKey& key, std::uint32_t x) const {
  if (x >> lambda_in_) throw std::invalid_argument("input exceeds lambda_in bits");
  if (key.coeffs.size() != static_cast<std::size_t>(k_))
    throw std::invalid_argument("key length does not match family degree");
  // Horner evaluation of sum_i c_i x^i at the zero-padded field embedding
  std::uint32_t acc = 0;
  for (int i = k_ - 1; i >= 0; --i) acc = field_.add(field_.mul(acc, x), key.coeffs[static_cast<std::size_t>(i)]);
  return acc & ((std::uint32_t{1} << n_out_) - 1);
}

FunctionTable KWiseFamily::materialize(const HashKey& key) const {
  FunctionTable t;
  t.lambda_in = lambda_in_;
  t.n_out = n_out_;
  t.table.resize(std::size_t{1} << lambda_in_);
  for (std::uint32_t x = 0; x < t.table.size(); ++x) t.table[x] = eval(key, x);
  return t;
}

std::string KWiseFamily::key_hex(const HashKey& key) const {
  std::ostringstream os;
  os << std::hex;
  for (std::size_t i = 0; i < key.coeffs.size(); ++i) {
    if (i) os << ":";
    os << key.coeffs[i];
  }
  return os.str();
}

HashKey KWiseFamily::key_from_hex(const std::string& hex) const {
  HashKey key;
  std::istringstream is(hex);
  std::string part;
  while (std::getline(is, part, ':')) key.coeffs.push_back(static_cast<std::uint32_t>(std::stoul(part, nullptr, 16)));
  if (key.coeffs.size() != static_cast<std::size_t>(k_))
    throw std::invalid_argument("key hex has wrong coefficient count");
  return key;
}

namespace {

// next k-subset of {0..n-1} in lexicographic order
bool next_subset(std::vector<std::uint32_t>& s, std::uint32_t n) {
  const int k = static_cast<int>(s.size());
  int i = k - 1;
  while (i >= 0 && s[static_cast<std::size_t>(i)] == n - static_cast<std::uint32_t>(k - i)) --i;
  if (i < 0) return false;
  ++s[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace

KWiseReport verify_kwise(int lambda_in, int n_out, int k, std::uint64_t key_count,
                         const std::function<std::uint32_t(std::uint64_t, std::uint32_t)>& eval) {
  if (key_count > caps().enum_budget)
    throw cap_exceeded("exhaustive k-wise verification over " + std::to_string(key_count) +
                       " keys exceeds the budget");
  const std::uint32_t inputs = std::uint32_t{1} << lambda_in;
  if (k > static_cast<int>(inputs)) throw std::invalid_argument("independence degree exceeds the input count");
  const int tuple_bits = n_out * k;
  if (tuple_bits > 30) throw cap_exceeded("joint output space too large for exact counting");

  KWiseReport report;
  report.keys_checked = key_count;
  std::vector<std::uint32_t> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
  std::vector<std::uint64_t> counts(std::size_t{1} << tuple_bits);
  do {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t key = 0; key < key_count; ++key) {
      std::uint64_t tuple = 0;
      for (int i = 0; i < k; ++i)
        tuple |= std::uint64_t{eval(key, subset[static_cast<std::size_t>(i)])} << (n_out * i);
      ++counts[tuple];
    }
    ++report.subsets_checked;
    const std::uint64_t expected = key_count >> tuple_bits;
    if ((key_count & ((std::uint64_t{1} << tuple_bits) - 1)) != 0 ||
        std::any_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c != expected; })) {
      report.pass = false;
      report.violating_inputs = subset;
      report.detail = "joint output counts over the key space are not uniform";
      return report;
    }
  } while (next_subset(subset, inputs));
  return report;
}

KWiseReport verify_kwise(const KWiseFamily& family) {
  auto count = family.key_count();
  if (!count) throw cap_exceeded("key space does not fit in 64 bits");
  return verify_kwise(family.lambda_in(), family.n_out(), family.k(), *count,
                      [&](std::uint64_t key_index, std::uint32_t x) {
                        return family.eval(family.key_from_index(key_index), x);
                      });
}

std::uint64_t function_space_size(int lambda_in, int n_out) {
  const std::uint64_t domain = std::uint64_t{1} << lambda_in;
  const std::uint64_t bits = static_cast<std::uint64_t>(n_out) * domain;
  if (bits > 62 || (std::uint64_t{1} << bits) > caps().enum_budget)
    throw cap_exceeded("function space exceeds the enumeration budget");
  return std::uint64_t{1} << bits;
}

void enumerate_functions(int lambda_in, int n_out,
                         const std::function<void(const FunctionTable&)>& visit) {
  const std::uint64_t total = function_space_size(lambda_in, n_out);
  const std::uint32_t domain = std::uint32_t{1} << lambda_in;
  const std::uint32_t mask = (std::uint32_t{1} << n_out) - 1;
  FunctionTable t;
  t.lambda_in = lambda_in;
  t.n_out = n_out;
  t.table.resize(domain);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::uint32_t x = 0; x < domain; ++x) {
      t.table[x] = static_cast<std::uint32_t>(c & mask);
      c >>= n_out;
    }
    visit(t);
  }
}

}  // namespace qcommit
