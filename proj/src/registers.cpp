#include "qcommit/registers.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <unordered_set>

#include "qcommit/tolerances.hpp"

namespace qcommit {

namespace {
int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  return v ? std::atoi(v) : fallback;
}
std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  return v ? std::strtoull(v, nullptr, 10) : fallback;
}
}  // namespace

const Caps& caps() {
  static Caps c = [] {
    Caps c;
    c.state_qubits = env_int("QCOMMIT_MAX_STATE_QUBITS", c.state_qubits);
    c.dense_qubits = env_int("QCOMMIT_MAX_DENSE_QUBITS", c.dense_qubits);
    c.enum_budget = env_u64("QCOMMIT_MAX_ENUM", c.enum_budget);
    return c;
  }();
  return c;
}

RegisterLayout::RegisterLayout(std::vector<Entry> regs) : regs_(std::move(regs)) {
  std::unordered_set<std::string> seen;
  for (const auto& r : regs_) {
    if (r.qubits < 1) throw std::invalid_argument("register '" + r.name + "' must hold at least one qubit");
    if (!seen.insert(r.name).second) throw std::invalid_argument("duplicate register name '" + r.name + "'");
    total_ += r.qubits;
  }
}

bool RegisterLayout::has(std::string_view name) const {
  return std::any_of(regs_.begin(), regs_.end(), [&](const Entry& e) { return e.name == name; });
}

int RegisterLayout::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < regs_.size(); ++i)
    if (regs_[i].name == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown register '" + std::string(name) + "'");
}

int RegisterLayout::offset_of(std::string_view name) const {
  int off = 0;
  for (const auto& r : regs_) {
    if (r.name == name) return off;
    off += r.qubits;
  }
  throw std::invalid_argument("unknown register '" + std::string(name) + "'");
}

int RegisterLayout::qubits_of(std::string_view name) const {
  return regs_[static_cast<std::size_t>(index_of(name))].qubits;
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other) const {
  std::vector<Entry> merged = regs_;
  merged.insert(merged.end(), other.regs_.begin(), other.regs_.end());
  return RegisterLayout(std::move(merged));  // ctor re-checks collisions
}

RegisterLayout RegisterLayout::sublayout(std::span<const std::string> names) const {
  std::unordered_set<std::string_view> wanted(names.begin(), names.end());
  if (wanted.size() != names.size()) throw std::invalid_argument("repeated register name in subset");
  std::vector<Entry> out;
  for (const auto& r : regs_)
    if (wanted.count(r.name)) {
      out.push_back(r);
      wanted.erase(r.name);
    }
  if (!wanted.empty()) throw std::invalid_argument("unknown register '" + std::string(*wanted.begin()) + "'");
  return RegisterLayout(std::move(out));
}

bool RegisterLayout::operator==(const RegisterLayout& o) const {
  if (regs_.size() != o.regs_.size()) return false;
  for (std::size_t i = 0; i < regs_.size(); ++i)
    if (regs_[i].name != o.regs_[i].name || regs_[i].qubits != o.regs_[i].qubits) return false;
  return true;
}

std::uint64_t RegisterLayout::extract(std::string_view name, std::uint64_t basis) const {
  const int off = offset_of(name);
  const int q = qubits_of(name);
  return (basis >> off) & ((std::uint64_t{1} << q) - 1);
}

SubsetIndexer::SubsetIndexer(const RegisterLayout& layout, std::span<const std::string> names) {
  std::unordered_set<std::string_view> wanted(names.begin(), names.end());
  if (wanted.size() != names.size()) throw std::invalid_argument("repeated register name in subset");
  int off = 0;
  for (const auto& r : layout.entries()) {
    const bool in = wanted.count(r.name) > 0;
    for (int b = 0; b < r.qubits; ++b) (in ? subset_bits_ : rest_bits_).push_back(off + b);
    if (in) wanted.erase(r.name);
    off += r.qubits;
  }
  if (!wanted.empty()) throw std::invalid_argument("unknown register '" + std::string(*wanted.begin()) + "'");
  subset_qubits_ = static_cast<int>(subset_bits_.size());
  rest_qubits_ = static_cast<int>(rest_bits_.size());
}

std::uint64_t SubsetIndexer::subset_of(std::uint64_t full) const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < subset_bits_.size(); ++i) v |= ((full >> subset_bits_[i]) & 1u) << i;
  return v;
}

std::uint64_t SubsetIndexer::rest_of(std::uint64_t full) const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < rest_bits_.size(); ++i) v |= ((full >> rest_bits_[i]) & 1u) << i;
  return v;
}

std::uint64_t SubsetIndexer::fuse(std::uint64_t subset, std::uint64_t rest) const {
  std::uint64_t full = 0;
  for (std::size_t i = 0; i < subset_bits_.size(); ++i) full |= ((subset >> i) & 1u) << subset_bits_[i];
  for (std::size_t i = 0; i < rest_bits_.size(); ++i) full |= ((rest >> i) & 1u) << rest_bits_[i];
  return full;
}

}  // namespace qcommit
