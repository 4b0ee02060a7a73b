#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcommit {

// Ordered list of named registers. Bit order is little-endian by declaration
// order: the first declared register occupies the least significant bits of a
// basis-state index. All public operations take layouts, never raw vectors.
class RegisterLayout {
 public:
  struct Entry {
    std::string name;
    int qubits;
  };

  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Entry> regs);

  static RegisterLayout single(std::string name, int qubits) {
    return RegisterLayout({{std::move(name), qubits}});
  }

  int total_qubits() const { return total_; }
  std::uint64_t dim() const { return std::uint64_t{1} << total_; }
  const std::vector<Entry>& entries() const { return regs_; }
  bool has(std::string_view name) const;
  int index_of(std::string_view name) const;  // throws if unknown
  int offset_of(std::string_view name) const; // bit offset
  int qubits_of(std::string_view name) const;

  // Layout concatenation (this first = low bits). Throws on name collision.
  RegisterLayout concat(const RegisterLayout& other) const;

  // Sub-layout holding the named registers in their original declaration
  // order. Throws on unknown names.
  RegisterLayout sublayout(std::span<const std::string> names) const;

  bool operator==(const RegisterLayout& o) const;

  // Extracts the value of one register from a full basis index.
  std::uint64_t extract(std::string_view name, std::uint64_t basis) const;

 private:
  std::vector<Entry> regs_;
  int total_ = 0;
};

// Index bookkeeping for operations acting on a register subset: maps a full
// basis index to (subset value, rest value) and back.
class SubsetIndexer {
 public:
  SubsetIndexer(const RegisterLayout& layout, std::span<const std::string> names);

  int subset_qubits() const { return subset_qubits_; }
  std::uint64_t subset_dim() const { return std::uint64_t{1} << subset_qubits_; }
  std::uint64_t rest_dim() const { return std::uint64_t{1} << rest_qubits_; }

  std::uint64_t subset_of(std::uint64_t full) const;
  std::uint64_t rest_of(std::uint64_t full) const;
  std::uint64_t fuse(std::uint64_t subset, std::uint64_t rest) const;

 private:
  // bit positions (ascending) of the subset within the full index
  std::vector<int> subset_bits_;
  std::vector<int> rest_bits_;
  int subset_qubits_ = 0;
  int rest_qubits_ = 0;
};

}  // namespace qcommit
