#pragma once

#include <cstdint>

namespace qcommit {

// Central tolerance record. Structural checks (hermiticity, norms,
// idempotence) use `structural`; end-to-end probabilities use `probability`.
// Eigenvalues above -psd_clamp are treated as nonnegative before sqrt;
// eigenvalues within kernel_cut of zero belong to the kernel projector.
struct Tolerances {
  double structural = 1e-9;
  double probability = 1e-7;
  double psd_clamp = 1e-12;
  double kernel_cut = 1e-12;
};

inline const Tolerances& tol() {
  static Tolerances t;
  return t;
}

// Simulation caps. Overridable through the environment:
//   QCOMMIT_MAX_STATE_QUBITS, QCOMMIT_MAX_DENSE_QUBITS, QCOMMIT_MAX_ENUM
struct Caps {
  int state_qubits = 22;       // pure-state vectors
  int dense_qubits = 16;       // dense density operators
  std::uint64_t enum_budget = std::uint64_t{1} << 24;  // keys / tables
};

const Caps& caps();

}  // namespace qcommit
