#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcommit/states.hpp"

namespace qcommit {

// Thrown when a computation would exceed the configured simulation caps.
struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_state_cap(int qubits);
void require_dense_cap(int qubits);

namespace qla {

// Kronecker combination; `a` keeps the low bits per the little-endian
// declaration-order convention. Register names must be disjoint.
PureState tensor(const PureState& a, const PureState& b);
DensityOp tensor(const DensityOp& a, const DensityOp& b);

DensityOp partial_trace(const DensityOp& op, std::span<const std::string> keep);
DensityOp partial_trace(const PureState& psi, std::span<const std::string> keep);

// Uhlmann fidelity F(ρ,σ) = (Tr√(√σ ρ √σ))².
double fidelity(const DensityOp& rho, const DensityOp& sigma);
double fidelity(const PureState& a, const PureState& b);

// TD = half the trace norm of the difference; subnormalized inputs allowed.
double trace_distance(const DensityOp& rho, const DensityOp& sigma);
double trace_distance(const PureState& a, const PureState& b);

// Purification on (original registers ⊕ fresh register `purifier_name`).
PureState purify(const DensityOp& rho, const std::string& purifier_name = "P");

// The unitary on `act_on` maximizing |⟨ψ1|(I⊗U)|ψ0⟩|. Built from the SVD of
// the cross contraction of |ψ0⟩⟨ψ1| onto act_on; the achieved overlap equals
// the sum of singular values and its square equals the fidelity of the
// reduced states on the complement registers.
struct UhlmannResult {
  Unitary unitary;
  double achieved_overlap;  // |⟨ψ1|(I⊗U)|ψ0⟩|
};
UhlmannResult uhlmann_unitary(const PureState& psi0, const PureState& psi1,
                              std::span<const std::string> act_on);

// Π0/Π1 = projectors onto the positive/negative eigenspaces of ξ0−ξ1,
// Π⊥ = kernel projector. Guarantees Tr(Πb ξb) ≥ 1−√(2F(ξ0,ξ1)).
ThreeOutcomeMeasurement helstrom_three_outcome(const DensityOp& xi0, const DensityOp& xi1);

PureState apply(const Unitary& u, const PureState& s);

struct MeasureResult {
  double probability;
  PureState branch;  // subnormalized post-measurement state
};
MeasureResult measure_prob(const Projector& p, const PureState& s);

struct MeasureResultDensity {
  double probability;
  DensityOp branch;
};
MeasureResultDensity measure_prob(const Projector& p, const DensityOp& s);

// --- shared numeric kernels ---

// Eigendecomposition-based PSD square root; eigenvalues clamped at the
// configured floor before sqrt.
Mat psd_sqrt(const Mat& m);

// Half the sum of |eigenvalues| of a Hermitian matrix.
double half_trace_norm_hermitian(const Mat& m);

// Embeds an operator on a register subset into the full layout (I elsewhere)
// and applies it to an amplitude vector.
Vec apply_on_subset(const Mat& op, const Vec& amps, const RegisterLayout& layout,
                    std::span<const std::string> acts_on);

// Full-space matrix of an operator declared on a subset.
Mat embed(const Mat& op, const RegisterLayout& layout, std::span<const std::string> acts_on);

}  // namespace qla
}  // namespace qcommit
