#pragma once

#include <optional>
#include <vector>

#include "qcommit/commit.hpp"
#include "qcommit/qla.hpp"

namespace qcommit {

// Canonical-form commitment in the classical CRS model: a key distribution
// and per-key committed pure states on (C, R). The receiver accepts b by
// projecting onto |Psi_{k,b}>.
struct CrsScheme {
  std::vector<double> key_prob;
  std::vector<PureState> psi0, psi1;  // indexed by key, shared layout with "C" and "R"

  void check() const;
};

// Commitment in the correlated randomness model: a joint distribution over
// (x, y), committer states per x, and receiver verification POVM elements
// per (y, b) on (C, R).
struct CorrelatedScheme {
  std::vector<std::vector<double>> joint;  // joint[x][y]
  std::vector<PureState> psi0, psi1;       // per x
  std::vector<Mat> lambda0, lambda1;       // per y, 0 <= Lambda <= I

  std::size_t nx() const { return joint.size(); }
  std::size_t ny() const { return joint.empty() ? 0 : joint[0].size(); }
  void check() const;
};

namespace attacks {

// Optimal hiding distinguisher: measure the key, then the per-key Helstrom
// measurement. Advantage = sum_k p_k TD(rho_{k,0}, rho_{k,1}).
struct CrsHidingResult {
  double advantage = 0;
  std::vector<double> per_key_td;
};
CrsHidingResult crs_hiding_attack(const CrsScheme& s);

// Honest 0-commit followed by the per-key Uhlmann rotation on R.
// p1 = sum_k p_k F(rho_{k,0}, rho_{k,1}), realized by explicit unitaries.
struct CrsBindingResult {
  double p1 = 0;
  std::vector<double> per_key_fidelity;
  std::vector<double> per_key_achieved;  // |<Psi_{k,1}|(I x U^k)|Psi_{k,0}>|^2
};
CrsBindingResult crs_binding_attack(const CrsScheme& s);

// Both attacks plus the tradeoff: binding success >= 1 - hiding advantage.
// The residual (how much slack the inequality has) is reported; it can be
// negative for adversarially chosen state pairs since 1-F <= TD is not an
// identity for all pairs.
struct CrsTradeoffResult {
  double hiding_advantage = 0;
  double binding_success = 0;
  double residual = 0;  // binding_success - (1 - hiding_advantage)
  bool holds = false;
};
CrsTradeoffResult crs_tradeoff(const CrsScheme& s);

// epsilon-correlation: optimal guess map A(y) = argmax_x p(x, y), ties to the
// smallest x; epsilon = sum_y max_x p(x, y).
struct CorrelationResult {
  double epsilon = 0;
  std::vector<std::size_t> guess;  // per y
};
CorrelationResult epsilon_correlation(const std::vector<std::vector<double>>& joint);

// Attack against a correlated-randomness scheme whose setup distribution is
// close to a product: commit |Phi_0> = sum_x sqrt(e_x)|x>|Psi_{x,0}>, reveal 1
// through the Uhlmann unitary on (A, R). E and F are the marginals of D;
// eps_product is an upper bound on the distance to the best product
// distribution.
struct CorrelatedAttackResult {
  double eps_product = 0;  // || D - marg x marg ||_1
  double p0 = 0, p1 = 0;
  double hiding_advantage = 0;  // optimal distinguisher on the averaged commitments
  double bound_p0 = 0;          // 1 - 2 eps
  double bound_p1 = 0;          // 1 - sqrt(2 eps - eps^2) - 2 eps
  bool pass_p0 = false, pass_p1 = false;
};
CorrelatedAttackResult correlated_attack(const CorrelatedScheme& s, double tolerance);

// (5 - 2 sqrt 2) / 17, the product-distance threshold below which the attack
// breaks statistical sum-binding.
double correlated_threshold();

// Unbounded-copy attack in the CRQS model: identify the key class by exact
// overlaps (the desk-scale stand-in for shadow tomography), then run the
// committer attack with the identified key's Uhlmann unitary and the hiding
// attack with its Helstrom measurement.
struct UnboundedCopyResult {
  double key_identification = 0;  // fraction of keys whose class is found exactly
  double avg_td = 0;              // avg_k TD(sigma^{0,k}, sigma^{1,k})
  double p0 = 0, p1 = 0;          // sum-binding attack, averaged over true keys
  double hiding_advantage = 0;    // achieved by the identified-key measurement
  bool binding_broken = false;    // p0 + p1 > 1 + slack when avg_td below threshold
  bool hiding_attacked = false;   // hiding_advantage >= avg_td - slack otherwise
};
UnboundedCopyResult unbounded_copy_attack(const SchemeParams& p, double td_threshold = 0.5,
                                          double slack = 1e-6);

}  // namespace attacks
}  // namespace qcommit
