#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qcommit/efi.hpp"
#include "qcommit/hashfam.hpp"
#include "qcommit/qla.hpp"

namespace qcommit {

// Protocol dimensions. The hash-family independence degree is always derived
// as 2m(t+1) unless explicitly overridden.
struct SchemeParams {
  int lambda = 1;
  int n_out = 2;
  int m = 1;
  int t = 0;
  std::optional<int> k_override;

  int k() const { return k_override.value_or(2 * m * (t + 1)); }
  KWiseFamily family() const { return KWiseFamily(lambda, n_out, k()); }
  void check() const;
};

// A scheme instance pins the per-copy protocol states. CRQS mode derives them
// from a hash key; auxiliary-input mode accepts an arbitrary purified pair on
// registers (X, Y). Everything downstream (verification, extractor,
// experiments) only sees this.
struct SchemeInstance {
  PureState psi0, psi1;  // per-copy states on registers ("X", "Y")
  int m = 1;
  DensityOp xi0, xi1;    // reductions on X
  ThreeOutcomeMeasurement copy_extractor;  // Helstrom projectors on X
  double epsilon = 0;    // fidelity(xi0, xi1)

  const PureState& psi(int b) const { return b ? psi1 : psi0; }
};

SchemeInstance make_instance(PureState psi0, PureState psi1, int m);
SchemeInstance crqs_instance(const SchemeParams& p, const HashKey& key);
SchemeInstance crqs_instance(const SchemeParams& p, const FunctionTable& table);

// Keyless mode per the auxiliary-input protocol; identical machinery.
inline SchemeInstance aux_input_mode(PureState psi0, PureState psi1, int m) {
  return make_instance(std::move(psi0), std::move(psi1), m);
}

// CRQS copies as handed out by the setup: a key (absent for the truly-random
// table mode), the per-copy states, and how many copies remain.
struct CrqsDescription {
  std::optional<HashKey> key;
  SchemeInstance scheme;
  int copies_remaining = 2;
};

CrqsDescription make_crqs(const SchemeParams& p, const HashKey& key, int copies = 2);

// Register names of the i-th commitment copy (1-based): ("X<i>", "Y<i>").
std::string commit_reg(int i);
std::string reveal_reg(int i);

// Honest commit phase: consumes one CRQS copy and produces psi_b^{(x)m} on
// (X1..Xm, Y1..Ym). The committer holds both halves until reveal.
PureState honest_commit(CrqsDescription& crqs, int b);
PureState honest_commit_state(const SchemeInstance& s, int b);

// Parallel SWAP-test acceptance probability, closed form
// (1/2^m) sum_{S subset [m]} Tr[rho_S sigma_S], for a (possibly
// subnormalized) committer-side pure state chi whose layout contains the
// pairs (X_i, Y_i) and arbitrary extra registers.
double verify_prob(const PureState& chi, int b, const SchemeInstance& s);

// Data-driven malicious committer: an initial joint pure state on
// (X1..Xm, Y1..Ym[, W]), the announced bit, and the reveal unitary applied to
// (Y1..Ym[, W]) before the receiver verifies.
struct CommitterStrategy {
  PureState initial;
  int announced_bit = 0;
  Unitary reveal;
};

CommitterStrategy honest_strategy(const SchemeInstance& s, int b);

// Honest commit to `commit_bit` with the Uhlmann rotation toward
// psi_{reveal_bit}^{(x)m} on the reveal registers.
CommitterStrategy uhlmann_strategy(const SchemeInstance& s, int commit_bit, int reveal_bit);

// Classical outcome with probability plus the subnormalized residual on W.
struct ExperimentOutput {
  static constexpr int kBot = 2;
  static constexpr int kFail = 3;
  std::array<double, 4> prob{};      // outcome 0, 1, bot, fail
  std::array<DensityOp, 4> residual; // on W (zero-qubit layout when absent)

  void check() const;
};

// Strict >2m/3 majority on per-copy outcomes (0, 1, 2 = bot); ties go to bot.
int majority_classify(const std::vector<int>& outcomes, int m);

// The extractor: Helstrom three-outcome measurement on each X_i, coarse
// grained by the majority rule. Branches are subnormalized post-measurement
// states, one per per-copy outcome pattern.
struct ExtractorResult {
  std::array<double, 3> prob{};  // b* = 0, 1, bot
  std::vector<PureState> branches;
  std::vector<int> branch_class;
};
ExtractorResult run_extractor(const PureState& commitment, const SchemeInstance& s);

ExperimentOutput real_experiment(const CommitterStrategy& c, const SchemeInstance& s);
ExperimentOutput ideal_experiment(const CommitterStrategy& c, const SchemeInstance& s);

struct BindingReport {
  ExperimentOutput real, ideal;
  double gap = 0;        // blockwise TD of the two output operators
  double fail_mass = 0;
  double epsilon = 0;    // fidelity(xi0, xi1)
  double bound = 0;      // 2^{-m/3} + 2 epsilon
};

BindingReport binding_report(const CommitterStrategy& c, const SchemeInstance& s);
double binding_gap(const CommitterStrategy& c, const SchemeInstance& s);

// TD between the key-averaged real and ideal output operators, exhaustive
// over the family's key space. The strategy is reused for every key.
struct AveragedBindingReport {
  double gap = 0;
  double fail_mass = 0;
  double epsilon_avg = 0;
  double epsilon_max = 0;
  double bound_avg = 0;  // 2^{-m/3} + 2 epsilon_avg
};
AveragedBindingReport binding_gap_averaged(
    const std::function<CommitterStrategy(const SchemeInstance&)>& make_strategy,
    const SchemeParams& p);

// p_b from real_experiment for a strategy pair sharing the commit phase.
struct SumBindingProbe {
  double p0 = 0, p1 = 0;
  double gap0 = 0, gap1 = 0;  // per-strategy binding gaps
};
SumBindingProbe sum_binding_probe(const CommitterStrategy& c0, const CommitterStrategy& c1,
                                  const SchemeInstance& s);

// --- hiding ---

enum class Averaging { family, all_functions };

// E_key[ psi_k^{(x)t} (x) Tr_R(commitment_b) ], materialized dense.
DensityOp hiding_view(const SchemeParams& p, int b, Averaging avg);

// TD(view_0, view_1) computed exactly on a reduced but TD-preserving
// representation (key-independent pure factors dropped, Y registers
// restricted to the padded-image subspace).
double hiding_advantage(const SchemeParams& p, Averaging avg);

// Monte-Carlo estimate over sampled keys for points beyond the enumeration
// caps; reproducible per seed, never used by acceptance checks.
double hiding_advantage_sampled(const SchemeParams& p, int trials, std::uint64_t seed);

// Family-averaged view vs all-functions-averaged view. td_upper is a
// rigorous upper bound (Frobenius certificate); exact_td is filled when the
// certificate alone cannot settle pass/fail.
struct ZhandryReport {
  double td_upper = 0;
  std::optional<double> exact_td;
  bool pass = false;
  std::uint64_t family_keys = 0;
  std::uint64_t tables = 0;
};
ZhandryReport zhandry_check(const SchemeParams& p, int b, double tolerance);

// Reference number from the non-uniform PRG corollary, 16 sqrt2 (S/N)^{1/3};
// vacuous (> 1) at desk scale, reported alongside measured values only.
double prg_reference_bound(const SchemeParams& p);

// Visits each distinct materialized table of the family once, with its exact
// key-space weight. Keys sharing a table share every protocol quantity, and
// for k >= 2^lambda polynomial interpolation makes the family uniform over
// the whole function space, so per-key universal statements reduce to
// per-class statements.
void for_each_table_class(const SchemeParams& p,
                          const std::function<void(const FunctionTable&, double weight)>& visit);

}  // namespace qcommit
