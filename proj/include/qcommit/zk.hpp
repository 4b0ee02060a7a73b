#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qcommit/commit.hpp"

namespace qcommit {

// Undirected graph on n <= 6 vertices, adjacency stored as the upper
// triangle in position order (0,1),(0,2),...,(n-2,n-1).
struct Graph {
  int n = 0;
  std::vector<std::uint8_t> bits;  // n(n-1)/2 entries

  static Graph complete(int n);
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int bit_count() const { return n * (n - 1) / 2; }
  int position(int i, int j) const;  // i != j
  bool edge(int i, int j) const;
  void check() const;
};

// Permutation image pi(G).
Graph permuted(const Graph& g, const std::vector<int>& pi);
bool is_permutation(const std::vector<int>& pi, int n);

// A Hamiltonian cycle as a vertex order; consecutive vertices (cyclically)
// must be edges of the graph it belongs to.
struct HamiltonianCycle {
  std::vector<int> order;

  bool valid_pattern(int n) const;  // visits every vertex exactly once
  bool valid_in(const Graph& g) const;
  std::vector<int> edge_positions(const Graph& g) const;  // bit positions of its edges
};

bool has_hamiltonian_cycle(const Graph& g);

// --- honest protocol ---

// Round-1 output: the permutation, the committed bit per position, and the
// per-position commitment states (per-bit factorized).
struct ProverCommitment {
  std::vector<int> perm;
  std::vector<int> bit_values;
  std::vector<PureState> states;  // on (X1..Xm, Y1..Ym) each
};

ProverCommitment prove_commit(const Graph& g, const HamiltonianCycle& h, const SchemeInstance& s,
                              std::mt19937_64& rng);
// Test hook with a forced permutation.
ProverCommitment prove_commit_with_perm(const Graph& g, const HamiltonianCycle& h,
                                        const SchemeInstance& s, std::vector<int> perm);

struct ZkTranscript {
  int challenge = 0;
  std::vector<int> perm;           // c=0
  std::vector<int> claimed_cycle;  // c=1 (vertex order)
  std::vector<int> positions;      // revealed positions
  std::vector<int> values;         // claimed bit per revealed position
  std::vector<PureState> states;   // revealed (C,R) state per position
};

ZkTranscript honest_transcript(const ProverCommitment& commitment, const Graph& g,
                               const HamiltonianCycle& h, int challenge);

// Exact acceptance probability: structural checks times the product of
// per-bit SWAP-test acceptance probabilities.
double verify(const ZkTranscript& t, const SchemeInstance& s, const Graph& g);

// Exact completeness over all permutations and both challenges.
double completeness(const Graph& g, const HamiltonianCycle& h, const SchemeInstance& s);

// --- soundness ---

// Cheating prover: per-bit strategies (product mode), optionally a joint
// strategy over a few positions (general mode). Empty claimed_perm or
// claimed_cycle means the prover aborts on that challenge.
struct ZkBitStrategy {
  PureState commit;  // on (X1..Xm, Y1..Ym)
  int claim0 = 0;    // value claimed in the c=0 branch
  Unitary reveal0, reveal1;
};

struct ZkProverStrategy {
  std::vector<int> claimed_perm;
  std::vector<int> claimed_cycle;
  std::vector<ZkBitStrategy> bits;

  // general mode: positions in joint_bits share one entangled commitment on
  // pairs (X1..XK, Y1..YK), K = m * joint_bits.size(); per-bit entries for
  // those positions are ignored
  std::vector<int> joint_bits;
  std::optional<PureState> joint_commit;
  std::optional<Unitary> joint_reveal0, joint_reveal1;
};

ZkProverStrategy honest_style_prover(const Graph& g, const std::vector<int>& perm,
                                     const SchemeInstance& s);
ZkProverStrategy fake_graph_prover(const Graph& fake, const HamiltonianCycle& fake_cycle,
                                   const SchemeInstance& s);

struct SoundnessCertificate {
  double acceptance = 0;        // (P0 + P1)/2
  double p_accept0 = 0, p_accept1 = 0;
  double ideal0 = 0, ideal1 = 0;
  double ideal_acceptance = 0;  // (ideal0 + ideal1)/2, provably <= 1/2
  double gap_sum = 0;           // hybrid replacement cost
  double bound = 0;             // 1/2 + gap_sum
  bool sound = false;
  std::vector<int> extracted_bits;  // argmax extractor outcome per position (2 = bot)
  std::vector<double> extracted_prob;
  bool extracted_graph_hamiltonian = false;
};

SoundnessCertificate soundness_experiment(const ZkProverStrategy& prover, const Graph& g,
                                          const SchemeInstance& s, double tolerance);

// --- zero-knowledge simulator ---

// Measurable-challenge verifier: either a fixed challenge distribution or a
// projective measurement {I-P1, P1} on the C registers of one commitment
// position.
struct VerifierModel {
  double p1 = 0.5;
  std::optional<Mat> measure_p1;  // on m*n_out qubits
  int measured_bit = 0;
};

struct SimulatorReport {
  double halt_probability = 0;  // per loop, exact
  double fail_probability = 0;  // (1 - halt)^loops
  double real_sim_td = 0;       // includes the fail block
  double hiding_term = 0;       // exact TD between the averaged measured-bit views
  double per_bit_td_sum = 0;    // coarse hybrid bound: unrevealed-bit count times TD(xi0^m, xi1^m)
  int loops = 0;
};

SimulatorReport simulate(const Graph& g, const HamiltonianCycle& h, const SchemeInstance& s,
                         const VerifierModel& v, int loops = 20);

// Witness-indistinguishability probe: exact TD between uniform-challenge
// verifier views under two witnesses, plus the hybrid bound it must satisfy.
struct WitnessProbe {
  double view_td = 0;
  double bound = 0;  // unrevealed-bit count times TD(xi0^m, xi1^m)
};
WitnessProbe witness_view_td(const Graph& g, const HamiltonianCycle& h0,
                             const HamiltonianCycle& h1, const SchemeInstance& s);

}  // namespace qcommit
