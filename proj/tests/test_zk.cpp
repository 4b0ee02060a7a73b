#include "qcommit/zk.hpp"

#include <cmath>

#include "doctest.h"
#include "test_support.hpp"

using namespace qcommit;
namespace qt = qcommit::testing;

namespace {

SchemeInstance small_scheme(int m = 1, std::uint64_t key_index = 6) {
  SchemeParams p{1, 2, m, 0, std::nullopt};
  return crqs_instance(p, p.family().key_from_index(key_index));
}

const Graph kK3 = Graph::complete(3);
const Graph kK4 = Graph::complete(4);
// star on 4 vertices: connected but no Hamiltonian cycle
const Graph kStar4 = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});

HamiltonianCycle cycle_of(std::vector<int> order) { return HamiltonianCycle{std::move(order)}; }

}  // namespace

TEST_CASE("graph: positions, permutation, and hamiltonicity") {
  CHECK(kK4.bit_count() == 6);
  CHECK(kK4.position(0, 1) == 0);
  CHECK(kK4.position(2, 3) == 5);
  CHECK(kK4.position(3, 2) == 5);
  CHECK(has_hamiltonian_cycle(kK4));
  CHECK(!has_hamiltonian_cycle(kStar4));
  CHECK(cycle_of({0, 1, 2, 3}).valid_in(kK4));
  CHECK(!cycle_of({0, 1, 2}).valid_pattern(4));
  CHECK(!cycle_of({0, 1, 1, 2}).valid_pattern(4));
  Graph path = Graph::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(!cycle_of({0, 1, 2}).valid_in(path));

  std::vector<int> pi{1, 2, 0};
  Graph image = permuted(path, pi);
  CHECK(image.edge(1, 2));
  CHECK(image.edge(2, 0));
  CHECK(!image.edge(0, 1));
}

TEST_CASE("prove_commit: commitment count and forced identity permutation") {
  SchemeInstance s = small_scheme();
  auto c = prove_commit_with_perm(kK3, cycle_of({0, 1, 2}), s, {0, 1, 2});
  CHECK(c.states.size() == 3);
  for (int p = 0; p < 3; ++p)
    CHECK(c.bit_values[static_cast<std::size_t>(p)] == kK3.bits[static_cast<std::size_t>(p)]);
  CHECK_THROWS_AS(prove_commit_with_perm(kStar4, cycle_of({0, 1, 2, 3}), s, {0, 1, 2, 3}),
                  std::invalid_argument);
}

TEST_CASE("prove_commit: random permutation commits the isomorphic image") {
  SchemeInstance s = small_scheme();
  auto g = qt::rng(301);
  Graph graph = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto c = prove_commit(graph, cycle_of({0, 1, 2, 3}), s, g);
  Graph image = permuted(graph, c.perm);
  for (int p = 0; p < graph.bit_count(); ++p)
    CHECK(c.bit_values[static_cast<std::size_t>(p)] == image.bits[static_cast<std::size_t>(p)]);
}

TEST_CASE("verify: honest transcripts accept with probability 1") {
  SchemeInstance s = small_scheme();
  auto g = qt::rng(302);
  for (const Graph* graph : {&kK3, &kK4}) {
    HamiltonianCycle h = graph->n == 3 ? cycle_of({0, 1, 2}) : cycle_of({0, 1, 2, 3});
    auto c = prove_commit(*graph, h, s, g);
    for (int challenge : {0, 1}) {
      auto t = honest_transcript(c, *graph, h, challenge);
      CHECK(verify(t, s, *graph) == doctest::Approx(1.0).epsilon(1e-11));
    }
  }
}

TEST_CASE("verify: tampered single-bit reveal scores the SWAP-test cross term") {
  SchemeInstance s = small_scheme();
  auto c = prove_commit_with_perm(kK3, cycle_of({0, 1, 2}), s, {0, 1, 2});
  auto t = honest_transcript(c, kK3, cycle_of({0, 1, 2}), 0);
  t.states[0] = honest_commit_state(s, 1 - t.values[0]);
  const double cross = std::norm(s.psi1.amps.dot(s.psi0.amps));
  CHECK(verify(t, s, kK3) == doctest::Approx(0.5 * (1.0 + cross)).epsilon(1e-11));
}

TEST_CASE("verify: structural failures score zero") {
  SchemeInstance s = small_scheme();
  auto c = prove_commit_with_perm(kK4, cycle_of({0, 1, 2, 3}), s, {0, 1, 2, 3});
  auto t = honest_transcript(c, kK4, cycle_of({0, 1, 2, 3}), 1);
  t.claimed_cycle = {0, 1, 1, 2};  // not a cycle pattern
  CHECK(verify(t, s, kK4) == 0.0);
  auto t0 = honest_transcript(c, kK4, cycle_of({0, 1, 2, 3}), 0);
  t0.values[0] = 1 - t0.values[0];  // revealed graph no longer matches pi(G)
  CHECK(verify(t0, s, kK4) == 0.0);
}

TEST_CASE("completeness: exact 1 for cycles on K3 and K4") {
  for (int m : {1, 2}) {
    SchemeInstance s = small_scheme(m);
    CHECK(completeness(kK3, cycle_of({0, 1, 2}), s) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SchemeInstance s = small_scheme(1, 3);
  CHECK(completeness(kK4, cycle_of({0, 1, 2, 3}), s) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("soundness: honest-style prover on a non-Hamiltonian graph scores 1/2") {
  SchemeInstance s = small_scheme();
  auto prover = honest_style_prover(kStar4, {0, 1, 2, 3}, s);
  auto cert = soundness_experiment(prover, kStar4, s, 1e-7);
  CHECK(cert.acceptance == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(cert.p_accept0 == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(cert.p_accept1 == 0.0);
  CHECK(cert.sound);
  CHECK(!cert.extracted_graph_hamiltonian);
  CHECK(cert.ideal_acceptance <= 0.5 + 1e-11);
}

TEST_CASE("soundness: fake-graph prover passes only the cycle challenge") {
  // constant key: the one-point image mixture biases bit-1 extraction to 3/4,
  // so the certificate recovers the committed fake graph
  SchemeInstance s = small_scheme(1, 0);
  auto prover = fake_graph_prover(kK4, cycle_of({0, 1, 2, 3}), s);
  auto cert = soundness_experiment(prover, kStar4, s, 1e-7);
  CHECK(cert.acceptance == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(cert.p_accept0 == 0.0);
  CHECK(cert.p_accept1 == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(cert.sound);
  CHECK(cert.extracted_graph_hamiltonian);  // it extracted the fake graph
}

TEST_CASE("soundness: superposition prover stays below 1/2 plus the gap sum") {
  SchemeParams p{1, 2, 2, 0, std::nullopt};
  SchemeInstance s = crqs_instance(p, p.family().key_from_index(9));
  std::vector<int> perm{0, 1, 2, 3};
  Graph image = permuted(kStar4, perm);
  ZkProverStrategy prover;
  prover.claimed_perm = perm;
  prover.claimed_cycle = {0, 1, 2, 3};
  std::vector<std::string> act;
  for (int i = 1; i <= s.m; ++i) act.push_back(reveal_reg(i));
  for (int pos = 0; pos < kStar4.bit_count(); ++pos) {
    const int v = image.bits[static_cast<std::size_t>(pos)];
    PureState h0 = honest_commit_state(s, 0);
    PureState h1 = honest_commit_state(s, 1);
    Vec mix = h0.amps + h1.amps;
    mix.normalize();
    PureState commit(mix, h0.layout);
    ZkBitStrategy bit;
    bit.commit = commit;
    bit.claim0 = v;
    bit.reveal0 = qla::uhlmann_unitary(commit, honest_commit_state(s, v), act).unitary;
    bit.reveal1 = qla::uhlmann_unitary(commit, h1, act).unitary;
    prover.bits.push_back(std::move(bit));
  }
  auto cert = soundness_experiment(prover, kStar4, s, 1e-7);
  CHECK(cert.sound);
  CHECK(cert.ideal_acceptance <= 0.5 + 1e-9);
  CHECK(cert.acceptance <= 0.5 + cert.gap_sum + 1e-7);
}

TEST_CASE("soundness: entangled two-bit prover is certified in joint mode") {
  SchemeInstance s = small_scheme();
  auto g = qt::rng(303);
  ZkProverStrategy prover;
  prover.claimed_perm = {0, 1, 2, 3};
  prover.claimed_cycle = {0, 1, 2, 3};
  Graph image = permuted(kStar4, prover.claimed_perm);
  const int yw = s.psi0.layout.entries()[1].qubits;
  Unitary id{Mat::Identity(1 << yw, 1 << yw), {reveal_reg(1)}};
  for (int pos = 0; pos < kStar4.bit_count(); ++pos) {
    const int v = image.bits[static_cast<std::size_t>(pos)];
    prover.bits.push_back(ZkBitStrategy{honest_commit_state(s, v), v, id, id});
  }
  prover.joint_bits = {0, 1};
  RegisterLayout joint_layout(
      {{commit_reg(1), 2}, {reveal_reg(1), 2}, {commit_reg(2), 2}, {reveal_reg(2), 2}});
  prover.joint_commit = qt::random_state(g, joint_layout);
  std::vector<std::string> act{reveal_reg(1), reveal_reg(2)};
  prover.joint_reveal0 = Unitary{qt::random_unitary_matrix(g, 16), act};
  prover.joint_reveal1 = Unitary{qt::random_unitary_matrix(g, 16), act};
  auto cert = soundness_experiment(prover, kStar4, s, 1e-7);
  CHECK(cert.sound);
  CHECK(cert.ideal_acceptance <= 0.5 + 1e-9);
}

TEST_CASE("simulator: uniform commitment-independent verifier halts at exactly 1/2") {
  SchemeInstance s = small_scheme();
  VerifierModel v;  // p1 = 0.5, no measurement
  auto rep = simulate(kK3, cycle_of({0, 1, 2}), s, v, 20);
  CHECK(rep.halt_probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.fail_probability == doctest::Approx(std::pow(0.5, 20)).epsilon(1e-9));
  // K3 reveals every bit under challenge 1, so the views coincide up to fail
  CHECK(rep.real_sim_td <= rep.fail_probability + 1e-9);
}

TEST_CASE("simulator: K4 views differ by at most the unrevealed-bit hiding terms") {
  SchemeInstance s = small_scheme();
  VerifierModel v;
  auto rep = simulate(kK4, cycle_of({0, 1, 2, 3}), s, v, 20);
  CHECK(rep.halt_probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.real_sim_td <= rep.per_bit_td_sum + rep.fail_probability + 1e-9);
  CHECK(rep.real_sim_td > 1e-6);  // unopened commitments are not perfectly hiding here
}

TEST_CASE("simulator: constant-challenge verifier reproduces the honest view") {
  SchemeInstance s = small_scheme();
  VerifierModel v;
  v.p1 = 0.0;
  auto rep = simulate(kK4, cycle_of({0, 1, 2, 3}), s, v, 20);
  CHECK(rep.halt_probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.real_sim_td <= rep.fail_probability + 1e-9);
}

TEST_CASE("simulator: measuring verifier stays within the hiding bias") {
  SchemeInstance s = small_scheme();
  auto g = qt::rng(304);
  VerifierModel v;
  v.measured_bit = 2;
  v.measure_p1 = qt::random_projector_matrix(g, 4, 2);  // on that bit's C register
  auto rep = simulate(kK4, cycle_of({0, 1, 2, 3}), s, v, 20);
  CHECK(std::abs(rep.halt_probability - 0.5) <= rep.hiding_term + 1e-9);
  CHECK(rep.fail_probability <= std::pow(1.0 - (0.5 - rep.hiding_term), 20) + 1e-9);
}

TEST_CASE("witness indistinguishability probe") {
  SchemeInstance s = small_scheme();
  // complete graph: commitments are witness-independent, views coincide
  auto trivial = witness_view_td(kK4, cycle_of({0, 1, 2, 3}), cycle_of({0, 2, 1, 3}), s);
  CHECK(trivial.view_td <= 1e-12);

  // every 5-vertex witness pair turns out to give identical views; the house
  // graph documents the exactness of that fact
  Graph house = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}, {1, 3}});
  auto exact = witness_view_td(house, cycle_of({0, 1, 2, 3, 4}), cycle_of({0, 2, 1, 3, 4}), s);
  CHECK(exact.view_td <= 1e-12);

  // smallest scale with genuinely differing views is n=6
  Graph six = Graph::from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2},
                                    {1, 4}, {1, 5}, {2, 4}, {3, 4}, {3, 5}});
  auto probe = witness_view_td(six, cycle_of({0, 1, 2, 4, 3, 5}), cycle_of({0, 1, 5, 3, 4, 2}), s);
  CHECK(probe.view_td <= probe.bound + 1e-9);
  CHECK(probe.view_td > 1e-9);
}
