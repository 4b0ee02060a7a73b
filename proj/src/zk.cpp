#include "qcommit/zk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qcommit/tolerances.hpp"

namespace qcommit {

namespace {

std::vector<std::string> pair_names(int m) {
  std::vector<std::string> names;
  for (int i = 1; i <= m; ++i) names.push_back(commit_reg(i));
  return names;
}

// first factor occupies the low bits
Mat kron_low(const Mat& low, const Mat& high) {
  Mat out(low.rows() * high.rows(), low.cols() * high.cols());
  for (Eigen::Index ih = 0; ih < high.rows(); ++ih)
    for (Eigen::Index jh = 0; jh < high.cols(); ++jh)
      out.block(ih * low.rows(), jh * low.cols(), low.rows(), low.cols()) = high(ih, jh) * low;
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

}  // namespace

Graph Graph::complete(int n) {
  Graph g{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n * (n - 1) / 2), 1)};
  g.check();
  return g;
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n * (n - 1) / 2), 0)};
  for (auto [i, j] : edges) g.bits[static_cast<std::size_t>(g.position(i, j))] = 1;
  g.check();
  return g;
}

int Graph::position(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("bad edge");
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

bool Graph::edge(int i, int j) const { return bits[static_cast<std::size_t>(position(i, j))] != 0; }

void Graph::check() const {
  if (n < 1 || n > 6) throw std::invalid_argument("graphs supported up to 6 vertices");
  if (bits.size() != static_cast<std::size_t>(bit_count()))
    throw std::invalid_argument("adjacency bit vector has wrong length");
}

bool is_permutation(const std::vector<int>& pi, int n) {
  if (static_cast<int>(pi.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : pi) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

Graph permuted(const Graph& g, const std::vector<int>& pi) {
  if (!is_permutation(pi, g.n)) throw std::invalid_argument("not a permutation");
  Graph out{g.n, std::vector<std::uint8_t>(g.bits.size(), 0)};
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.edge(i, j))
        out.bits[static_cast<std::size_t>(out.position(pi[static_cast<std::size_t>(i)],
                                                        pi[static_cast<std::size_t>(j)]))] = 1;
  return out;
}

bool HamiltonianCycle::valid_pattern(int n) const { return n >= 3 && is_permutation(order, n); }

bool HamiltonianCycle::valid_in(const Graph& g) const {
  if (!valid_pattern(g.n)) return false;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (!g.edge(order[i], order[(i + 1) % order.size()])) return false;
  return true;
}

std::vector<int> HamiltonianCycle::edge_positions(const Graph& g) const {
  std::vector<int> pos;
  for (std::size_t i = 0; i < order.size(); ++i)
    pos.push_back(g.position(order[i], order[(i + 1) % order.size()]));
  std::sort(pos.begin(), pos.end());
  return pos;
}

bool has_hamiltonian_cycle(const Graph& g) {
  if (g.n < 3) return false;
  std::vector<int> order(static_cast<std::size_t>(g.n));
  std::iota(order.begin(), order.end(), 0);
  do {
    HamiltonianCycle h{order};
    if (h.valid_in(g)) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

ProverCommitment prove_commit_with_perm(const Graph& g, const HamiltonianCycle& h,
                                        const SchemeInstance& s, std::vector<int> perm) {
  g.check();
  if (!h.valid_in(g)) throw std::invalid_argument("witness is not a Hamiltonian cycle of the graph");
  if (!is_permutation(perm, g.n)) throw std::invalid_argument("not a permutation");
  ProverCommitment out;
  out.perm = std::move(perm);
  Graph image = permuted(g, out.perm);
  for (int p = 0; p < g.bit_count(); ++p) {
    out.bit_values.push_back(image.bits[static_cast<std::size_t>(p)]);
    out.states.push_back(honest_commit_state(s, image.bits[static_cast<std::size_t>(p)]));
  }
  return out;
}

ProverCommitment prove_commit(const Graph& g, const HamiltonianCycle& h, const SchemeInstance& s,
                              std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(g.n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = g.n - 1; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(i + 1))]);
  return prove_commit_with_perm(g, h, s, std::move(perm));
}

ZkTranscript honest_transcript(const ProverCommitment& commitment, const Graph& g,
                               const HamiltonianCycle& h, int challenge) {
  ZkTranscript t;
  t.challenge = challenge;
  if (challenge == 0) {
    t.perm = commitment.perm;
    for (int p = 0; p < g.bit_count(); ++p) {
      t.positions.push_back(p);
      t.values.push_back(commitment.bit_values[static_cast<std::size_t>(p)]);
      t.states.push_back(commitment.states[static_cast<std::size_t>(p)]);
    }
  } else {
    for (int v : h.order) t.claimed_cycle.push_back(commitment.perm[static_cast<std::size_t>(v)]);
    HamiltonianCycle image{t.claimed_cycle};
    for (int p : image.edge_positions(g)) {
      t.positions.push_back(p);
      t.values.push_back(1);
      t.states.push_back(commitment.states[static_cast<std::size_t>(p)]);
    }
  }
  return t;
}

double verify(const ZkTranscript& t, const SchemeInstance& s, const Graph& g) {
  if (t.challenge == 0) {
    if (!is_permutation(t.perm, g.n)) return 0;
    if (static_cast<int>(t.positions.size()) != g.bit_count()) return 0;
    Graph image = permuted(g, t.perm);
    for (std::size_t i = 0; i < t.positions.size(); ++i) {
      if (t.positions[i] != static_cast<int>(i)) return 0;
      if (t.values[i] != image.bits[static_cast<std::size_t>(t.positions[i])]) return 0;
    }
  } else {
    HamiltonianCycle claimed{t.claimed_cycle};
    if (!claimed.valid_pattern(g.n)) return 0;
    std::vector<int> expect = claimed.edge_positions(g);
    std::vector<int> got = t.positions;
    std::sort(got.begin(), got.end());
    if (got != expect) return 0;
    for (int v : t.values)
      if (v != 1) return 0;
  }
  double prob = 1.0;
  for (std::size_t i = 0; i < t.positions.size(); ++i)
    prob *= verify_prob(t.states[i], t.values[i], s);
  return prob;
}

double completeness(const Graph& g, const HamiltonianCycle& h, const SchemeInstance& s) {
  std::vector<int> perm(static_cast<std::size_t>(g.n));
  std::iota(perm.begin(), perm.end(), 0);
  double min_accept = 1.0;
  do {
    ProverCommitment c = prove_commit_with_perm(g, h, s, perm);
    for (int challenge : {0, 1})
      min_accept = std::min(min_accept, verify(honest_transcript(c, g, h, challenge), s, g));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return min_accept;
}

// --- soundness ---

namespace {

// SWAP-test acceptance over an arbitrary list of (pair index, reference bit)
// checks on a joint committer state with pairs (X1..XK, Y1..YK).
double verify_pairs_prob(const PureState& chi, const SchemeInstance& s,
                         const std::vector<std::pair<int, int>>& checks) {
  const int n_out = s.psi0.layout.entries()[0].qubits;
  struct Ctx {
    Vec v;
    RegisterLayout layout;
  };
  double sum = 0;
  std::function<void(const Ctx&, std::size_t)> rec = [&](const Ctx& c, std::size_t i) {
    if (i == checks.size()) {
      sum += c.v.squaredNorm();
      return;
    }
    rec(c, i + 1);
    const auto [pair_idx, bit] = checks[i];
    const std::vector<std::string> names{commit_reg(pair_idx), reveal_reg(pair_idx)};
    SubsetIndexer idx(c.layout, names);
    std::vector<std::uint64_t> map(idx.subset_dim());
    for (std::uint64_t sv = 0; sv < idx.subset_dim(); ++sv) {
      const std::uint64_t full = idx.fuse(sv, 0);
      map[sv] = c.layout.extract(commit_reg(pair_idx), full) |
                (c.layout.extract(reveal_reg(pair_idx), full) << n_out);
    }
    const Vec& ref = s.psi(bit).amps;
    const auto dp = static_cast<Eigen::Index>(idx.subset_dim());
    const auto dr = static_cast<Eigen::Index>(idx.rest_dim());
    Vec out = Vec::Zero(dr);
    for (Eigen::Index r = 0; r < dr; ++r) {
      cplx acc = 0;
      for (Eigen::Index pv = 0; pv < dp; ++pv)
        acc += std::conj(ref[static_cast<Eigen::Index>(map[static_cast<std::size_t>(pv)])]) *
               c.v[static_cast<Eigen::Index>(idx.fuse(pv, r))];
      out[r] = acc;
    }
    std::vector<RegisterLayout::Entry> rest;
    for (const auto& e : c.layout.entries())
      if (e.name != commit_reg(pair_idx) && e.name != reveal_reg(pair_idx)) rest.push_back(e);
    Ctx next{std::move(out), RegisterLayout(std::move(rest))};
    rec(next, i + 1);
  };
  rec(Ctx{chi.amps, chi.layout}, 0);
  return std::ldexp(sum, -static_cast<int>(checks.size()));
}

struct PerBitOutcome {
  double real = 1.0, ideal = 1.0, gap = 0.0;
};

PerBitOutcome bit_outcome(const ZkBitStrategy& bit, int announced, const Unitary& reveal,
                          const SchemeInstance& s) {
  CommitterStrategy c{bit.commit, announced, reveal};
  PerBitOutcome out;
  auto rep = binding_report(c, s);
  out.real = rep.real.prob[static_cast<std::size_t>(announced)];
  out.ideal = rep.ideal.prob[static_cast<std::size_t>(announced)];
  out.gap = rep.gap;
  return out;
}

struct JointOutcome {
  double real = 1.0, ideal = 1.0, gap = 0.0;
};

JointOutcome joint_outcome(const ZkProverStrategy& prover, int challenge, const Graph& g,
                           const SchemeInstance& s) {
  JointOutcome out;
  if (prover.joint_bits.empty()) return out;
  const int J = static_cast<int>(prover.joint_bits.size());
  const Unitary& reveal = challenge == 0 ? *prover.joint_reveal0 : *prover.joint_reveal1;

  std::vector<std::pair<int, int>> checks;
  std::vector<int> checked_bit(static_cast<std::size_t>(J), -1);
  std::vector<int> cycle_pos;
  if (challenge == 1 && !prover.claimed_cycle.empty())
    cycle_pos = HamiltonianCycle{prover.claimed_cycle}.edge_positions(g);
  for (int j = 0; j < J; ++j) {
    const int pos = prover.joint_bits[static_cast<std::size_t>(j)];
    int bit = -1;
    if (challenge == 0) bit = prover.bits[static_cast<std::size_t>(pos)].claim0;
    if (challenge == 1 && std::binary_search(cycle_pos.begin(), cycle_pos.end(), pos)) bit = 1;
    checked_bit[static_cast<std::size_t>(j)] = bit;
    if (bit >= 0)
      for (int i = 1; i <= s.m; ++i) checks.emplace_back(j * s.m + i, bit);
  }

  PureState chi = qla::apply(reveal, *prover.joint_commit);
  out.real = verify_pairs_prob(chi, s, checks);

  const Mat* proj[3] = {&s.copy_extractor.pi0, &s.copy_extractor.pi1, &s.copy_extractor.pi_bot};
  const int total_pairs = J * s.m;
  std::vector<int> pattern(static_cast<std::size_t>(total_pairs));
  int total_patterns = 1;
  for (int i = 0; i < total_pairs; ++i) total_patterns *= 3;
  double ideal_acc = 0, fail_acc = 0, ideal_rej = 0;
  for (int code = 0; code < total_patterns; ++code) {
    int cde = code;
    for (int i = 0; i < total_pairs; ++i) {
      pattern[static_cast<std::size_t>(i)] = cde % 3;
      cde /= 3;
    }
    Vec branch = prover.joint_commit->amps;
    for (int i = 0; i < total_pairs; ++i) {
      const std::vector<std::string> reg{commit_reg(i + 1)};
      branch = qla::apply_on_subset(*proj[pattern[static_cast<std::size_t>(i)]], branch,
                                    prover.joint_commit->layout, reg);
    }
    const double mass = branch.squaredNorm();
    if (mass < 1e-30) continue;
    bool consistent = true;
    for (int j = 0; j < J; ++j) {
      if (checked_bit[static_cast<std::size_t>(j)] < 0) continue;
      std::vector<int> copies(pattern.begin() + j * s.m, pattern.begin() + (j + 1) * s.m);
      if (majority_classify(copies, s.m) != checked_bit[static_cast<std::size_t>(j)]) consistent = false;
    }
    PureState branch_state(std::move(branch), prover.joint_commit->layout, /*sub=*/true);
    const double acc = verify_pairs_prob(qla::apply(reveal, branch_state), s, checks);
    (consistent ? ideal_acc : fail_acc) += acc;
    ideal_rej += mass - acc;
  }
  out.ideal = ideal_acc;
  const double real_rej = prover.joint_commit->norm2() - out.real;
  out.gap = 0.5 * std::abs(out.real - ideal_acc) + 0.5 * std::abs(real_rej - ideal_rej) + 0.5 * fail_acc;
  return out;
}

}  // namespace

ZkProverStrategy honest_style_prover(const Graph& g, const std::vector<int>& perm,
                                     const SchemeInstance& s) {
  ZkProverStrategy prover;
  prover.claimed_perm = perm;
  Graph image = permuted(g, perm);
  const int yw = s.psi0.layout.entries()[1].qubits;
  Unitary id{Mat::Identity(1 << yw, 1 << yw), {reveal_reg(1)}};
  for (int p = 0; p < g.bit_count(); ++p) {
    const int v = image.bits[static_cast<std::size_t>(p)];
    prover.bits.push_back(ZkBitStrategy{honest_commit_state(s, v), v, id, id});
  }
  return prover;  // claimed_cycle empty: aborts on challenge 1
}

ZkProverStrategy fake_graph_prover(const Graph& fake, const HamiltonianCycle& fake_cycle,
                                   const SchemeInstance& s) {
  if (!fake_cycle.valid_in(fake)) throw std::invalid_argument("cycle is not Hamiltonian in the fake graph");
  ZkProverStrategy prover;
  prover.claimed_cycle = fake_cycle.order;
  const int yw = s.psi0.layout.entries()[1].qubits;
  Unitary id{Mat::Identity(1 << yw, 1 << yw), {reveal_reg(1)}};
  for (int p = 0; p < fake.bit_count(); ++p) {
    const int v = fake.bits[static_cast<std::size_t>(p)];
    prover.bits.push_back(ZkBitStrategy{honest_commit_state(s, v), v, id, id});
  }
  return prover;  // claimed_perm empty: aborts on challenge 0
}

SoundnessCertificate soundness_experiment(const ZkProverStrategy& prover, const Graph& g,
                                          const SchemeInstance& s, double tolerance) {
  g.check();
  if (static_cast<int>(prover.bits.size()) != g.bit_count())
    throw std::invalid_argument("prover strategy has the wrong number of bit entries");
  if (!prover.joint_bits.empty() &&
      (!prover.joint_commit || !prover.joint_reveal0 || !prover.joint_reveal1))
    throw std::invalid_argument("joint mode requires a joint commitment and reveal unitaries");

  SoundnessCertificate cert;
  auto in_joint = [&](int p) {
    return std::find(prover.joint_bits.begin(), prover.joint_bits.end(), p) != prover.joint_bits.end();
  };

  bool structural0 = is_permutation(prover.claimed_perm, g.n);
  if (structural0) {
    Graph image = permuted(g, prover.claimed_perm);
    for (int p = 0; p < g.bit_count(); ++p)
      if (prover.bits[static_cast<std::size_t>(p)].claim0 != image.bits[static_cast<std::size_t>(p)])
        structural0 = false;
  }
  HamiltonianCycle claimed{prover.claimed_cycle};
  const bool structural1 = claimed.valid_pattern(g.n);

  double real0 = structural0 ? 1.0 : 0.0, ideal0 = structural0 ? 1.0 : 0.0;
  double real1 = structural1 ? 1.0 : 0.0, ideal1 = structural1 ? 1.0 : 0.0;
  double gap_sum = 0;

  std::vector<int> cycle_pos;
  if (structural1) cycle_pos = claimed.edge_positions(g);

  for (int p = 0; p < g.bit_count(); ++p) {
    if (in_joint(p)) continue;
    const ZkBitStrategy& bit = prover.bits[static_cast<std::size_t>(p)];
    if (structural0) {
      auto r = bit_outcome(bit, bit.claim0, bit.reveal0, s);
      real0 *= r.real;
      ideal0 *= r.ideal;
      gap_sum += 0.5 * r.gap;
    }
    if (structural1 && std::binary_search(cycle_pos.begin(), cycle_pos.end(), p)) {
      auto r = bit_outcome(bit, 1, bit.reveal1, s);
      real1 *= r.real;
      ideal1 *= r.ideal;
      gap_sum += 0.5 * r.gap;
    }
  }
  if (!prover.joint_bits.empty()) {
    if (structural0) {
      auto r = joint_outcome(prover, 0, g, s);
      real0 *= r.real;
      ideal0 *= r.ideal;
      gap_sum += 0.5 * r.gap;
    }
    if (structural1) {
      auto r = joint_outcome(prover, 1, g, s);
      real1 *= r.real;
      ideal1 *= r.ideal;
      gap_sum += 0.5 * r.gap;
    }
  }

  cert.p_accept0 = real0;
  cert.p_accept1 = real1;
  cert.ideal0 = ideal0;
  cert.ideal1 = ideal1;
  cert.acceptance = 0.5 * (real0 + real1);
  cert.ideal_acceptance = 0.5 * (ideal0 + ideal1);
  cert.gap_sum = gap_sum;
  cert.bound = 0.5 + gap_sum;
  cert.sound = cert.acceptance <= cert.bound + tolerance;

  // extraction certificate: most likely extractor outcome per position
  Graph extracted{g.n, std::vector<std::uint8_t>(static_cast<std::size_t>(g.bit_count()), 0)};
  for (int p = 0; p < g.bit_count(); ++p) {
    std::array<double, 3> q{};
    if (in_joint(p)) {
      const auto it = std::find(prover.joint_bits.begin(), prover.joint_bits.end(), p);
      const int j = static_cast<int>(it - prover.joint_bits.begin());
      SchemeInstance joint = s;
      joint.m = static_cast<int>(prover.joint_bits.size()) * s.m;
      ExtractorResult ext = run_extractor(*prover.joint_commit, joint);
      const int total_pairs = joint.m;
      for (std::size_t n = 0; n < ext.branches.size(); ++n) {
        int code = static_cast<int>(n);
        std::vector<int> pattern(static_cast<std::size_t>(total_pairs));
        for (int i = 0; i < total_pairs; ++i) {
          pattern[static_cast<std::size_t>(i)] = code % 3;
          code /= 3;
        }
        std::vector<int> copies(pattern.begin() + j * s.m, pattern.begin() + (j + 1) * s.m);
        q[static_cast<std::size_t>(majority_classify(copies, s.m))] += ext.branches[n].norm2();
      }
    } else {
      auto ext = run_extractor(prover.bits[static_cast<std::size_t>(p)].commit, s);
      q = ext.prob;
    }
    const auto best = static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
    cert.extracted_bits.push_back(best);
    cert.extracted_prob.push_back(q[static_cast<std::size_t>(best)]);
    if (best == 1) extracted.bits[static_cast<std::size_t>(p)] = 1;
  }
  cert.extracted_graph_hamiltonian = has_hamiltonian_cycle(extracted);
  return cert;
}

// --- simulator ---

namespace {

struct ViewBlocks {
  std::map<std::string, Mat> ops;  // unnormalized, mass included

  void add(const std::string& key, const Mat& op, double weight) {
    auto it = ops.find(key);
    if (it == ops.end())
      ops.emplace(key, weight * op);
    else
      it->second += weight * op;
  }
};

double view_distance(const ViewBlocks& a, const ViewBlocks& b) {
  double td = 0;
  for (const auto& [key, op] : a.ops) {
    auto it = b.ops.find(key);
    if (it == b.ops.end())
      td += 0.5 * op.trace().real();
    else
      td += qla::half_trace_norm_hermitian(op - it->second);
  }
  for (const auto& [key, op] : b.ops)
    if (!a.ops.count(key)) td += 0.5 * op.trace().real();
  return td;
}

struct BitStates {
  PureState pair[2];  // honest (C,R) joint states per committed value
  Mat c_only[2];      // xi_v^{(x)m}
};

BitStates bit_states(const SchemeInstance& s) {
  BitStates out;
  for (int v : {0, 1}) {
    out.pair[v] = honest_commit_state(s, v);
    out.c_only[v] = qla::partial_trace(out.pair[v], pair_names(s.m)).mat;
  }
  return out;
}

struct MeasuredBit {
  bool active = false;
  int position = 0;
  double q1[2] = {};    // challenge-1 probability per committed value
  Mat post_pair[2][2];  // [challenge][value], (C,R) sandwich, unnormalized
  Mat post_c[2][2];     // [challenge][value], traced to C, unnormalized
};

MeasuredBit measured_bit(const VerifierModel& v, const SchemeInstance& s, const BitStates& bs) {
  MeasuredBit out;
  if (!v.measure_p1) return out;
  out.active = true;
  out.position = v.measured_bit;
  const RegisterLayout& pl = bs.pair[0].layout;
  Mat p1 = qla::embed(*v.measure_p1, pl, pair_names(s.m));
  Mat p0 = Mat::Identity(p1.rows(), p1.cols()) - p1;
  const Mat* proj[2] = {&p0, &p1};
  for (int val : {0, 1})
    for (int c : {0, 1}) {
      Vec branch = *proj[c] * bs.pair[val].amps;
      if (c == 1) out.q1[val] = branch.squaredNorm();
      out.post_pair[c][val] = branch * branch.adjoint();
      PureState ps(branch, pl, /*sub=*/true);
      out.post_c[c][val] = qla::partial_trace(ps, pair_names(s.m)).mat;
    }
  return out;
}

// accumulate the two challenge blocks of one committed assignment
void add_assignment(ViewBlocks& view, double weight, const std::vector<int>& values,
                    const std::string& perm_tag, const std::vector<int>& cycle_pattern,
                    const Graph& g, const VerifierModel& v, const BitStates& bs,
                    const MeasuredBit& mb) {
  const int meas_val = mb.active ? values[static_cast<std::size_t>(mb.position)] : 0;
  const double q1 = mb.active ? mb.q1[meas_val] : v.p1;
  const double q0 = 1.0 - q1;

  // challenge 0: every bit revealed; unmeasured factors are key-determined
  // pure states that cancel between views with matching keys
  {
    const std::string key = "0|" + perm_tag + "|" + join_ints(values);
    Mat op = mb.active ? mb.post_pair[0][meas_val] : Mat::Constant(1, 1, q0);
    view.add(key, op, weight);
  }
  // challenge 1: revealed cycle bits are identical pure factors and cancel;
  // the rest forms one joint factor keyed by the claimed pattern
  {
    const std::string key = "1|" + join_ints(cycle_pattern);
    Mat op = Mat::Constant(1, 1, 1.0);
    if (mb.active) {
      const bool revealed = std::binary_search(cycle_pattern.begin(), cycle_pattern.end(), mb.position);
      op = revealed ? mb.post_pair[1][meas_val] : mb.post_c[1][meas_val];
    }
    for (int p = 0; p < g.bit_count(); ++p) {
      if (mb.active && p == mb.position) continue;
      if (std::binary_search(cycle_pattern.begin(), cycle_pattern.end(), p)) continue;
      op = kron_low(op, bs.c_only[values[static_cast<std::size_t>(p)]]);
    }
    if (!mb.active) op *= q1;
    view.add(key, op, weight);
  }
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

SimulatorReport simulate(const Graph& g, const HamiltonianCycle& h, const SchemeInstance& s,
                         const VerifierModel& v, int loops) {
  g.check();
  if (!h.valid_in(g)) throw std::invalid_argument("witness is not a Hamiltonian cycle of the graph");
  SimulatorReport rep;
  rep.loops = loops;
  BitStates bs = bit_states(s);
  MeasuredBit mb = measured_bit(v, s, bs);
  auto perms = all_permutations(g.n);
  const double wp = 1.0 / static_cast<double>(perms.size());

  ViewBlocks real_view;
  double halt0 = 0, halt1 = 0;  // E_pi[q_{c=0}], E_Gtilde[q_{c=1}]
  Mat real_meas_avg, sim_meas_avg;
  if (mb.active) {
    real_meas_avg = Mat::Zero(bs.c_only[0].rows(), bs.c_only[0].cols());
    sim_meas_avg = real_meas_avg;
  }
  for (const auto& perm : perms) {
    Graph image = permuted(g, perm);
    std::vector<int> values(image.bits.begin(), image.bits.end());
    std::vector<int> claimed;
    for (int vertex : h.order) claimed.push_back(perm[static_cast<std::size_t>(vertex)]);
    add_assignment(real_view, wp, values, join_ints(perm),
                   HamiltonianCycle{claimed}.edge_positions(g), g, v, bs, mb);
    const int meas_val = mb.active ? values[static_cast<std::size_t>(mb.position)] : 0;
    halt0 += wp * (1.0 - (mb.active ? mb.q1[meas_val] : v.p1));
    if (mb.active) real_meas_avg += wp * bs.c_only[meas_val];
  }

  // simulated halt branches of a single loop: guess the challenge, commit
  // pi(G) for guess 0 or a random Hamiltonian-containing graph for guess 1,
  // halt when the verifier's challenge agrees
  ViewBlocks sim_halt;
  for (const auto& perm : perms) {
    Graph image = permuted(g, perm);
    std::vector<int> values(image.bits.begin(), image.bits.end());
    std::vector<int> claimed;
    for (int vertex : h.order) claimed.push_back(perm[static_cast<std::size_t>(vertex)]);
    ViewBlocks tmp;
    add_assignment(tmp, 0.5 * wp, values, join_ints(perm),
                   HamiltonianCycle{claimed}.edge_positions(g), g, v, bs, mb);
    for (auto& [key, op] : tmp.ops)
      if (key[0] == '0') sim_halt.add(key, op, 1.0);
  }
  const int bits = g.bit_count();
  for (const auto& order : perms) {
    HamiltonianCycle cyc{order};
    std::vector<int> pattern = cyc.edge_positions(g);
    std::vector<int> free_pos;
    for (int p = 0; p < bits; ++p)
      if (!std::binary_search(pattern.begin(), pattern.end(), p)) free_pos.push_back(p);
    const double wfree = 1.0 / static_cast<double>(std::uint64_t{1} << free_pos.size());
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << free_pos.size()); ++a) {
      std::vector<int> values(static_cast<std::size_t>(bits), 0);
      for (int p : pattern) values[static_cast<std::size_t>(p)] = 1;
      for (std::size_t i = 0; i < free_pos.size(); ++i)
        values[static_cast<std::size_t>(free_pos[i])] = static_cast<int>((a >> i) & 1);
      ViewBlocks tmp;
      add_assignment(tmp, 0.5 * wp * wfree, values, "sim", pattern, g, v, bs, mb);
      for (auto& [key, op] : tmp.ops)
        if (key[0] == '1') sim_halt.add(key, op, 1.0);
      const int meas_val = mb.active ? values[static_cast<std::size_t>(mb.position)] : 0;
      halt1 += wp * wfree * (mb.active ? mb.q1[meas_val] : v.p1);
      if (mb.active) sim_meas_avg += wp * wfree * bs.c_only[meas_val];
    }
  }

  rep.halt_probability = 0.5 * (halt0 + halt1);
  rep.fail_probability = std::pow(1.0 - rep.halt_probability, loops);
  const double scale = (1.0 - rep.fail_probability) / rep.halt_probability;
  ViewBlocks sim_view;
  for (auto& [key, op] : sim_halt.ops) sim_view.add(key, op, scale);
  rep.real_sim_td = view_distance(real_view, sim_view) + 0.5 * rep.fail_probability;

  if (mb.active) rep.hiding_term = qla::half_trace_norm_hermitian(real_meas_avg - sim_meas_avg);
  DensityOp xi0m(bs.c_only[0],
                 RegisterLayout::single("C", s.m * s.psi0.layout.entries()[0].qubits));
  DensityOp xi1m(bs.c_only[1], xi0m.layout);
  rep.per_bit_td_sum = static_cast<double>(bits - g.n) * qla::trace_distance(xi0m, xi1m);
  return rep;
}

WitnessProbe witness_view_td(const Graph& g, const HamiltonianCycle& h0,
                             const HamiltonianCycle& h1, const SchemeInstance& s) {
  g.check();
  if (!h0.valid_in(g) || !h1.valid_in(g)) throw std::invalid_argument("witness is not Hamiltonian");
  BitStates bs = bit_states(s);
  auto perms = all_permutations(g.n);
  const double wp = 1.0 / static_cast<double>(perms.size());
  // uniform challenge, no measurement: the c=0 branches coincide and every
  // c=1 factor is diagonal, so blocks reduce to diagonal weight vectors
  Eigen::VectorXd xi_diag[2];
  const auto dc = bs.c_only[0].rows();
  for (int v : {0, 1}) xi_diag[v] = bs.c_only[v].diagonal().real();
  std::map<std::string, Eigen::VectorXd> blocks[2];
  for (const auto& perm : perms) {
    Graph image = permuted(g, perm);
    for (int w : {0, 1}) {
      const HamiltonianCycle& h = w == 0 ? h0 : h1;
      std::vector<int> claimed;
      for (int vertex : h.order) claimed.push_back(perm[static_cast<std::size_t>(vertex)]);
      std::vector<int> pattern = HamiltonianCycle{claimed}.edge_positions(g);
      Eigen::VectorXd diag = Eigen::VectorXd::Constant(1, 0.5 * wp);  // challenge-1 weight
      for (int p = 0; p < g.bit_count(); ++p) {
        if (std::binary_search(pattern.begin(), pattern.end(), p)) continue;
        const Eigen::VectorXd& factor = xi_diag[image.bits[static_cast<std::size_t>(p)]];
        Eigen::VectorXd next(diag.size() * dc);
        for (Eigen::Index j = 0; j < dc; ++j) next.segment(j * diag.size(), diag.size()) = factor[j] * diag;
        diag = std::move(next);
      }
      auto& slot = blocks[w][join_ints(pattern)];
      if (slot.size() == 0)
        slot = diag;
      else
        slot += diag;
    }
  }
  WitnessProbe probe;
  for (const auto& [key, d0] : blocks[0]) {
    const auto& d1 = blocks[1].at(key);  // patterns have identical marginals
    probe.view_td += 0.5 * (d0 - d1).cwiseAbs().sum();
  }
  DensityOp xi0m(bs.c_only[0],
                 RegisterLayout::single("C", s.m * s.psi0.layout.entries()[0].qubits));
  DensityOp xi1m(bs.c_only[1], xi0m.layout);
  probe.bound = static_cast<double>(g.bit_count() - g.n) * qla::trace_distance(xi0m, xi1m);
  return probe;
}

}  // namespace qcommit
