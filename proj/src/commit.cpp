#include "qcommit/commit.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "qcommit/tolerances.hpp"

namespace qcommit {

namespace {

PureState renamed_copy(const PureState& s, const std::string& x_name, const std::string& y_name) {
  const auto& e = s.layout.entries();
  RegisterLayout l({{x_name, e[0].qubits}, {y_name, e[1].qubits}});
  return PureState(s.amps, std::move(l));
}

RegisterLayout residual_layout(const PureState& committer_state) {
  if (committer_state.layout.has("W"))
    return RegisterLayout::single("W", committer_state.layout.qubits_of("W"));
  return RegisterLayout();
}

Mat w_trace(const PureState& chi) {
  std::vector<std::string> keep;
  if (chi.layout.has("W")) keep.push_back("W");
  SubsetIndexer idx(chi.layout, keep);
  const auto dk = static_cast<Eigen::Index>(idx.subset_dim());
  const auto dt = static_cast<Eigen::Index>(idx.rest_dim());
  Mat cols(dk, dt);
  for (Eigen::Index t = 0; t < dt; ++t)
    for (Eigen::Index i = 0; i < dk; ++i) cols(i, t) = chi.amps[static_cast<Eigen::Index>(idx.fuse(i, t))];
  return cols * cols.adjoint();
}

// pair-value -> reference-state index map for one commitment copy, robust to
// arbitrary register order in the committer layout
std::vector<std::uint64_t> pair_ref_map(const RegisterLayout& layout, const std::string& xr,
                                        const std::string& yr, int n_out) {
  const std::vector<std::string> names{xr, yr};
  SubsetIndexer idx(layout, names);
  std::vector<std::uint64_t> map(idx.subset_dim());
  for (std::uint64_t s = 0; s < idx.subset_dim(); ++s) {
    const std::uint64_t full = idx.fuse(s, 0);
    map[s] = layout.extract(xr, full) | (layout.extract(yr, full) << n_out);
  }
  return map;
}

struct Contraction {
  Vec v;
  RegisterLayout layout;
};

// out[rest] = sum_pv conj(ref[pv]) v[pv, rest]
Contraction contract_pair(const Contraction& c, const std::string& xr, const std::string& yr,
                          const Vec& ref, int n_out) {
  const std::vector<std::string> names{xr, yr};
  SubsetIndexer idx(c.layout, names);
  auto map = pair_ref_map(c.layout, xr, yr, n_out);
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
  // drop the contracted pair from the layout
  std::vector<RegisterLayout::Entry> rest;
  for (const auto& e : c.layout.entries())
    if (e.name != xr && e.name != yr) rest.push_back(e);
  return Contraction{std::move(out), RegisterLayout(std::move(rest))};
}

// index permutation exchanging two equal-width register lists
Vec swap_registers(const Vec& v, const RegisterLayout& layout, std::span<const std::string> a,
                   std::span<const std::string> b) {
  std::vector<int> offa, offb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int qa = layout.qubits_of(a[i]);
    if (qa != layout.qubits_of(b[i])) throw std::invalid_argument("swapped registers must have equal widths");
    for (int q = 0; q < qa; ++q) {
      offa.push_back(layout.offset_of(a[i]) + q);
      offb.push_back(layout.offset_of(b[i]) + q);
    }
  }
  Vec out(v.size());
  const auto dim = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t f = 0; f < dim; ++f) {
    std::uint64_t g = f;
    for (std::size_t i = 0; i < offa.size(); ++i) {
      const std::uint64_t ba = (f >> offa[i]) & 1u;
      const std::uint64_t bb = (f >> offb[i]) & 1u;
      if (ba != bb) g ^= (std::uint64_t{1} << offa[i]) | (std::uint64_t{1} << offb[i]);
    }
    out[static_cast<Eigen::Index>(g)] = v[static_cast<Eigen::Index>(f)];
  }
  return out;
}

struct VerifyResult {
  double p_accept = 0;
  Mat res_accept;  // on W
};

// Purified verification: tensor the receiver's reference copy, project each
// commitment pair onto its symmetric subspace, read off the W residual.
VerifyResult verify_with_residual(const PureState& chi, int b, const SchemeInstance& s) {
  PureState aux = renamed_copy(s.psi(b), "XP1", "YP1");
  for (int i = 2; i <= s.m; ++i)
    aux = qla::tensor(aux, renamed_copy(s.psi(b), "XP" + std::to_string(i), "YP" + std::to_string(i)));
  PureState joint = qla::tensor(chi, aux);
  Vec v = joint.amps;
  for (int i = 1; i <= s.m; ++i) {
    const std::vector<std::string> left{commit_reg(i), reveal_reg(i)};
    const std::vector<std::string> right{"XP" + std::to_string(i), "YP" + std::to_string(i)};
    Vec swapped = swap_registers(v, joint.layout, left, right);
    v = 0.5 * (v + swapped);
  }
  VerifyResult out;
  out.p_accept = v.squaredNorm();
  PureState branch(std::move(v), joint.layout, /*sub=*/true);
  std::vector<std::string> keep;
  if (chi.layout.has("W")) keep.push_back("W");
  out.res_accept = qla::partial_trace(branch, keep).mat;
  return out;
}

double blockwise_td(const ExperimentOutput& real, const ExperimentOutput& ideal) {
  double gap = 0;
  for (int o : {0, 1, ExperimentOutput::kBot})
    gap += qla::half_trace_norm_hermitian(real.residual[static_cast<std::size_t>(o)].mat -
                                          ideal.residual[static_cast<std::size_t>(o)].mat);
  gap += 0.5 * ideal.prob[ExperimentOutput::kFail];
  return gap;
}

}  // namespace

void SchemeParams::check() const {
  if (lambda < 1 || n_out < 1) throw std::invalid_argument("lambda and n_out must be positive");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (t < 0) throw std::invalid_argument("t must be nonnegative");
}

std::string commit_reg(int i) { return "X" + std::to_string(i); }
std::string reveal_reg(int i) { return "Y" + std::to_string(i); }

SchemeInstance make_instance(PureState psi0, PureState psi1, int m) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(psi0.layout == psi1.layout)) throw std::invalid_argument("protocol states must share a layout");
  if (psi0.layout.entries().size() != 2)
    throw std::invalid_argument("protocol states live on two registers (X, Y)");
  SchemeInstance s;
  s.m = m;
  const std::vector<std::string> keep{psi0.layout.entries()[0].name};
  s.xi0 = qla::partial_trace(psi0, keep);
  s.xi1 = qla::partial_trace(psi1, keep);
  s.copy_extractor = qla::helstrom_three_outcome(s.xi0, s.xi1);
  s.epsilon = qla::fidelity(s.xi0, s.xi1);
  s.psi0 = std::move(psi0);
  s.psi1 = std::move(psi1);
  return s;
}

SchemeInstance crqs_instance(const SchemeParams& p, const HashKey& key) {
  p.check();
  return crqs_instance(p, p.family().materialize(key));
}

SchemeInstance crqs_instance(const SchemeParams& p, const FunctionTable& table) {
  p.check();
  return make_instance(efi::protocol_state(table, 0), efi::protocol_state(table, 1), p.m);
}

CrqsDescription make_crqs(const SchemeParams& p, const HashKey& key, int copies) {
  return CrqsDescription{key, crqs_instance(p, key), copies};
}

PureState honest_commit_state(const SchemeInstance& s, int b) {
  PureState acc = renamed_copy(s.psi(b), commit_reg(1), reveal_reg(1));
  for (int i = 2; i <= s.m; ++i) acc = qla::tensor(acc, renamed_copy(s.psi(b), commit_reg(i), reveal_reg(i)));
  return acc;
}

PureState honest_commit(CrqsDescription& crqs, int b) {
  if (crqs.copies_remaining <= 0) throw std::runtime_error("CRQS copies exhausted");
  --crqs.copies_remaining;
  return honest_commit_state(crqs.scheme, b);
}

double verify_prob(const PureState& chi, int b, const SchemeInstance& s) {
  const int n_out = s.psi0.layout.entries()[0].qubits;
  const Vec& ref = s.psi(b).amps;
  double sum = 0;
  std::function<void(const Contraction&, int)> rec = [&](const Contraction& c, int i) {
    if (i > s.m) {
      sum += c.v.squaredNorm();
      return;
    }
    rec(c, i + 1);
    Contraction contracted = contract_pair(c, commit_reg(i), reveal_reg(i), ref, n_out);
    rec(contracted, i + 1);
  };
  rec(Contraction{chi.amps, chi.layout}, 1);
  return std::ldexp(sum, -s.m);
}

CommitterStrategy honest_strategy(const SchemeInstance& s, int b) {
  CommitterStrategy c;
  c.initial = honest_commit_state(s, b);
  c.announced_bit = b;
  const int yw = s.psi0.layout.entries()[1].qubits;
  c.reveal = Unitary{Mat::Identity(1 << yw, 1 << yw), {reveal_reg(1)}};
  return c;
}

CommitterStrategy uhlmann_strategy(const SchemeInstance& s, int commit_bit, int reveal_bit) {
  CommitterStrategy c;
  c.initial = honest_commit_state(s, commit_bit);
  c.announced_bit = reveal_bit;
  if (reveal_bit == commit_bit) {
    const int yw = s.psi0.layout.entries()[1].qubits;
    c.reveal = Unitary{Mat::Identity(1 << yw, 1 << yw), {reveal_reg(1)}};
    return c;
  }
  std::vector<std::string> act;
  for (int i = 1; i <= s.m; ++i) act.push_back(reveal_reg(i));
  PureState target = honest_commit_state(s, reveal_bit);
  c.reveal = qla::uhlmann_unitary(c.initial, target, act).unitary;
  return c;
}

void ExperimentOutput::check() const {
  double total = 0;
  for (std::size_t o = 0; o < 4; ++o) {
    total += prob[o];
    if (std::abs(residual[o].mat.trace().real() - prob[o]) > tol().structural)
      throw std::runtime_error("residual trace does not match outcome probability");
  }
  if (std::abs(total - 1.0) > tol().structural)
    throw std::runtime_error("outcome probabilities do not sum to 1");
}

namespace {

ExperimentOutput empty_output(const RegisterLayout& w_layout) {
  ExperimentOutput out;
  const auto d = static_cast<Eigen::Index>(w_layout.dim());
  for (auto& r : out.residual) r = DensityOp(Mat::Zero(d, d), w_layout, /*sub=*/true);
  return out;
}

}  // namespace

ExperimentOutput real_experiment(const CommitterStrategy& c, const SchemeInstance& s) {
  const int b = c.announced_bit;
  PureState chi = qla::apply(c.reveal, c.initial);
  ExperimentOutput out = empty_output(residual_layout(c.initial));
  if (c.initial.layout.has("W")) {
    VerifyResult v = verify_with_residual(chi, b, s);
    out.prob[static_cast<std::size_t>(b)] = v.p_accept;
    out.residual[static_cast<std::size_t>(b)].mat = v.res_accept;
  } else {
    const double p = verify_prob(chi, b, s);
    out.prob[static_cast<std::size_t>(b)] = p;
    out.residual[static_cast<std::size_t>(b)].mat(0, 0) = p;
  }
  Mat total = w_trace(chi);
  out.prob[ExperimentOutput::kBot] = chi.norm2() - out.prob[static_cast<std::size_t>(b)];
  out.residual[ExperimentOutput::kBot].mat = total - out.residual[static_cast<std::size_t>(b)].mat;
  return out;
}

int majority_classify(const std::vector<int>& outcomes, int m) {
  int c0 = 0, c1 = 0;
  for (int o : outcomes) {
    if (o == 0) ++c0;
    if (o == 1) ++c1;
  }
  if (3 * c0 > 2 * m) return 0;
  if (3 * c1 > 2 * m) return 1;
  return 2;  // bot
}

ExtractorResult run_extractor(const PureState& commitment, const SchemeInstance& s) {
  ExtractorResult out;
  const Mat* proj[3] = {&s.copy_extractor.pi0, &s.copy_extractor.pi1, &s.copy_extractor.pi_bot};
  std::vector<int> pattern(static_cast<std::size_t>(s.m));
  // all 3^m per-copy outcome patterns; only the majority value is announced,
  // the pattern itself decoheres
  int total_patterns = 1;
  for (int i = 0; i < s.m; ++i) total_patterns *= 3;
  for (int code = 0; code < total_patterns; ++code) {
    int cde = code;
    for (int i = 0; i < s.m; ++i) {
      pattern[static_cast<std::size_t>(i)] = cde % 3;
      cde /= 3;
    }
    Vec branch = commitment.amps;
    for (int i = 0; i < s.m; ++i) {
      const std::vector<std::string> reg{commit_reg(i + 1)};
      branch = qla::apply_on_subset(*proj[pattern[static_cast<std::size_t>(i)]], branch,
                                    commitment.layout, reg);
    }
    const int cls = majority_classify(pattern, s.m);
    out.prob[static_cast<std::size_t>(cls)] += branch.squaredNorm();
    out.branches.emplace_back(std::move(branch), commitment.layout, /*sub=*/true);
    out.branch_class.push_back(cls);
  }
  return out;
}

ExperimentOutput ideal_experiment(const CommitterStrategy& c, const SchemeInstance& s) {
  const int b = c.announced_bit;
  const bool has_w = c.initial.layout.has("W");
  ExperimentOutput out = empty_output(residual_layout(c.initial));
  ExtractorResult ext = run_extractor(c.initial, s);
  for (std::size_t n = 0; n < ext.branches.size(); ++n) {
    const PureState& branch_state = ext.branches[n];
    const double branch_mass = branch_state.norm2();
    if (branch_mass < 1e-30) continue;
    PureState chi = qla::apply(c.reveal, branch_state);
    double p_acc;
    Mat res_acc;
    if (has_w) {
      VerifyResult v = verify_with_residual(chi, b, s);
      p_acc = v.p_accept;
      res_acc = v.res_accept;
    } else {
      p_acc = verify_prob(chi, b, s);
      res_acc = Mat::Constant(1, 1, p_acc);
    }
    const int bstar = ext.branch_class[n];
    const std::size_t slot =
        bstar == b ? static_cast<std::size_t>(b) : static_cast<std::size_t>(ExperimentOutput::kFail);
    out.prob[slot] += p_acc;
    out.residual[slot].mat += res_acc;
    out.prob[ExperimentOutput::kBot] += branch_mass - p_acc;
    out.residual[ExperimentOutput::kBot].mat += w_trace(chi) - res_acc;
  }
  return out;
}

BindingReport binding_report(const CommitterStrategy& c, const SchemeInstance& s) {
  BindingReport r;
  r.real = real_experiment(c, s);
  r.ideal = ideal_experiment(c, s);
  r.real.check();
  r.ideal.check();
  r.gap = blockwise_td(r.real, r.ideal);
  r.fail_mass = r.ideal.prob[ExperimentOutput::kFail];
  r.epsilon = s.epsilon;
  r.bound = std::exp2(-s.m / 3.0) + 2.0 * s.epsilon;
  return r;
}

double binding_gap(const CommitterStrategy& c, const SchemeInstance& s) {
  return binding_report(c, s).gap;
}

AveragedBindingReport binding_gap_averaged(
    const std::function<CommitterStrategy(const SchemeInstance&)>& make_strategy,
    const SchemeParams& p) {
  p.check();
  KWiseFamily fam = p.family();
  auto count = fam.key_count();
  if (!count || *count > caps().enum_budget) throw cap_exceeded("key space exceeds the enumeration budget");
  AveragedBindingReport rep;
  ExperimentOutput real_avg, ideal_avg;
  bool first = true;
  const double w = 1.0 / static_cast<double>(*count);
  for (std::uint64_t ki = 0; ki < *count; ++ki) {
    SchemeInstance s = crqs_instance(p, fam.key_from_index(ki));
    CommitterStrategy c = make_strategy(s);
    ExperimentOutput real = real_experiment(c, s);
    ExperimentOutput ideal = ideal_experiment(c, s);
    if (first) {
      real_avg = empty_output(residual_layout(c.initial));
      ideal_avg = empty_output(residual_layout(c.initial));
      first = false;
    }
    for (std::size_t o = 0; o < 4; ++o) {
      real_avg.prob[o] += w * real.prob[o];
      real_avg.residual[o].mat += w * real.residual[o].mat;
      ideal_avg.prob[o] += w * ideal.prob[o];
      ideal_avg.residual[o].mat += w * ideal.residual[o].mat;
    }
    rep.epsilon_avg += w * s.epsilon;
    rep.epsilon_max = std::max(rep.epsilon_max, s.epsilon);
  }
  rep.gap = blockwise_td(real_avg, ideal_avg);
  rep.fail_mass = ideal_avg.prob[ExperimentOutput::kFail];
  rep.bound_avg = std::exp2(-p.m / 3.0) + 2.0 * rep.epsilon_avg;
  return rep;
}

SumBindingProbe sum_binding_probe(const CommitterStrategy& c0, const CommitterStrategy& c1,
                                  const SchemeInstance& s) {
  if (c0.announced_bit != 0 || c1.announced_bit != 1)
    throw std::invalid_argument("probe expects a (reveal-0, reveal-1) strategy pair");
  if ((c0.initial.amps - c1.initial.amps).cwiseAbs().maxCoeff() > tol().structural)
    throw std::invalid_argument("strategy pair must share the commit phase");
  SumBindingProbe probe;
  probe.p0 = real_experiment(c0, s).prob[0];
  probe.p1 = real_experiment(c1, s).prob[1];
  probe.gap0 = binding_gap(c0, s);
  probe.gap1 = binding_gap(c1, s);
  return probe;
}

// --- hiding ---

namespace {

struct SparseAmps {
  std::vector<std::pair<std::uint64_t, double>> entries;
  int qubits = 0;
};

SparseAmps sparse_psi0(const FunctionTable& h, int y_width) {
  SparseAmps s;
  s.qubits = h.n_out + y_width;
  const double a = 1.0 / std::sqrt(static_cast<double>(h.table.size()));
  for (std::uint64_t x = 0; x < h.table.size(); ++x)
    s.entries.emplace_back(h.table[x] | (x << h.n_out), a);
  return s;
}

SparseAmps sparse_psi1(int n_out, int y_width) {
  SparseAmps s;
  s.qubits = n_out + y_width;
  const std::uint64_t n = std::uint64_t{1} << n_out;
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t y = 0; y < n; ++y) s.entries.emplace_back(y | (y << n_out), a);
  return s;
}

SparseAmps sparse_tensor(const SparseAmps& a, const SparseAmps& b) {
  SparseAmps out;
  out.qubits = a.qubits + b.qubits;
  out.entries.reserve(a.entries.size() * b.entries.size());
  for (const auto& [bi, bv] : b.entries)
    for (const auto& [ai, av] : a.entries) out.entries.emplace_back(ai | (bi << a.qubits), av * bv);
  return out;
}

// diagonal of xi_b^{(x)m}
SparseAmps xi_diag(const ClassicalDist& d, int b, int m) {
  SparseAmps out;
  out.qubits = 0;
  out.entries = {{0, 1.0}};
  const double unif = 1.0 / static_cast<double>(d.p.size());
  for (int i = 0; i < m; ++i) {
    SparseAmps copy;
    copy.qubits = d.n_out;
    for (std::uint64_t y = 0; y < d.p.size(); ++y) {
      const double py = b == 0 ? d.p[static_cast<std::size_t>(y)] : unif;
      if (py > 0) copy.entries.emplace_back(y, py);
    }
    out = sparse_tensor(out, copy);
  }
  return out;
}

// adversary copies psi_k^{(x)t}; compressed mode drops the psi1 blocks and
// narrows each Y register to the lambda-bit padded image
SparseAmps adversary_copies(const FunctionTable& h, int m, int t, bool compressed) {
  const int yw = compressed ? h.lambda_in : efi::pad_width(h.lambda_in, h.n_out);
  SparseAmps acc;
  acc.qubits = 0;
  acc.entries = {{0, 1.0}};
  for (int j = 0; j < t; ++j) {
    for (int i = 0; i < m; ++i) acc = sparse_tensor(acc, sparse_psi0(h, yw));
    if (!compressed)
      for (int i = 0; i < m; ++i) acc = sparse_tensor(acc, sparse_psi1(h.n_out, efi::pad_width(h.lambda_in, h.n_out)));
  }
  return acc;
}

using RealMat = Eigen::MatrixXd;

void accumulate_view(RealMat& acc, const FunctionTable& h, int b, int m, int t, bool compressed,
                     double weight) {
  SparseAmps copies = adversary_copies(h, m, t, compressed);
  SparseAmps diag = xi_diag(efi::dist_from_hash(h), b, m);
  for (const auto& [di, dv] : diag.entries) {
    const double wd = weight * dv;
    for (const auto& [i, ai] : copies.entries) {
      const std::uint64_t row = i | (di << copies.qubits);
      for (const auto& [j, aj] : copies.entries)
        acc(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j | (di << copies.qubits))) +=
            wd * ai * aj;
    }
  }
}

int view_qubits(const SchemeParams& p, bool compressed) {
  const int yw = compressed ? p.lambda : efi::pad_width(p.lambda, p.n_out);
  const int per_copy = compressed ? p.m * (p.n_out + yw)
                                  : p.m * (p.n_out + yw) + p.m * (p.n_out + efi::pad_width(p.lambda, p.n_out));
  return p.t * per_copy + p.m * p.n_out;
}

void for_each_average(const SchemeParams& p, Averaging avg,
                      const std::function<void(const FunctionTable&, double)>& visit) {
  if (avg == Averaging::family) {
    KWiseFamily fam = p.family();
    auto count = fam.key_count();
    if (!count || *count > caps().enum_budget)
      throw cap_exceeded("family key space exceeds the enumeration budget");
    const double w = 1.0 / static_cast<double>(*count);
    for (std::uint64_t ki = 0; ki < *count; ++ki) visit(fam.materialize(fam.key_from_index(ki)), w);
  } else {
    const double w = 1.0 / static_cast<double>(function_space_size(p.lambda, p.n_out));
    enumerate_functions(p.lambda, p.n_out, [&](const FunctionTable& h) { visit(h, w); });
  }
}

RegisterLayout full_view_layout(const SchemeParams& p) {
  std::vector<RegisterLayout::Entry> regs;
  const int yw = efi::pad_width(p.lambda, p.n_out);
  for (int j = 1; j <= p.t; ++j) {
    for (int i = 1; i <= p.m; ++i) {
      regs.push_back({"T" + std::to_string(j) + "X" + std::to_string(i), p.n_out});
      regs.push_back({"T" + std::to_string(j) + "Y" + std::to_string(i), yw});
    }
    for (int i = 1; i <= p.m; ++i) {
      regs.push_back({"T" + std::to_string(j) + "U" + std::to_string(i), p.n_out});
      regs.push_back({"T" + std::to_string(j) + "V" + std::to_string(i), yw});
    }
  }
  for (int i = 1; i <= p.m; ++i) regs.push_back({"C" + std::to_string(i), p.n_out});
  return RegisterLayout(std::move(regs));
}

}  // namespace

DensityOp hiding_view(const SchemeParams& p, int b, Averaging avg) {
  p.check();
  RegisterLayout layout = full_view_layout(p);
  require_dense_cap(layout.total_qubits());
  const auto d = static_cast<Eigen::Index>(layout.dim());
  RealMat acc = RealMat::Zero(d, d);
  for_each_average(p, avg,
                   [&](const FunctionTable& h, double w) { accumulate_view(acc, h, b, p.m, p.t, false, w); });
  return DensityOp(acc.cast<cplx>(), std::move(layout));
}

double hiding_advantage(const SchemeParams& p, Averaging avg) {
  p.check();
  const int qubits = view_qubits(p, true);
  require_dense_cap(qubits);
  const auto d = Eigen::Index{1} << qubits;
  RealMat delta = RealMat::Zero(d, d);
  for_each_average(p, avg, [&](const FunctionTable& h, double w) {
    accumulate_view(delta, h, 0, p.m, p.t, true, w);
    accumulate_view(delta, h, 1, p.m, p.t, true, -w);
  });
  Eigen::SelfAdjointEigenSolver<RealMat> es(delta, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double hiding_advantage_sampled(const SchemeParams& p, int trials, std::uint64_t seed) {
  p.check();
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const int qubits = view_qubits(p, true);
  require_dense_cap(qubits);
  const auto d = Eigen::Index{1} << qubits;
  RealMat delta = RealMat::Zero(d, d);
  std::mt19937_64 rng(seed);
  KWiseFamily fam = p.family();
  const double w = 1.0 / static_cast<double>(trials);
  for (int i = 0; i < trials; ++i) {
    FunctionTable h = fam.materialize(fam.key_random(rng));
    accumulate_view(delta, h, 0, p.m, p.t, true, w);
    accumulate_view(delta, h, 1, p.m, p.t, true, -w);
  }
  Eigen::SelfAdjointEigenSolver<RealMat> es(delta, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

ZhandryReport zhandry_check(const SchemeParams& p, int b, double tolerance) {
  p.check();
  ZhandryReport rep;
  RegisterLayout layout = full_view_layout(p);
  require_dense_cap(layout.total_qubits());
  const auto d = static_cast<Eigen::Index>(layout.dim());
  RealMat delta = RealMat::Zero(d, d);
  KWiseFamily fam = p.family();
  rep.family_keys = fam.key_count().value_or(0);
  rep.tables = function_space_size(p.lambda, p.n_out);
  for_each_average(p, Averaging::family,
                   [&](const FunctionTable& h, double w) { accumulate_view(delta, h, b, p.m, p.t, false, w); });
  for_each_average(p, Averaging::all_functions,
                   [&](const FunctionTable& h, double w) { accumulate_view(delta, h, b, p.m, p.t, false, -w); });
  // ||delta||_1 <= sqrt(dim) ||delta||_F gives a rigorous certificate; only
  // fall back to the full spectrum when it cannot settle the question
  rep.td_upper = 0.5 * std::sqrt(static_cast<double>(d)) * delta.norm();
  if (rep.td_upper <= tolerance) {
    rep.pass = true;
  } else {
    Eigen::SelfAdjointEigenSolver<RealMat> es(delta, Eigen::EigenvaluesOnly);
    rep.exact_td = 0.5 * es.eigenvalues().cwiseAbs().sum();
    rep.pass = *rep.exact_td <= tolerance;
  }
  return rep;
}

void for_each_table_class(const SchemeParams& p,
                          const std::function<void(const FunctionTable&, double weight)>& visit) {
  p.check();
  if (p.k() >= (1 << p.lambda)) {
    // degree covers the whole domain: interpolation makes every table equally
    // likely, so enumerate the function space directly
    const double w = 1.0 / static_cast<double>(function_space_size(p.lambda, p.n_out));
    enumerate_functions(p.lambda, p.n_out, [&](const FunctionTable& t) { visit(t, w); });
    return;
  }
  KWiseFamily fam = p.family();
  auto count = fam.key_count();
  if (!count || *count > caps().enum_budget) throw cap_exceeded("key space exceeds the enumeration budget");
  std::map<std::vector<std::uint32_t>, std::uint64_t> classes;
  for (std::uint64_t ki = 0; ki < *count; ++ki) ++classes[fam.materialize(fam.key_from_index(ki)).table];
  for (const auto& [table_vals, size] : classes)
    visit(FunctionTable{p.lambda, p.n_out, table_vals},
          static_cast<double>(size) / static_cast<double>(*count));
}

double prg_reference_bound(const SchemeParams& p) {
  const int yw = efi::pad_width(p.lambda, p.n_out);
  const double s_qubits = p.t * p.m * (2 * p.n_out + 2 * yw) + p.m * p.n_out;
  const double n = std::exp2(p.lambda);
  return 16.0 * std::sqrt(2.0) * std::cbrt(s_qubits / n);
}

}  // namespace qcommit
