#include "qcommit/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qcommit/tolerances.hpp"

namespace qcommit {

namespace {

const std::vector<std::string> kKeepC{"C"};

void require_norm(const PureState& s) {
  if (std::abs(s.norm2() - 1.0) > tol().structural)
    throw std::invalid_argument("scheme state is not normalized");
}

}  // namespace

void CrsScheme::check() const {
  if (psi0.size() != key_prob.size() || psi1.size() != key_prob.size())
    throw std::invalid_argument("per-key state lists must match the key distribution");
  double sum = 0;
  for (double p : key_prob) {
    if (p < 0) throw std::invalid_argument("negative key probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("key probabilities do not sum to 1");
  for (std::size_t k = 0; k < key_prob.size(); ++k) {
    require_norm(psi0[k]);
    require_norm(psi1[k]);
    if (!(psi0[k].layout == psi1[k].layout)) throw std::invalid_argument("state layouts differ");
    if (!psi0[k].layout.has("C") || !psi0[k].layout.has("R"))
      throw std::invalid_argument("scheme states need registers C and R");
  }
}

void CorrelatedScheme::check() const {
  if (psi0.size() != nx() || psi1.size() != nx())
    throw std::invalid_argument("per-x state lists must match the joint distribution");
  if (lambda0.size() != ny() || lambda1.size() != ny())
    throw std::invalid_argument("per-y POVM lists must match the joint distribution");
  double sum = 0;
  for (const auto& row : joint) {
    if (row.size() != ny()) throw std::invalid_argument("ragged joint distribution");
    for (double p : row) {
      if (p < 0) throw std::invalid_argument("negative joint probability");
      sum += p;
    }
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("joint probabilities do not sum to 1");
  for (const auto& s : psi0) require_norm(s);
  for (const auto& s : psi1) require_norm(s);
  for (const auto* elems : {&lambda0, &lambda1})
    for (const Mat& l : *elems) {
      if ((l - l.adjoint()).cwiseAbs().maxCoeff() > tol().structural)
        throw std::invalid_argument("POVM element is not Hermitian");
      Eigen::SelfAdjointEigenSolver<Mat> es(l, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -tol().structural ||
          es.eigenvalues().maxCoeff() > 1.0 + tol().structural)
        throw std::invalid_argument("POVM element is not between 0 and I");
    }
}

namespace attacks {

CrsHidingResult crs_hiding_attack(const CrsScheme& s) {
  s.check();
  CrsHidingResult out;
  for (std::size_t k = 0; k < s.key_prob.size(); ++k) {
    auto rho0 = qla::partial_trace(s.psi0[k], kKeepC);
    auto rho1 = qla::partial_trace(s.psi1[k], kKeepC);
    // the per-key Helstrom projector attains the trace distance exactly
    auto meas = qla::helstrom_three_outcome(rho0, rho1);
    const double td = ((meas.pi0 * (rho0.mat - rho1.mat)).trace()).real();
    out.per_key_td.push_back(td);
    out.advantage += s.key_prob[k] * td;
  }
  return out;
}

CrsBindingResult crs_binding_attack(const CrsScheme& s) {
  s.check();
  CrsBindingResult out;
  const std::vector<std::string> act{"R"};
  for (std::size_t k = 0; k < s.key_prob.size(); ++k) {
    auto rho0 = qla::partial_trace(s.psi0[k], kKeepC);
    auto rho1 = qla::partial_trace(s.psi1[k], kKeepC);
    const double f = qla::fidelity(rho0, rho1);
    auto uh = qla::uhlmann_unitary(s.psi0[k], s.psi1[k], act);
    PureState rotated = qla::apply(uh.unitary, s.psi0[k]);
    const double achieved = std::norm(s.psi1[k].amps.dot(rotated.amps));
    out.per_key_fidelity.push_back(f);
    out.per_key_achieved.push_back(achieved);
    out.p1 += s.key_prob[k] * achieved;
  }
  return out;
}

CrsTradeoffResult crs_tradeoff(const CrsScheme& s) {
  CrsTradeoffResult out;
  out.hiding_advantage = crs_hiding_attack(s).advantage;
  out.binding_success = crs_binding_attack(s).p1;
  out.residual = out.binding_success - (1.0 - out.hiding_advantage);
  out.holds = out.residual >= -tol().structural;
  return out;
}

CorrelationResult epsilon_correlation(const std::vector<std::vector<double>>& joint) {
  if (joint.empty()) throw std::invalid_argument("empty joint distribution");
  CorrelationResult out;
  const std::size_t ny = joint[0].size();
  out.guess.resize(ny);
  for (std::size_t y = 0; y < ny; ++y) {
    double best = -1;
    std::size_t bx = 0;
    for (std::size_t x = 0; x < joint.size(); ++x)
      if (joint[x][y] > best + 1e-15) {
        best = joint[x][y];
        bx = x;
      }
    out.guess[y] = bx;
    out.epsilon += best;
  }
  return out;
}

double correlated_threshold() { return (5.0 - 2.0 * std::sqrt(2.0)) / 17.0; }

CorrelatedAttackResult correlated_attack(const CorrelatedScheme& s, double tolerance) {
  s.check();
  CorrelatedAttackResult out;
  const std::size_t nx = s.nx(), ny = s.ny();
  std::vector<double> ex(nx, 0.0), fy(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      ex[x] += s.joint[x][y];
      fy[y] += s.joint[x][y];
    }
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) out.eps_product += std::abs(s.joint[x][y] - ex[x] * fy[y]);

  // committer superposition over x on a fresh register A
  int a_qubits = 1;
  while ((std::size_t{1} << a_qubits) < nx) ++a_qubits;
  RegisterLayout a_layout = RegisterLayout::single("A", a_qubits);
  auto build_phi = [&](const std::vector<PureState>& states) {
    RegisterLayout full = states[0].layout.concat(a_layout);
    Vec v = Vec::Zero(static_cast<Eigen::Index>(full.dim()));
    const int base = states[0].layout.total_qubits();
    for (std::size_t x = 0; x < nx; ++x) {
      const double w = std::sqrt(ex[x]);
      for (Eigen::Index i = 0; i < states[x].amps.size(); ++i)
        v[i + (static_cast<Eigen::Index>(x) << base)] += w * states[x].amps[i];
    }
    return PureState(std::move(v), full);
  };
  PureState phi0 = build_phi(s.psi0);
  PureState phi1 = build_phi(s.psi1);
  const std::vector<std::string> act{"A", "R"};
  auto uh = qla::uhlmann_unitary(phi0, phi1, act);
  PureState chi = qla::apply(uh.unitary, phi0);

  std::vector<std::string> scheme_regs;
  for (const auto& e : s.psi0[0].layout.entries()) scheme_regs.push_back(e.name);
  auto povm_value = [&](const PureState& state, const Mat& elem) {
    Vec w = qla::apply_on_subset(elem, state.amps, state.layout, scheme_regs);
    return state.amps.dot(w).real();
  };
  for (std::size_t y = 0; y < ny; ++y) {
    double qy = 0;
    for (std::size_t x = 0; x < nx; ++x) qy += s.joint[x][y];
    out.p0 += qy * povm_value(phi0, s.lambda0[y]);
    out.p1 += qy * povm_value(chi, s.lambda1[y]);
  }

  // optimal distinguisher on the receiver's commitment-phase view (y, C)
  const std::vector<std::string> keep{"C"};
  for (std::size_t y = 0; y < ny; ++y) {
    Mat block;
    bool first = true;
    for (std::size_t x = 0; x < nx; ++x) {
      Mat diff = qla::partial_trace(s.psi0[x], keep).mat - qla::partial_trace(s.psi1[x], keep).mat;
      if (first) {
        block = s.joint[x][y] * diff;
        first = false;
      } else {
        block += s.joint[x][y] * diff;
      }
    }
    out.hiding_advantage += qla::half_trace_norm_hermitian(block);
  }

  out.bound_p0 = 1.0 - 2.0 * out.eps_product;
  out.bound_p1 =
      1.0 - std::sqrt(std::max(0.0, 2.0 * out.eps_product - out.eps_product * out.eps_product)) -
      2.0 * out.eps_product;
  out.pass_p0 = out.p0 >= out.bound_p0 - tolerance;
  out.pass_p1 = out.p1 >= out.bound_p1 - tolerance;
  return out;
}

UnboundedCopyResult unbounded_copy_attack(const SchemeParams& p, double td_threshold, double slack) {
  p.check();
  KWiseFamily fam = p.family();
  auto count = fam.key_count();
  if (!count || *count > caps().enum_budget) throw cap_exceeded("key space exceeds the enumeration budget");

  // group keys by their materialized table; exact overlaps make the
  // lexicographically-first member of each group the identified key
  std::map<std::vector<std::uint32_t>, std::uint64_t> class_size;
  for (std::uint64_t ki = 0; ki < *count; ++ki) ++class_size[fam.materialize(fam.key_from_index(ki)).table];

  UnboundedCopyResult out;
  out.key_identification = 1.0;  // overlap 1 within a class, < 1 - 1/r across
  const double total = static_cast<double>(*count);
  for (const auto& [table_vals, size] : class_size) {
    FunctionTable table{p.lambda, p.n_out, table_vals};
    SchemeInstance s = crqs_instance(p, table);
    const double w = static_cast<double>(size) / total;

    DensityOp sigma0(s.xi0.mat, RegisterLayout::single(commit_reg(1), p.n_out));
    DensityOp sigma1(s.xi1.mat, RegisterLayout::single(commit_reg(1), p.n_out));
    for (int i = 2; i <= p.m; ++i) {
      sigma0 = qla::tensor(sigma0, DensityOp(s.xi0.mat, RegisterLayout::single(commit_reg(i), p.n_out)));
      sigma1 = qla::tensor(sigma1, DensityOp(s.xi1.mat, RegisterLayout::single(commit_reg(i), p.n_out)));
    }
    out.avg_td += w * qla::trace_distance(sigma0, sigma1);

    // committer attack: since the class is exact, the identified key prepares
    // the same states the receiver verifies against
    out.p0 += w * real_experiment(honest_strategy(s, 0), s).prob[0];
    out.p1 += w * real_experiment(uhlmann_strategy(s, 0, 1), s).prob[1];

    // hiding attack with the identified key's Helstrom measurement
    auto meas = qla::helstrom_three_outcome(sigma0, sigma1);
    out.hiding_advantage += w * ((meas.pi0 * (sigma0.mat - sigma1.mat)).trace()).real();
  }
  if (out.avg_td < td_threshold) {
    out.binding_broken = out.p0 + out.p1 >= 2.0 - std::sqrt(2.0 * out.avg_td) - slack;
  } else {
    out.hiding_attacked = out.hiding_advantage >= out.avg_td - slack;
  }
  return out;
}

}  // namespace attacks
}  // namespace qcommit
