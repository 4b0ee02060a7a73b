#include "qcommit/qla.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcommit/tolerances.hpp"

namespace qcommit {

void require_state_cap(int qubits) {
  if (qubits > caps().state_qubits)
    throw cap_exceeded("pure state on " + std::to_string(qubits) + " qubits exceeds the cap of " +
                       std::to_string(caps().state_qubits));
}

void require_dense_cap(int qubits) {
  if (qubits > caps().dense_qubits)
    throw cap_exceeded("dense operator on " + std::to_string(qubits) + " qubits exceeds the cap of " +
                       std::to_string(caps().dense_qubits));
}

namespace qla {

namespace {

void require_same_layout(const RegisterLayout& a, const RegisterLayout& b) {
  if (!(a == b)) throw std::invalid_argument("operands live on different register layouts");
}

std::vector<std::string> names_of(const RegisterLayout& l) {
  std::vector<std::string> n;
  n.reserve(l.entries().size());
  for (const auto& e : l.entries()) n.push_back(e.name);
  return n;
}

}  // namespace

PureState tensor(const PureState& a, const PureState& b) {
  RegisterLayout combined = a.layout.concat(b.layout);
  require_state_cap(combined.total_qubits());
  const auto da = a.amps.size();
  const auto db = b.amps.size();
  Vec out(da * db);
  for (Eigen::Index ib = 0; ib < db; ++ib)
    for (Eigen::Index ia = 0; ia < da; ++ia) out[ia + (ib << a.layout.total_qubits())] = a.amps[ia] * b.amps[ib];
  return PureState(std::move(out), std::move(combined), a.subnormalized || b.subnormalized);
}

DensityOp tensor(const DensityOp& a, const DensityOp& b) {
  RegisterLayout combined = a.layout.concat(b.layout);
  require_dense_cap(combined.total_qubits());
  const auto da = a.mat.rows();
  const auto db = b.mat.rows();
  Mat out(da * db, da * db);
  const int sh = a.layout.total_qubits();
  for (Eigen::Index ib = 0; ib < db; ++ib)
    for (Eigen::Index jb = 0; jb < db; ++jb)
      for (Eigen::Index ia = 0; ia < da; ++ia)
        for (Eigen::Index ja = 0; ja < da; ++ja)
          out(ia + (ib << sh), ja + (jb << sh)) = a.mat(ia, ja) * b.mat(ib, jb);
  return DensityOp(std::move(out), std::move(combined), a.subnormalized || b.subnormalized);
}

DensityOp partial_trace(const DensityOp& op, std::span<const std::string> keep) {
  SubsetIndexer idx(op.layout, keep);
  RegisterLayout out_layout = op.layout.sublayout(keep);
  const auto dk = static_cast<Eigen::Index>(idx.subset_dim());
  const auto dt = static_cast<Eigen::Index>(idx.rest_dim());
  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx s = 0;
      for (Eigen::Index t = 0; t < dt; ++t) s += op.mat(idx.fuse(i, t), idx.fuse(j, t));
      out(i, j) = s;
    }
  return DensityOp(std::move(out), std::move(out_layout), op.subnormalized);
}

DensityOp partial_trace(const PureState& psi, std::span<const std::string> keep) {
  SubsetIndexer idx(psi.layout, keep);
  RegisterLayout out_layout = psi.layout.sublayout(keep);
  const auto dk = static_cast<Eigen::Index>(idx.subset_dim());
  require_dense_cap(out_layout.total_qubits());
  // ρ[i,j] = Σ_t ψ[i,t] ψ*[j,t]; single pass over the amplitude vector per row
  // block would still be O(dk² dt) so gather columns first.
  const auto dt = static_cast<Eigen::Index>(idx.rest_dim());
  Mat cols(dk, dt);
  for (Eigen::Index t = 0; t < dt; ++t)
    for (Eigen::Index i = 0; i < dk; ++i) cols(i, t) = psi.amps[static_cast<Eigen::Index>(idx.fuse(i, t))];
  Mat out = cols * cols.adjoint();
  return DensityOp(std::move(out), std::move(out_layout), psi.subnormalized);
}

Mat psd_sqrt(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol().structural) throw std::invalid_argument("operator is not PSD");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double half_trace_norm_hermitian(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityOp& rho, const DensityOp& sigma) {
  require_same_layout(rho.layout, sigma.layout);
  // (Tr|√ρ√σ|)²; the singular-value form keeps sqrt-amplified noise in the
  // near-kernel eigenvalues from polluting the sum.
  Mat prod = psd_sqrt(rho.mat) * psd_sqrt(sigma.mat);
  Eigen::JacobiSVD<Mat> svd(prod);
  const double s = svd.singularValues().sum();
  return std::min(s * s, 1.0 + tol().structural);
}

double fidelity(const PureState& a, const PureState& b) {
  require_same_layout(a.layout, b.layout);
  return std::norm(a.amps.dot(b.amps));
}

double trace_distance(const DensityOp& rho, const DensityOp& sigma) {
  require_same_layout(rho.layout, sigma.layout);
  return half_trace_norm_hermitian(rho.mat - sigma.mat);
}

double trace_distance(const PureState& a, const PureState& b) {
  require_same_layout(a.layout, b.layout);
  if (!a.subnormalized && !b.subnormalized) {
    // √(1−|⟨a|b⟩|²) for unit vectors
    const double f = std::norm(a.amps.dot(b.amps));
    return std::sqrt(std::max(0.0, 1.0 - f));
  }
  require_dense_cap(a.layout.total_qubits());
  return half_trace_norm_hermitian(a.amps * a.amps.adjoint() - b.amps * b.amps.adjoint());
}

PureState purify(const DensityOp& rho, const std::string& purifier_name) {
  if (rho.subnormalized) throw std::invalid_argument("purify expects a unit-trace operator");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const int n = rho.layout.total_qubits();
  RegisterLayout full = rho.layout.concat(RegisterLayout::single(purifier_name, n));
  require_state_cap(full.total_qubits());
  const auto d = rho.mat.rows();
  Vec amps = Vec::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double ev = std::max(es.eigenvalues()[i], 0.0);
    if (ev <= 0) continue;
    const double root = std::sqrt(ev);
    for (Eigen::Index j = 0; j < d; ++j) amps[j + (i << n)] += root * es.eigenvectors()(j, i);
  }
  return PureState(std::move(amps), std::move(full));
}

UhlmannResult uhlmann_unitary(const PureState& psi0, const PureState& psi1,
                              std::span<const std::string> act_on) {
  require_same_layout(psi0.layout, psi1.layout);
  SubsetIndexer idx(psi0.layout, act_on);
  const auto da = static_cast<Eigen::Index>(idx.subset_dim());
  const auto dr = static_cast<Eigen::Index>(idx.rest_dim());
  // M[a,a'] = Σ_b ψ0[a,b] ψ1*[a',b]; then ⟨ψ1|(U⊗I)|ψ0⟩ = Tr(U M).
  Mat m = Mat::Zero(da, da);
  for (Eigen::Index b = 0; b < dr; ++b)
    for (Eigen::Index a0 = 0; a0 < da; ++a0) {
      const cplx v0 = psi0.amps[static_cast<Eigen::Index>(idx.fuse(a0, b))];
      if (v0 == cplx{0, 0}) continue;
      for (Eigen::Index a1 = 0; a1 < da; ++a1)
        m(a0, a1) += v0 * std::conj(psi1.amps[static_cast<Eigen::Index>(idx.fuse(a1, b))]);
    }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixV() * svd.matrixU().adjoint();
  Unitary result{std::move(u), std::vector<std::string>(act_on.begin(), act_on.end())};
  return UhlmannResult{std::move(result), svd.singularValues().sum()};
}

ThreeOutcomeMeasurement helstrom_three_outcome(const DensityOp& xi0, const DensityOp& xi1) {
  require_same_layout(xi0.layout, xi1.layout);
  Mat diff = xi0.mat - xi1.mat;
  if ((diff - diff.adjoint()).cwiseAbs().maxCoeff() > tol().structural)
    throw std::invalid_argument("helstrom requires Hermitian inputs");
  Eigen::SelfAdjointEigenSolver<Mat> es(diff);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const auto d = diff.rows();
  Mat pi0 = Mat::Zero(d, d), pi1 = Mat::Zero(d, d), pib = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double ev = es.eigenvalues()[i];
    Mat proj = es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    if (ev > tol().kernel_cut)
      pi0 += proj;
    else if (ev < -tol().kernel_cut)
      pi1 += proj;
    else
      pib += proj;
  }
  return ThreeOutcomeMeasurement{std::move(pi0), std::move(pi1), std::move(pib), names_of(xi0.layout)};
}

Vec apply_on_subset(const Mat& op, const Vec& amps, const RegisterLayout& layout,
                    std::span<const std::string> acts_on) {
  SubsetIndexer idx(layout, acts_on);
  const auto ds = static_cast<Eigen::Index>(idx.subset_dim());
  const auto dr = static_cast<Eigen::Index>(idx.rest_dim());
  if (op.rows() != ds || op.cols() != ds)
    throw std::invalid_argument("operator dimension does not match register subset");
  Vec out = Vec::Zero(amps.size());
  std::vector<Eigen::Index> fused(static_cast<std::size_t>(ds));
  for (Eigen::Index r = 0; r < dr; ++r) {
    for (Eigen::Index s = 0; s < ds; ++s) fused[static_cast<std::size_t>(s)] = static_cast<Eigen::Index>(idx.fuse(s, r));
    for (Eigen::Index s = 0; s < ds; ++s) {
      cplx acc = 0;
      for (Eigen::Index s2 = 0; s2 < ds; ++s2) {
        const cplx v = amps[fused[static_cast<std::size_t>(s2)]];
        if (v != cplx{0, 0}) acc += op(s, s2) * v;
      }
      out[fused[static_cast<std::size_t>(s)]] = acc;
    }
  }
  return out;
}

Mat embed(const Mat& op, const RegisterLayout& layout, std::span<const std::string> acts_on) {
  SubsetIndexer idx(layout, acts_on);
  const auto ds = static_cast<Eigen::Index>(idx.subset_dim());
  const auto dr = static_cast<Eigen::Index>(idx.rest_dim());
  if (op.rows() != ds || op.cols() != ds)
    throw std::invalid_argument("operator dimension does not match register subset");
  const auto d = static_cast<Eigen::Index>(layout.dim());
  require_dense_cap(layout.total_qubits());
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index r = 0; r < dr; ++r)
    for (Eigen::Index s = 0; s < ds; ++s)
      for (Eigen::Index s2 = 0; s2 < ds; ++s2)
        out(static_cast<Eigen::Index>(idx.fuse(s, r)), static_cast<Eigen::Index>(idx.fuse(s2, r))) = op(s, s2);
  return out;
}

PureState apply(const Unitary& u, const PureState& s) {
  Vec out = apply_on_subset(u.mat, s.amps, s.layout, u.acts_on);
  return PureState(std::move(out), s.layout, s.subnormalized);
}

MeasureResult measure_prob(const Projector& p, const PureState& s) {
  Vec branch = apply_on_subset(p.mat, s.amps, s.layout, p.acts_on);
  const double prob = branch.squaredNorm();
  return MeasureResult{prob, PureState(std::move(branch), s.layout, /*sub=*/true)};
}

MeasureResultDensity measure_prob(const Projector& p, const DensityOp& s) {
  Mat full = embed(p.mat, s.layout, p.acts_on);
  Mat branch = full * s.mat * full;
  const double prob = branch.trace().real();
  return MeasureResultDensity{prob, DensityOp(std::move(branch), s.layout, /*sub=*/true)};
}

}  // namespace qla
}  // namespace qcommit
