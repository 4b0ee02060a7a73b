#include "qcommit/states.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "qcommit/qla.hpp"
#include "qcommit/tolerances.hpp"

namespace qcommit {

PureState::PureState(Vec a, RegisterLayout l, bool sub)
    : amps(std::move(a)), layout(std::move(l)), subnormalized(sub) {
  if (amps.size() != static_cast<Eigen::Index>(layout.dim()))
    throw std::invalid_argument("amplitude vector length does not match layout dimension");
  require_state_cap(layout.total_qubits());
}

void PureState::check() const {
  if (!subnormalized && std::abs(norm2() - 1.0) > tol().structural)
    throw std::invalid_argument("pure state is not normalized");
  if (subnormalized && norm2() > 1.0 + tol().structural)
    throw std::invalid_argument("subnormalized branch exceeds unit norm");
}

DensityOp::DensityOp(Mat m, RegisterLayout l, bool sub)
    : mat(std::move(m)), layout(std::move(l)), subnormalized(sub) {
  if (mat.rows() != mat.cols() || mat.rows() != static_cast<Eigen::Index>(layout.dim()))
    throw std::invalid_argument("matrix dimension does not match layout");
  require_dense_cap(layout.total_qubits());
}

void DensityOp::check() const {
  if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol().structural)
    throw std::invalid_argument("density operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(mat, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol().structural)
    throw std::invalid_argument("density operator has a negative eigenvalue");
  if (!subnormalized && std::abs(trace() - 1.0) > tol().structural)
    throw std::invalid_argument("unit-trace density operator has trace != 1");
}

DensityOp DensityOp::from_pure(const PureState& psi) {
  require_dense_cap(psi.layout.total_qubits());
  return DensityOp(psi.amps * psi.amps.adjoint(), psi.layout, psi.subnormalized);
}

DensityOp DensityOp::maximally_mixed(RegisterLayout l) {
  const auto d = static_cast<Eigen::Index>(l.dim());
  return DensityOp(Mat::Identity(d, d) / static_cast<double>(d), std::move(l));
}

void Unitary::check() const {
  Mat should_be_id = mat.adjoint() * mat;
  should_be_id -= Mat::Identity(mat.rows(), mat.cols());
  if (should_be_id.cwiseAbs().maxCoeff() > tol().structural)
    throw std::invalid_argument("operator is not unitary");
}

void Projector::check() const {
  if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol().structural)
    throw std::invalid_argument("projector is not Hermitian");
  if ((mat * mat - mat).cwiseAbs().maxCoeff() > tol().structural)
    throw std::invalid_argument("projector is not idempotent");
}

void ThreeOutcomeMeasurement::check() const {
  for (const Mat* p : {&pi0, &pi1, &pi_bot}) {
    if ((*p - p->adjoint()).cwiseAbs().maxCoeff() > tol().structural)
      throw std::invalid_argument("measurement element is not Hermitian");
    if ((*p * *p - *p).cwiseAbs().maxCoeff() > tol().structural)
      throw std::invalid_argument("measurement element is not idempotent");
  }
  Mat sum = pi0 + pi1 + pi_bot - Mat::Identity(pi0.rows(), pi0.cols());
  if (sum.cwiseAbs().maxCoeff() > tol().structural)
    throw std::invalid_argument("measurement elements do not sum to identity");
}

}  // namespace qcommit
