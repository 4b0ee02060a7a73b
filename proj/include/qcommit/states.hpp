#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qcommit/registers.hpp"

namespace qcommit {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Amplitude vector over a named register layout. Unit norm unless the
// subnormalized flag marks an explicit measurement branch.
struct PureState {
  Vec amps;
  RegisterLayout layout;
  bool subnormalized = false;

  PureState() = default;
  PureState(Vec a, RegisterLayout l, bool sub = false);

  double norm2() const { return amps.squaredNorm(); }
  void check() const;  // throws when invariants fail
};

// Hermitian PSD operator, unit trace unless flagged subnormalized.
struct DensityOp {
  Mat mat;
  RegisterLayout layout;
  bool subnormalized = false;

  DensityOp() = default;
  DensityOp(Mat m, RegisterLayout l, bool sub = false);

  double trace() const { return mat.trace().real(); }
  void check() const;

  static DensityOp from_pure(const PureState& psi);
  static DensityOp maximally_mixed(RegisterLayout l);
};

// Square operator on a declared register subset of some layout.
struct Unitary {
  Mat mat;
  std::vector<std::string> acts_on;

  void check() const;  // U†U = I within tolerance
};

struct Projector {
  Mat mat;
  std::vector<std::string> acts_on;

  void check() const;  // idempotent Hermitian within tolerance
};

// {Π0, Π1, Π⊥} with Π0+Π1+Π⊥ = I on a register subset.
struct ThreeOutcomeMeasurement {
  Mat pi0, pi1, pi_bot;
  std::vector<std::string> acts_on;

  void check() const;
};

}  // namespace qcommit
