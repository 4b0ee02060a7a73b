#include "qcommit/efi.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qcommit/qla.hpp"
#include "qcommit/tolerances.hpp"

namespace qcommit {

void ClassicalDist::check() const {
  if (p.size() != (std::size_t{1} << n_out)) throw std::invalid_argument("distribution table has wrong length");
  double sum = 0;
  for (double v : p) {
    if (v < 0) throw std::invalid_argument("negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("probabilities do not sum to 1");
}

std::size_t ClassicalDist::support_size() const {
  std::size_t n = 0;
  for (double v : p)
    if (v > 0) ++n;
  return n;
}

namespace efi {

ClassicalDist dist_from_hash(const FunctionTable& h) {
  ClassicalDist d;
  d.n_out = h.n_out;
  d.p.assign(std::size_t{1} << h.n_out, 0.0);
  const double w = 1.0 / static_cast<double>(h.table.size());
  for (std::uint32_t y : h.table) d.p[y] += w;
  return d;
}

ClassicalDist dist_from_hash(const KWiseFamily& family, const HashKey& key) {
  return dist_from_hash(family.materialize(key));
}

double sparseness(const ClassicalDist& d) {
  return static_cast<double>(d.support_size()) / static_cast<double>(d.p.size());
}

EfiPair pair_from_dist(const ClassicalDist& d, const std::string& reg) {
  d.check();
  RegisterLayout l = RegisterLayout::single(reg, d.n_out);
  const auto dim = static_cast<Eigen::Index>(l.dim());
  Mat xi0 = Mat::Zero(dim, dim);
  for (Eigen::Index y = 0; y < dim; ++y) xi0(y, y) = d.p[static_cast<std::size_t>(y)];
  return EfiPair{DensityOp(std::move(xi0), l), DensityOp::maximally_mixed(l)};
}

EfiMetrics efi_metrics(const EfiPair& pair) {
  const auto dim = pair.xi0.mat.rows();
  const double unif = 1.0 / static_cast<double>(dim);
  double td = 0, root_sum = 0;
  for (Eigen::Index y = 0; y < dim; ++y) {
    const double py = pair.xi0.mat(y, y).real();
    td += std::abs(py - unif);
    root_sum += std::sqrt(py * unif);
  }
  return EfiMetrics{0.5 * td, root_sum * root_sum};
}

EfiMetrics metrics_from_dist(const ClassicalDist& d) {
  const double unif = 1.0 / static_cast<double>(d.p.size());
  double td = 0, root_sum = 0;
  for (double py : d.p) {
    td += std::abs(py - unif);
    root_sum += std::sqrt(py * unif);
  }
  return EfiMetrics{0.5 * td, root_sum * root_sum};
}

int pad_width(int lambda_in, int n_out) { return std::max(lambda_in, n_out); }

PureState protocol_state(const FunctionTable& h, int b, const std::string& x_reg,
                         const std::string& y_reg) {
  const int yw = pad_width(h.lambda_in, h.n_out);
  RegisterLayout l({{x_reg, h.n_out}, {y_reg, yw}});
  require_state_cap(l.total_qubits());
  Vec amps = Vec::Zero(static_cast<Eigen::Index>(l.dim()));
  if (b == 0) {
    const double a = 1.0 / std::sqrt(static_cast<double>(h.table.size()));
    for (std::uint64_t x = 0; x < h.table.size(); ++x)
      amps[static_cast<Eigen::Index>(h.table[x] | (x << h.n_out))] += a;
  } else if (b == 1) {
    const std::uint64_t n = std::uint64_t{1} << h.n_out;
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::uint64_t y = 0; y < n; ++y) amps[static_cast<Eigen::Index>(y | (y << h.n_out))] = a;
  } else {
    throw std::invalid_argument("bit must be 0 or 1");
  }
  return PureState(std::move(amps), std::move(l));
}

PureState protocol_state(const KWiseFamily& family, const HashKey& key, int b,
                         const std::string& x_reg, const std::string& y_reg) {
  return protocol_state(family.materialize(key), b, x_reg, y_reg);
}

}  // namespace efi
}  // namespace qcommit
