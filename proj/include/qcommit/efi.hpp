#pragma once

#include <string>
#include <vector>

#include "qcommit/hashfam.hpp"
#include "qcommit/states.hpp"

namespace qcommit {

// Probability distribution over {0,1}^n_out.
struct ClassicalDist {
  int n_out = 0;
  std::vector<double> p;  // length 2^n_out

  void check() const;  // nonnegative, sums to 1 within 1e-12
  std::size_t support_size() const;
};

// xi0 = image mixture (diagonal), xi1 = maximally mixed, both on n_out qubits.
struct EfiPair {
  DensityOp xi0;
  DensityOp xi1;
};

struct EfiMetrics {
  double td;        // (1/2) sum_y |D(y) - 2^-n|
  double fidelity;  // (sum_y sqrt(D(y) 2^-n))^2
};

namespace efi {

// D(y) = |{x : H(x)=y}| / 2^lambda_in
ClassicalDist dist_from_hash(const FunctionTable& h);
ClassicalDist dist_from_hash(const KWiseFamily& family, const HashKey& key);

// |supp(D)| / 2^n_out
double sparseness(const ClassicalDist& d);

EfiPair pair_from_dist(const ClassicalDist& d, const std::string& reg = "X");

EfiMetrics efi_metrics(const EfiPair& pair);
EfiMetrics metrics_from_dist(const ClassicalDist& d);

// The protocol's purified states on registers (X: n_out qubits, Y: pad
// qubits). b=0 holds sum_x |H(x)>|pad(x)> / 2^(lambda/2); b=1 the maximally
// entangled sum_y |y>|pad(y)> / 2^(n_out/2). The Y width is
// max(lambda_in, n_out) so the padding embeds both x and y injectively.
int pad_width(int lambda_in, int n_out);
PureState protocol_state(const FunctionTable& h, int b, const std::string& x_reg = "X",
                         const std::string& y_reg = "Y");
PureState protocol_state(const KWiseFamily& family, const HashKey& key, int b,
                         const std::string& x_reg = "X", const std::string& y_reg = "Y");

}  // namespace efi
}  // namespace qcommit
