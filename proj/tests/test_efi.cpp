#include "qcommit/efi.hpp"

#include <random>
#include <set>

#include "doctest.h"
#include "qcommit/qla.hpp"

using namespace qcommit;
using namespace qcommit::efi;

namespace {

FunctionTable constant_table(int lambda_in, int n_out, std::uint32_t c) {
  FunctionTable t{lambda_in, n_out, std::vector<std::uint32_t>(std::size_t{1} << lambda_in, c)};
  return t;
}

FunctionTable injective_table(int lambda_in, int n_out) {
  // x -> x works whenever lambda_in <= n_out
  FunctionTable t{lambda_in, n_out, {}};
  for (std::uint32_t x = 0; x < (1u << lambda_in); ++x) t.table.push_back(x);
  return t;
}

FunctionTable random_table(std::mt19937_64& g, int lambda_in, int n_out) {
  FunctionTable t{lambda_in, n_out, {}};
  for (std::uint32_t x = 0; x < (1u << lambda_in); ++x)
    t.table.push_back(static_cast<std::uint32_t>(g() & ((1u << n_out) - 1)));
  return t;
}

}  // namespace

TEST_CASE("dist_from_hash: constant and injective tables") {
  auto point = dist_from_hash(constant_table(2, 3, 5));
  CHECK(point.p[5] == doctest::Approx(1.0));
  CHECK(point.support_size() == 1);

  auto flat = dist_from_hash(injective_table(2, 4));
  CHECK(flat.support_size() == 4);
  for (int y = 0; y < 4; ++y) CHECK(flat.p[static_cast<std::size_t>(y)] == doctest::Approx(0.25));
}

TEST_CASE("dist_from_hash: random table matches direct counting") {
  auto g = std::mt19937_64(5);
  auto t = random_table(g, 2, 3);
  auto d = dist_from_hash(t);
  for (std::uint32_t y = 0; y < 8; ++y) {
    int count = 0;
    for (std::uint32_t x = 0; x < 4; ++x)
      if (t.table[x] == y) ++count;
    CHECK(d.p[y] == doctest::Approx(count / 4.0));
  }
  d.check();
}

TEST_CASE("sparseness: counts match") {
  CHECK(sparseness(dist_from_hash(injective_table(2, 4))) == doctest::Approx(0.25));
  CHECK(sparseness(dist_from_hash(constant_table(3, 4, 9))) == doctest::Approx(1.0 / 16.0));
  auto g = std::mt19937_64(6);
  auto t = random_table(g, 3, 4);
  auto d = dist_from_hash(t);
  std::set<std::uint32_t> image(t.table.begin(), t.table.end());
  CHECK(sparseness(d) == doctest::Approx(image.size() / 16.0));
}

TEST_CASE("efi_metrics: injective hash saturates the fidelity bound") {
  // lambda=2, n_out=4: fidelity is exactly 2^(lambda-n_out) = 0.25
  auto d = dist_from_hash(injective_table(2, 4));
  auto m = metrics_from_dist(d);
  CHECK(m.fidelity == doctest::Approx(0.25).epsilon(1e-12));
  auto pair = pair_from_dist(d);
  auto m2 = efi_metrics(pair);
  CHECK(m2.fidelity == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(m2.td == doctest::Approx(m.td).epsilon(1e-12));
}

TEST_CASE("efi_metrics: constant hash and uniform distribution") {
  auto point = dist_from_hash(constant_table(2, 3, 1));
  CHECK(metrics_from_dist(point).td == doctest::Approx(1.0 - 1.0 / 8.0).epsilon(1e-12));

  ClassicalDist unif{3, std::vector<double>(8, 1.0 / 8.0)};
  auto m = metrics_from_dist(unif);
  CHECK(m.td == doctest::Approx(0.0));
  CHECK(m.fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("efi_metrics agree with qla trace distance and fidelity") {
  auto g = std::mt19937_64(7);
  for (int rep = 0; rep < 10; ++rep) {
    auto d = dist_from_hash(random_table(g, 3, 3));
    auto pair = pair_from_dist(d);
    auto m = efi_metrics(pair);
    CHECK(m.td == doctest::Approx(qla::trace_distance(pair.xi0, pair.xi1)).epsilon(1e-12));
    CHECK(m.fidelity == doctest::Approx(qla::fidelity(pair.xi0, pair.xi1)).epsilon(1e-9));
  }
}

TEST_CASE("property: fidelity bound 2^(lambda-n_out) holds for every key, exhaustive") {
  for (int lambda = 1; lambda <= 3; ++lambda) {
    const int n_out = 4;
    KWiseFamily fam(lambda, n_out, 2);
    const double bound = std::pow(2.0, lambda - n_out);
    for (std::uint64_t ki = 0; ki < fam.key_count().value(); ++ki) {
      auto d = dist_from_hash(fam, fam.key_from_index(ki));
      CHECK(metrics_from_dist(d).fidelity <= bound + 1e-12);
    }
  }
}

TEST_CASE("protocol_state: b=1 is maximally entangled on the n_out block") {
  auto t = injective_table(2, 2);
  auto psi = protocol_state(t, 1);
  CHECK(psi.layout.total_qubits() == 4);
  const std::vector<std::string> keep{"X"};
  auto red = qla::partial_trace(psi, keep);
  CHECK((red.mat - Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("protocol_state: injective key has flat rank-2^lambda reduction") {
  auto psi = protocol_state(injective_table(1, 2), 0);
  const std::vector<std::string> keep{"X"};
  auto red = qla::partial_trace(psi, keep);
  Eigen::SelfAdjointEigenSolver<Mat> es(red.mat, Eigen::EigenvaluesOnly);
  int half_count = 0;
  for (int i = 0; i < 4; ++i)
    if (std::abs(es.eigenvalues()[i] - 0.5) < 1e-12) ++half_count;
  CHECK(half_count == 2);
}

TEST_CASE("property: protocol_state purifies the EFI pair state") {
  auto g = std::mt19937_64(8);
  const std::vector<std::string> keep{"X"};
  for (int rep = 0; rep < 10; ++rep) {
    auto t = random_table(g, 2, 3);
    auto d = dist_from_hash(t);
    auto pair = pair_from_dist(d);
    for (int b : {0, 1}) {
      auto psi = protocol_state(t, b);
      CHECK(psi.norm2() == doctest::Approx(1.0).epsilon(1e-12));
      auto red = qla::partial_trace(psi, keep);
      const Mat& want = b == 0 ? pair.xi0.mat : pair.xi1.mat;
      CHECK((red.mat - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("protocol_state: lambda > n_out stays normalized via the wide pad") {
  auto g = std::mt19937_64(9);
  auto t = random_table(g, 3, 2);
  for (int b : {0, 1}) {
    auto psi = protocol_state(t, b);
    CHECK(psi.layout.qubits_of("Y") == 3);
    CHECK(psi.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // reduction on X is still the image mixture
  const std::vector<std::string> keep{"X"};
  auto red = qla::partial_trace(protocol_state(t, 0), keep);
  auto d = dist_from_hash(t);
  for (int y = 0; y < 4; ++y) CHECK(red.mat(y, y).real() == doctest::Approx(d.p[static_cast<std::size_t>(y)]));
}

TEST_CASE("protocol_state: dimension cap enforced") {
  FunctionTable huge{20, 16, std::vector<std::uint32_t>(1u << 20, 0)};
  CHECK_THROWS_AS(protocol_state(huge, 0), cap_exceeded);
}
