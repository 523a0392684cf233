#include <doctest.h>

#include "svrda/regularizer.hpp"
#include "test_util.hpp"

using namespace svrda;
using namespace svrda::testutil;

namespace {

DenseVector vec(std::vector<double> v) {
  DenseVector out(static_cast<Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) out[static_cast<Index>(j)] = v[j];
  return out;
}

Regularizer random_reg(SeededRng& rng) {
  switch (static_cast<int>(rng.next_double() * 4)) {
    case 0: return Regularizer::none();
    case 1: return Regularizer::l1(rng.next_double() * 2.0);
    case 2: return Regularizer::squared_l2(rng.next_double() * 2.0);
    default:
      return Regularizer::elastic_net(rng.next_double() * 2.0,
                                      rng.next_double() * 2.0);
  }
}

long double prox_objective_1d(const Regularizer& reg, long double x, double y,
                              double c) {
  return 0.5L * (x - y) * (x - y) +
         c * (reg.lambda1() * std::abs(x) + 0.5L * reg.lambda2() * x * x);
}

}  // namespace

TEST_CASE("prox closed forms") {
  const DenseVector out = Regularizer::l1(1.0).prox(vec({3, -0.5, 1}), 1.0);
  CHECK(out[0] == doctest::Approx(2.0));
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 0.0);

  // zero weights give the identity at any scale
  const DenseVector y = vec({1.5, -2.25, 0.0});
  CHECK((Regularizer::elastic_net(0.0, 0.0).prox(y, 37.0) - y).norm() == 0.0);

  CHECK(Regularizer::elastic_net(0.5, 2.0).prox(vec({2}), 1.0)[0] ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("prox rejects nonpositive scales") {
  CHECK_THROWS_AS(Regularizer::l1(1.0).prox(vec({1}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Regularizer::l1(1.0).prox(vec({1}), -2.0), std::invalid_argument);
}

TEST_CASE("prox agrees with the 1-d ternary-search oracle") {
  SeededRng rng(1234);
  for (int rep = 0; rep < 300; ++rep) {
    const Regularizer reg = random_reg(rng);
    const double c = 0.05 + 2.0 * rng.next_double();
    const double y = 6.0 * (rng.next_double() - 0.5);
    const double got = reg.prox(vec({y}), c)[0];
    const double lo = -std::abs(y) - 1.0, hi = std::abs(y) + 1.0;
    const double oracle = ternary_min(
        [&](long double x) { return prox_objective_1d(reg, x, y, c); }, lo, hi);
    CHECK(std::abs(got - oracle) <= 1e-8);
  }
}

TEST_CASE("prox output beats perturbed candidates on the prox objective") {
  SeededRng rng(77);
  for (int rep = 0; rep < 1000; ++rep) {
    const Regularizer reg = random_reg(rng);
    const double c = 0.05 + 2.0 * rng.next_double();
    const Index d = 1 + static_cast<Index>(rng.next_double() * 4);
    const DenseVector y = random_vector(d, rng, 2.0);
    const DenseVector px = reg.prox(y, c);
    const double best = 0.5 * (px - y).squaredNorm() + c * reg.value(px);
    for (int cand = 0; cand < 50; ++cand) {
      const DenseVector z = px + random_vector(d, rng, 0.3);
      const double val = 0.5 * (z - y).squaredNorm() + c * reg.value(z);
      CHECK(best <= val + 1e-12);
    }
  }
}

TEST_CASE("prox is nonexpansive") {
  SeededRng rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const Regularizer reg = random_reg(rng);
    const double c = 0.05 + 2.0 * rng.next_double();
    const DenseVector y1 = random_vector(4, rng, 3.0);
    const DenseVector y2 = random_vector(4, rng, 3.0);
    CHECK((reg.prox(y1, c) - reg.prox(y2, c)).norm() <=
          (y1 - y2).norm() + 1e-12);
  }
}

TEST_CASE("thresholded coordinates are exact zeros") {
  SeededRng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const double l1 = 0.5 + rng.next_double();
    const Regularizer reg = Regularizer::elastic_net(l1, rng.next_double());
    const double c = 0.5 + rng.next_double();
    const DenseVector y = random_vector(6, rng, 1.0);
    const DenseVector px = reg.prox(y, c);
    for (Index j = 0; j < y.size(); ++j) {
      if (std::abs(y[j]) <= c * l1) {
        CHECK(px[j] == 0.0);  // exact, no floating residue
      }
    }
  }
}

TEST_CASE("reg_value closed forms") {
  CHECK(Regularizer::none().value(vec({5, -3})) == 0.0);
  CHECK(Regularizer::l1(2.0).value(vec({1, -1})) == doctest::Approx(4.0));
  CHECK(Regularizer::elastic_net(1.0, 2.0).value(vec({3})) ==
        doctest::Approx(12.0));
}

TEST_CASE("strong convexity lower bound of the regularizer") {
  SeededRng rng(10);
  for (int rep = 0; rep < 200; ++rep) {
    const double l1 = rng.next_double();
    const double l2 = 0.1 + rng.next_double();
    const Regularizer reg = rep % 2 == 0 ? Regularizer::elastic_net(l1, l2)
                                         : Regularizer::squared_l2(l2);
    const DenseVector x = random_vector(4, rng, 2.0);
    const DenseVector y = random_vector(4, rng, 2.0);
    // subgradient at x: l2 x + l1 sign(x), with 0 chosen at kinks
    DenseVector xi = l2 * x;
    if (reg.kind() == RegKind::ElasticNet) {
      for (Index j = 0; j < x.size(); ++j) {
        if (x[j] > 0.0) xi[j] += l1;
        else if (x[j] < 0.0) xi[j] -= l1;
      }
    }
    const double lhs = reg.value(y);
    const double rhs = reg.value(x) + xi.dot(y - x) +
                       0.5 * reg.mu() * (y - x).squaredNorm();
    CHECK(lhs >= rhs - 1e-9);
  }
}

TEST_CASE("regularizer rejects negative weights") {
  CHECK_THROWS_AS(Regularizer::l1(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Regularizer::elastic_net(0.1, -0.5), std::invalid_argument);
}
