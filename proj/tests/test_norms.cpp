#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nct/norms.hpp"
#include "nct/oracle.hpp"
#include "support/generators.hpp"

using namespace nct;

namespace {

std::shared_ptr<const Theta> golden() {
  return std::make_shared<const Theta>(Theta::two_torus(0.6180339887498949));
}

}  // namespace

TEST_CASE("sobolev parameters") {
  const auto p = SobolevParams::make(2, 0.5);
  CHECK(p.p == 4.0);
  CHECK(p.epsilon == 1.0);
  CHECK(p.b == doctest::Approx(std::numbers::e));
  const auto q = SobolevParams::make(3, 0.5, 0.5);
  CHECK(q.p == 3.0);
  CHECK(q.epsilon == 0.5);
  CHECK(q.b == doctest::Approx(std::numbers::e / 4.0));
  for (double s : {0.1, 0.3, 0.7, 0.9, 1.3}) {
    const auto r = SobolevParams::make(3, s);
    CHECK(2.0 * r.epsilon + 2.0 == r.p);
  }
  CHECK_THROWS_AS(SobolevParams::make(2, 1.0), UsageError);
  CHECK_THROWS_AS(SobolevParams::make(2, 0.0), UsageError);
  CHECK_THROWS_AS(SobolevParams::make(1, 0.2), UsageError);
  CHECK_THROWS_AS(SobolevParams::make(2, 0.5, 0.0), UsageError);
}

TEST_CASE("norm examples") {
  auto th = golden();
  const auto one = NcElement::scalar(th, 1.0);
  CHECK(l2_norm(one) == 1.0);
  CHECK(sobolev_norm(one, 0.7) == 1.0);
  const auto u = NcElement::basis(th, {1, 2}, Complex(0.0, 3.0));
  CHECK(l2_norm(u) == doctest::Approx(3.0));
  CHECK(sobolev_norm(u, 1.0) == doctest::Approx(3.0 * std::sqrt(6.0)));
  CHECK(homogeneous_sobolev_norm(u, 1.0) == doctest::Approx(3.0 * std::sqrt(5.0)));
  CHECK(homogeneous_sobolev_norm(one, 0.5) == 0.0);
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(l2_norm(u)));
  CHECK_THROWS_AS(sobolev_norm(u, -0.1), UsageError);
  CHECK_THROWS_AS(homogeneous_sobolev_norm(u, 0.0), UsageError);
}

TEST_CASE("norm ordering and homogeneity") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto th = nct::testing::random_theta(2 + trial % 3, rng);
    const auto x = nct::testing::random_element(th, 2, rng);
    double prev = l2_norm(x);
    for (double s : {0.25, 0.5, 1.0, 2.0}) {
      const double w = sobolev_norm(x, s);
      CHECK(w >= prev);
      prev = w;
    }
    const double c = rng.uniform(-3.0, 3.0);
    CHECK(std::abs(sobolev_norm(scale(x, c), 0.5) - std::abs(c) * sobolev_norm(x, 0.5)) <
          1e-12 * (1.0 + sobolev_norm(x, 0.5)));
    // the action of the torus preserves every norm here
    std::vector<double> t(static_cast<std::size_t>(th->dim()));
    for (auto& v : t) v = rng.uniform();
    const auto y = apply_action(x, t);
    CHECK(std::abs(sobolev_norm(y, 0.5) - sobolev_norm(x, 0.5)) < 1e-12);
    CHECK(std::abs(l2_norm(y) - l2_norm(x)) < 1e-12);
  }
}

TEST_CASE("lp norms") {
  auto th = golden();
  const TruncationBox box(2, 5);
  CHECK(lp_norm(NcElement::scalar(th, -2.0), 3.0, box) == doctest::Approx(2.0));

  // U^k + U^{-k} (selfadjoint partner) has the same L_p norm as 2 cos on the circle
  const auto k = MultiIndex{1, 1};
  const auto c = add(NcElement::basis(th, k), involution(NcElement::basis(th, k)));
  const double l4 = lp_norm(c, 4.0, TruncationBox(2, 8));
  CHECK(std::abs(l4 - std::pow(6.0, 0.25)) < 1e-12);  // mean of (2cos)^4 is 6

  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto t = nct::testing::random_theta(2, rng);
    const auto h = random_selfadjoint(t, 2, 2.0, rng.next());
    const TruncationBox b(2, 6);
    CHECK(std::abs(lp_norm(h, 2.0, b) - l2_norm(h)) < 1e-12);
    const double l3 = lp_norm(h, 3.0, b);
    const double l4b = lp_norm(h, 4.0, b);
    CHECK(l3 >= lp_norm(h, 2.0, b) - 1e-12);
    CHECK(l4b >= l3 - 1e-12);
    CHECK(std::abs(lp_norm(scale(h, -1.5), 3.0, b) - 1.5 * l3) < 1e-12);
    // p = 4 is a polynomial moment: tau((h^2)^2) = ||h^2||_2^2
    CHECK(std::abs(std::pow(l4b, 4.0) - std::pow(l2_norm(multiply(h, h)), 2.0)) < 1e-10);
  }

  CHECK_THROWS_AS(lp_norm(NcElement::basis(th, {1, 0}), 2.0, box), UsageError);
  CHECK_THROWS_AS(lp_norm(NcElement::scalar(th, 1.0), 0.5, box), UsageError);
}

TEST_CASE("commutative lp norm against quadrature") {
  auto th0 = std::make_shared<const Theta>(Theta::zero(2));
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = random_selfadjoint(th0, 1, 2.0, rng.next());
    const double spectral = lp_norm(h, 3.0, TruncationBox(2, 16));
    const double quad = std::cbrt(oracle::converged_quad_trace(
        h, [](double v) { return std::pow(std::abs(v), 3.0); }, 1e-12));
    CHECK(std::abs(spectral - quad) < 1e-6);
  }
}

TEST_CASE("embedding ratio") {
  auto th = golden();
  const auto params = SobolevParams::make(2, 0.5);
  const TruncationBox box(2, 6);
  CHECK(embedding_ratio(NcElement::scalar(th, 4.0), params, box) == doctest::Approx(1.0));
  CHECK_THROWS_AS(embedding_ratio(NcElement::zero(th), params, box), UsageError);

  const auto x = positive_candidate(th, SampleSpec{}, 9);
  const double r = embedding_ratio(x, params, default_box(x));
  CHECK(r > 0.0);
  CHECK(std::abs(embedding_ratio(scale(x, 7.0), params, default_box(x)) - r) < 1e-12);
}

TEST_CASE("embedding estimate") {
  auto th = golden();
  const auto params = SobolevParams::make(2, 0.5);
  EmbeddingSampler sampler;
  sampler.theta = th;
  sampler.count = 12;
  sampler.seed = 77;
  const auto est = estimate_embedding_constant(params, sampler);
  CHECK(est.failed == 0);
  REQUIRE(est.rows.size() == 12);
  double sup = 1.0;
  for (const auto& row : est.rows) {
    CHECK(row.ratio == doctest::Approx(row.lp / row.w2s).epsilon(1e-15));
    CHECK(row.w2s >= row.l2);
    CHECK(row.p == 4.0);
    sup = std::max(sup, row.ratio);
  }
  CHECK(est.supremum == sup);

  // identical seeds reproduce, worker count does not matter
  sampler.workers = 3;
  const auto again = estimate_embedding_constant(params, sampler);
  for (std::size_t i = 0; i < est.rows.size(); ++i) {
    CHECK(again.rows[i].seed == est.rows[i].seed);
    CHECK(again.rows[i].ratio == est.rows[i].ratio);
  }

  sampler.count = 0;
  const auto none = estimate_embedding_constant(params, sampler);
  CHECK(none.rows.empty());
  CHECK(none.supremum == 1.0);

  sampler.theta = std::make_shared<const Theta>(Theta::zero(3));
  sampler.count = 1;
  CHECK_THROWS_AS(estimate_embedding_constant(params, sampler), UsageError);
}
