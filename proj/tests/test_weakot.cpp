#include <gtest/gtest.h>

#include <cmath>

#include "wproj/fixtures.hpp"
#include "wproj/projection.hpp"
#include "wproj/random.hpp"
#include "wproj/weakot.hpp"

using namespace wproj;

namespace {

const auto kDelta0 = DiscreteMeasure::dirac(0.0);

TEST(WeakOt, OrderedPairHasZeroValue) {
  const auto fam = fixtures::lattice_family(4);
  EXPECT_NEAR(weak_ot_value(fam.mu, fam.nu), 0.0, 1e-8);
  EXPECT_NEAR(weak_ot_value(fam.eta, fam.nu), 0.0, 1e-8);
}

TEST(WeakOt, DiracAgainstTwoPoint) {
  const auto nu = fixtures::two_point_alpha(0.5);
  EXPECT_NEAR(weak_ot_value(kDelta0, nu), 0.140625, 1e-10);
  const double w = wasserstein(kDelta0, project_I(kDelta0, nu).projected, 2.0);
  EXPECT_NEAR(w * w, 0.140625, 1e-15);
}

TEST(WeakOt, OnlyQuadraticCost) {
  EXPECT_THROW(weak_ot_value(kDelta0, kDelta0, 1.0), Error);
}

TEST(WeakOt, IterationLimit) {
  const auto mu = from_atoms({{-0.9, 0.3}, {0.2, 0.3}, {0.8, 0.4}});
  const auto nu = from_atoms({{-0.1, 0.5}, {0.5, 0.5}});
  try {
    weak_ot_value(mu, nu, 2.0, 1, 1e-14);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(Pushforward, ProductPlanMapsToMean) {
  const auto mu = from_atoms({{-1.0, 0.2}, {0.0, 0.3}, {2.0, 0.5}});
  const auto nu = fixtures::two_point_alpha(0.3);
  const auto img = plan_barycenter_pushforward(TransportPlan::product(mu, nu), mu, nu);
  EXPECT_TRUE(approx_equal(img, DiscreteMeasure::dirac(nu.barycenter()), 1e-15));
}

TEST(Pushforward, OptimalPlanForDiracIsProjection) {
  const auto nu = fixtures::two_point_alpha(0.5);
  const auto sol = solve_weak_ot(kDelta0, nu);
  EXPECT_TRUE(approx_equal(plan_barycenter_pushforward(sol.plan, kDelta0, nu), DiscreteMeasure::dirac(0.375), 1e-12));
}

TEST(WeakOt, MatchesProjectionOnRandomSmallInstances) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    auto rng = random::trial_engine(103, t);
    const auto mu = random::measure(rng, 3);
    const auto nu = random::measure(rng, 3);
    const auto sol = solve_weak_ot(mu, nu);
    const auto proj = project_I(mu, nu).projected;
    const double w = wasserstein(mu, proj, 2.0);
    EXPECT_NEAR(sol.value, w * w, 1e-4) << "trial " << t;
    EXPECT_LE(sol.plan.marginal_error(mu, nu), 1e-10);
    EXPECT_LE(wasserstein(plan_barycenter_pushforward(sol.plan, mu, nu), proj, 2.0), 1e-2);
  }
}

TEST(WeakOt, BoundedByFeasibleContractions) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto rng = random::trial_engine(107, t);
    const auto mu = random::measure(rng, 4);
    const auto nu = random::measure(rng, 4);
    const double v = weak_ot_value(mu, nu);
    for (int k = 0; k < 10; ++k) {
      const double w = wasserstein(mu, random::contraction(nu, rng), 2.0);
      EXPECT_LE(v, w * w + 1e-9);
    }
  }
}

}  // namespace
