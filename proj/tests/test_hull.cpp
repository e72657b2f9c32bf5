#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wproj/fixtures.hpp"
#include "wproj/hull.hpp"
#include "wproj/measures.hpp"
#include "wproj/random.hpp"

using namespace wproj;

namespace {

void expect_vertices(const PiecewiseLinearFn& f, const std::vector<Vertex>& expected, double tol = 1e-15) {
  ASSERT_EQ(f.vertices().size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(f.vertices()[i].u, expected[i].u, tol) << "vertex " << i;
    EXPECT_NEAR(f.vertices()[i].y, expected[i].y, tol) << "vertex " << i;
  }
}

const StepFn kSignFlip({0.0, 0.5, 1.0}, {1.0, -1.0});

TEST(StepFn, RejectsMalformed) {
  EXPECT_THROW(StepFn({0.0, 1.0}, {1.0, 2.0}), Error);
  EXPECT_THROW(StepFn({0.0, 0.5, 0.5, 1.0}, {1.0, 2.0, 3.0}), Error);
  EXPECT_THROW(StepFn({0.1, 1.0}, {1.0}), Error);
}

TEST(Antiderivative, Constant) {
  expect_vertices(antiderivative(StepFn::constant(1.0), 0.0), {{0.0, 0.0}, {1.0, 1.0}});
}

TEST(Antiderivative, TwoPointAlphaDifference) {
  const StepFn f({0.0, 0.5, 1.0}, {0.25, -1.0});
  expect_vertices(antiderivative(f, 0.0), {{0.0, 0.0}, {0.5, 0.125}, {1.0, -0.375}});
}

TEST(Antiderivative, Tent) {
  expect_vertices(antiderivative(kSignFlip, 0.0), {{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}});
}

TEST(Antiderivative, DropsCollinearVertices) {
  const StepFn f({0.0, 0.25, 0.5, 1.0}, {2.0, 2.0, 2.0});
  expect_vertices(antiderivative(f, 1.0), {{0.0, 1.0}, {1.0, 3.0}});
}

TEST(LowerConvexHull, ConvexInputUnchanged) {
  std::vector<Vertex> v;
  for (int i = 0; i <= 10; ++i) v.push_back({i / 10.0, (i / 10.0) * (i / 10.0)});
  const PiecewiseLinearFn f(v);
  expect_vertices(lower_convex_hull(f), f.vertices());
}

TEST(LowerConvexHull, TentCollapsesToChord) {
  expect_vertices(lower_convex_hull(PiecewiseLinearFn({{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}})),
                  {{0.0, 0.0}, {1.0, 0.0}});
}

TEST(LowerConvexHull, KeepsEndpoints) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    auto rng = random::trial_engine(3, t);
    const auto f = random::pl_fn(rng);
    const auto h = lower_convex_hull(f);
    EXPECT_EQ(h.vertices().front().y, f.vertices().front().y);
    EXPECT_EQ(h.vertices().back().y, f.vertices().back().y);
  }
}

TEST(LowerConvexHull, MatchesChordMinimumOracle) {
  for (std::uint64_t t = 0; t < 300; ++t) {
    auto rng = random::trial_engine(5, t);
    const auto f = random::pl_fn(rng);
    const auto h = lower_convex_hull(f);
    for (int k = 0; k <= 100; ++k) {
      const double u = k / 100.0;
      EXPECT_NEAR(h(u), oracle::hull_chord_min(f.vertices(), u), 1e-12) << "trial " << t << " u=" << u;
    }
  }
}

TEST(LowerConvexHull, BelowIdempotentConvex) {
  for (std::uint64_t t = 0; t < 300; ++t) {
    auto rng = random::trial_engine(9, t);
    const auto f = random::pl_fn(rng);
    const auto h = lower_convex_hull(f);
    const auto& v = f.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_LE(h(v[i].u), v[i].y + 1e-12);
      if (i + 1 < v.size()) {
        const double m = 0.5 * (v[i].u + v[i + 1].u);
        EXPECT_LE(h(m), f(m) + 1e-12);
      }
    }
    expect_vertices(lower_convex_hull(h), h.vertices(), 0.0);
    const auto d = right_derivative(h);
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_GE(d.values()[i], d.values()[i - 1]);
  }
}

// Replacing F on [0,a] by its own hull there does not change the hull of F.
TEST(LowerConvexHull, SplicingPartialHullKeepsHull) {
  for (std::uint64_t t = 0; t < 500; ++t) {
    auto rng = random::trial_engine(13, t);
    const auto f = random::pl_fn(rng);
    const auto& v = f.vertices();
    if (v.size() < 3) continue;
    std::uniform_int_distribution<std::size_t> pick(1, v.size() - 2);
    const std::size_t k = pick(rng);

    std::vector<Vertex> head(v.begin(), v.begin() + static_cast<long>(k) + 1);
    const double a = head.back().u;
    for (auto& h : head) h.u /= a;  // rescale to [0,1] for the hull
    auto head_hull = lower_convex_hull(PiecewiseLinearFn(head)).vertices();
    std::vector<Vertex> spliced;
    for (auto h : head_hull) spliced.push_back({h.u * a, h.y});
    spliced.back().u = v[k].u;
    spliced.insert(spliced.end(), v.begin() + static_cast<long>(k) + 1, v.end());

    const auto lhs = lower_convex_hull(PiecewiseLinearFn(spliced));
    const auto rhs = lower_convex_hull(f);
    for (int s = 0; s <= 50; ++s) EXPECT_NEAR(lhs(s / 50.0), rhs(s / 50.0), 1e-12);
  }
}

TEST(RightDerivative, Chords) {
  const auto d = right_derivative(PiecewiseLinearFn({{0.0, 0.0}, {1.0, 3.0}}));
  EXPECT_EQ(d.values(), (std::vector<double>{3.0}));
  const auto tent = lower_convex_hull(PiecewiseLinearFn({{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}}));
  EXPECT_EQ(right_derivative(tent).values(), (std::vector<double>{0.0}));
}

TEST(RightDerivative, TwoPointAlphaHullIsChord) {
  const StepFn f({0.0, 0.5, 1.0}, {0.25, -1.0});
  const auto h = lower_convex_hull(antiderivative(f, 0.0));
  expect_vertices(h, {{0.0, 0.0}, {1.0, -0.375}});
  const auto d = right_derivative(h);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d.values()[0], -0.375);
}

// For the continuous quadruple, the hull slope of G' reproduces q_mu' - q_I(mu',nu').
TEST(RightDerivative, EqualityQuadrupleHullSlope) {
  const auto quad = fixtures::equality_quadruple();
  const std::size_t n = 4096;
  const auto mu2 = discretize(quad.mu2, n).quantile();
  const auto nu2 = discretize(quad.nu2, n).quantile();
  const auto g = antiderivative(subtract(mu2.steps(), nu2.steps()), 0.0);
  const auto d = right_derivative(lower_convex_hull(g));
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    worst = std::max(worst, std::abs(d(u) - (quad.mu2(u) - quad.expected_I2(u))));
  }
  EXPECT_LE(worst, 1e-3);
}

TEST(LpNorm, Examples) {
  EXPECT_DOUBLE_EQ(lp_norm(StepFn::constant(-2.5), 1.0), 2.5);
  EXPECT_DOUBLE_EQ(lp_norm(StepFn::constant(-2.5), 3.0), 2.5);
  EXPECT_DOUBLE_EQ(lp_norm(kSignFlip, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(lp_norm(StepFn({0.0, 0.5, 1.0}, {0.625, 0.625}), 1.0), 0.625);
}

TEST(LpNorm, InvalidP) {
  try {
    lp_norm(kSignFlip, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidP);
  }
}

TEST(Refine, SnapsNearlyEqualBreakpoints) {
  const std::vector<double> a{0.0, 1.0 / 3.0, 1.0};
  const std::vector<double> b{0.0, 1.0 / 3.0 + 1e-16, 0.5, 1.0};
  EXPECT_EQ(refine(a, b).size(), 4u);
}

TEST(HullContraction, SmallRandomSuite) {
  for (std::uint64_t t = 0; t < 1000; ++t) {
    auto rng = random::trial_engine(17, t);
    const auto f = random::step_fn(rng);
    const auto g = random::step_fn(rng);
    const auto df = right_derivative(lower_convex_hull(antiderivative(f, 0.0)));
    const auto dg = right_derivative(lower_convex_hull(antiderivative(g, 0.0)));
    for (double p : {1.0, 1.5, 2.0, 3.0})
      EXPECT_LE(lp_norm(subtract(df, dg), p), lp_norm(subtract(f, g), p) + 1e-9);
  }
}

}  // namespace
