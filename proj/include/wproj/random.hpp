#pragma once

// Reproducible random generators for measures and functions used by audits
// and property tests. Each trial gets its own engine derived from
// (seed, trial index), so trials can run in any order or in parallel.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "wproj/hull.hpp"
#include "wproj/measures.hpp"

namespace wproj::random {

using Engine = std::mt19937_64;

inline Engine trial_engine(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Engine(seq);
}

/// Atom count uniform in {1..max_atoms}, positions iid uniform on [lo,hi],
/// weights normalized iid Exp(1).
inline DiscreteMeasure measure(Engine& rng, int max_atoms = 10, double lo = -1.0, double hi = 1.0) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_real_distribution<double> pos(lo, hi);
  std::exponential_distribution<double> weight(1.0);
  const int k = count(rng);
  std::vector<Atom> atoms(k);
  for (auto& a : atoms) {
    a.x = pos(rng);
    do a.w = weight(rng);
    while (a.w < 1e-6);
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

/// m translated so that its barycenter equals `target`.
inline DiscreteMeasure recentre(const DiscreteMeasure& m, double target) {
  const double shift = target - m.barycenter();
  std::vector<Atom> atoms = m.atoms();
  for (auto& a : atoms) a.x += shift;
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

/// Mean-preserving spread: every atom x is split into x - l and x + r with
/// weights proportional to r and l, so the result dominates m in convex order.
inline DiscreteMeasure spread(const DiscreteMeasure& m, Engine& rng, double max_step = 0.5) {
  std::uniform_real_distribution<double> step(0.01, max_step);
  std::bernoulli_distribution split(0.7);
  std::vector<Atom> atoms;
  for (const auto& a : m.atoms()) {
    if (!split(rng)) {
      atoms.push_back(a);
      continue;
    }
    const double l = step(rng), r = step(rng);
    atoms.push_back({a.x - l, a.w * r / (l + r)});
    atoms.push_back({a.x + r, a.w * l / (l + r)});
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

/// Mean-preserving contraction: atoms are grouped at random and every group
/// is replaced by its barycenter. The result is dominated by m.
inline DiscreteMeasure contraction(const DiscreteMeasure& m, Engine& rng) {
  const int k = static_cast<int>(m.size());
  std::uniform_int_distribution<int> groups_dist(1, k);
  const int groups = groups_dist(rng);
  std::uniform_int_distribution<int> label(0, groups - 1);
  std::vector<double> w(groups, 0.0), wx(groups, 0.0);
  for (const auto& a : m.atoms()) {
    const int g = label(rng);
    w[g] += a.w;
    wx[g] += a.w * a.x;
  }
  std::vector<Atom> atoms;
  for (int g = 0; g < groups; ++g)
    if (w[g] > 0.0) atoms.push_back({wx[g] / w[g], w[g]});
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

/// Step function with 1..max_pieces pieces and values uniform on [-1,1].
inline StepFn step_fn(Engine& rng, int max_pieces = 20) {
  std::uniform_int_distribution<int> count(1, max_pieces);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  const int k = count(rng);
  std::vector<double> breaks{0.0, 1.0};
  while (static_cast<int>(breaks.size()) < k + 1) {
    const double u = unit(rng);
    if (u > 1e-5 && u < 1.0 - 1e-5) breaks.push_back(u);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double a, double b) { return b - a < 1e-6; }),
                 breaks.end());
  }
  std::vector<double> vals(k);
  for (auto& v : vals) v = val(rng);
  return StepFn(std::move(breaks), std::move(vals));
}

/// Continuous piecewise-linear function with 2..max_vertices vertices.
inline PiecewiseLinearFn pl_fn(Engine& rng, int max_vertices = 30) {
  const auto f = step_fn(rng, max_vertices - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<Vertex> v;
  for (double u : f.breaks()) v.push_back({u, val(rng)});
  return PiecewiseLinearFn(std::move(v));
}

}  // namespace wproj::random
