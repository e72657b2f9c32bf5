#pragma once

// Randomized check of the Lipschitz bounds for I and J. Trials are
// independent (one engine per trial index) and run in parallel; results are
// returned ordered by trial index.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "wproj/projection.hpp"
#include "wproj/random.hpp"

namespace wproj {

struct AuditTrial {
  std::uint64_t index;
  LipschitzReport report;

  /// lhs / rhs, or nullopt when both sides vanish.
  static std::optional<double> ratio(double lhs, double rhs) {
    if (rhs == 0.0 && lhs == 0.0) return std::nullopt;
    return rhs == 0.0 ? INFINITY : lhs / rhs;
  }
  std::optional<double> ratio_I() const { return ratio(report.lhs_I, report.rhs_I); }
  std::optional<double> ratio_J() const { return ratio(report.lhs_J, report.rhs_J); }
};

struct AuditSummary {
  std::vector<AuditTrial> trials;
  double max_ratio_I = 0.0;
  double max_ratio_J = 0.0;
  std::size_t violations = 0;
};

struct Quadruple {
  DiscreteMeasure mu;
  DiscreteMeasure mu2;
  DiscreteMeasure nu;
  DiscreteMeasure nu2;
};

inline Quadruple random_quadruple(random::Engine& rng) {
  auto mu = random::measure(rng);
  auto mu2 = random::measure(rng);
  auto nu = random::measure(rng);
  auto nu2 = random::measure(rng);
  return {std::move(mu), std::move(mu2), std::move(nu), std::move(nu2)};
}

inline AuditSummary summarize(std::vector<AuditTrial> trials, double tol) {
  AuditSummary s;
  for (const auto& t : trials) {
    if (!t.report.holds(tol)) ++s.violations;
    if (auto r = t.ratio_I()) s.max_ratio_I = std::max(s.max_ratio_I, *r);
    if (auto r = t.ratio_J()) s.max_ratio_J = std::max(s.max_ratio_J, *r);
  }
  s.trials = std::move(trials);
  return s;
}

inline AuditSummary run_audit(double p, std::uint64_t trials, std::uint64_t seed,
                              double tol = 1e-9, unsigned threads = 0) {
  require_valid_p(p);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));

  std::vector<AuditTrial> out(trials);
  auto work = [&](unsigned worker) {
    for (std::uint64_t t = worker; t < trials; t += threads) {
      auto rng = random::trial_engine(seed, t);
      const auto q = random_quadruple(rng);
      out[t] = {t, lipschitz_audit(q.mu, q.mu2, q.nu, q.nu2, p)};
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
  }
  return summarize(std::move(out), tol);
}

}  // namespace wproj
