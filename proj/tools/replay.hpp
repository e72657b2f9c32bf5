#pragma once

// Replays the worked examples with known closed-form answers and reports
// expected vs computed values.

#include <cmath>
#include <string>
#include <vector>

#include "wproj/wproj.hpp"

namespace wproj::replay {

struct Row {
  std::string group;
  std::string name;
  double expected;
  double computed;
  double tol;
  bool pass;
};

struct Report {
  std::vector<Row> rows;
  /// (n, p, join ratio, meet ratio, n^{1/p}/2)
  struct LatticeRow {
    int n;
    double p;
    double join;
    double meet;
    double expected;
  };
  std::vector<LatticeRow> lattice;
  /// (alpha, projection gap, W_1(delta_0, nu_alpha), ratio)
  struct AlphaRow {
    double alpha;
    double gap_I;
    double gap_J;
    double distance;
    double ratio_I;
    double ratio_J;
  };
  std::vector<AlphaRow> alpha_sweep;

  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

class Recorder {
 public:
  explicit Recorder(Report& report) : report_(report) {}

  void value(const std::string& group, const std::string& name, double expected, double computed,
             double tol) {
    const bool ok = std::isfinite(computed) && std::abs(expected - computed) <= tol;
    report_.rows.push_back({group, name, expected, computed, tol, ok});
  }

  void flag(const std::string& group, const std::string& name, bool computed) {
    report_.rows.push_back({group, name, 1.0, computed ? 1.0 : 0.0, 0.0, computed});
  }

 private:
  Report& report_;
};

inline double max_abs_quantile_gap(const DiscreteMeasure& m, const GeneralQuantile& q) {
  const auto sq = m.quantile();
  double gap = 0.0;
  const auto mids = midpoints(sq.breaks());
  for (std::size_t i = 0; i < mids.size(); ++i) gap = std::max(gap, std::abs(sq.values()[i] - q(mids[i])));
  return gap;
}

inline Report run(std::size_t discretize_n = 4096) {
  Report report;
  Recorder rec(report);
  constexpr double kTight = 1e-12;

  // Measures on the line and their quantiles.
  {
    const auto fam = fixtures::lattice_family(4);
    const auto& nu = fam.nu;
    const std::vector<Atom> expected{{0.0, 0.125}, {0.25, 0.25}, {0.5, 0.25}, {0.75, 0.25}, {1.0, 0.125}};
    bool same = nu.size() == expected.size();
    for (std::size_t i = 0; same && i < expected.size(); ++i)
      same = std::abs(nu.atoms()[i].x - expected[i].x) < kTight &&
             std::abs(nu.atoms()[i].w - expected[i].w) < kTight;
    rec.flag("measures", "grid measure nu (n=4) from atoms", same);

    const auto q = fixtures::two_point_alpha(0.5).quantile();
    rec.value("measures", "quantile nu^0.5 on (0,0.5]", -0.25, q(0.25), kTight);
    rec.value("measures", "quantile nu^0.5 on (0.5,1]", 1.0, q(0.75), kTight);
    rec.value("measures", "barycenter nu^0.5", 0.375, fixtures::two_point_alpha(0.5).barycenter(), kTight);
  }

  // Distances and convex order for the three-measure grid family.
  for (int n : {4, 8}) {
    const auto fam = fixtures::lattice_family(n);
    const std::string tag = " (n=" + std::to_string(n) + ")";
    for (double p : {1.0, 2.0, 3.0}) {
      const std::string pt = tag + " p=" + std::to_string(static_cast<int>(p));
      rec.value("distance", "W(mu,nu)" + pt, 0.5 / n, wasserstein(fam.mu, fam.nu, p), kTight);
      rec.value("distance", "W(eta,mu)" + pt, 0.5 / n, wasserstein(fam.eta, fam.mu, p), kTight);
      rec.value("distance", "W(eta,nu)" + pt, std::pow(n, -1.0 - 1.0 / p), wasserstein(fam.eta, fam.nu, p),
                kTight);
    }
    rec.flag("order", "eta <=c mu" + tag, is_convex_order(fam.eta, fam.mu));
    rec.flag("order", "mu <=c nu" + tag, is_convex_order(fam.mu, fam.nu));
    rec.flag("order", "not nu <=c mu" + tag, !is_convex_order(fam.nu, fam.mu));
    rec.flag("projection", "I(mu,nu) = mu" + tag, approx_equal(project_I(fam.mu, fam.nu).projected, fam.mu, 1e-12));
    rec.flag("projection", "J(mu,nu) = nu" + tag, approx_equal(project_J(fam.mu, fam.nu).projected, fam.nu, 1e-12));
    rec.flag("lattice", "mu ^ nu = mu" + tag, approx_equal(min_convex(fam.mu, fam.nu), fam.mu, 1e-12));
    rec.flag("lattice", "mu ^ eta = eta" + tag, approx_equal(min_convex(fam.mu, fam.eta), fam.eta, 1e-12));
    rec.flag("lattice", "mu v nu = nu" + tag, approx_equal(max_convex(fam.mu, fam.nu), fam.nu, 1e-12));
    rec.flag("lattice", "mu v eta = mu" + tag, approx_equal(max_convex(fam.mu, fam.eta), fam.mu, 1e-12));
    rec.flag("lattice", "sandwich I <=c mu^nu, mu v nu <=c J" + tag, sandwich_check(fam.mu, fam.nu));
  }

  // Dirac targets: I(mu, delta_c) = delta_c and J(mu, delta_c) = mu.
  {
    const auto mu = fixtures::lattice_family(4).mu;
    const auto dc = DiscreteMeasure::dirac(0.3);
    const auto dc2 = DiscreteMeasure::dirac(-0.2);
    const auto mu2 = fixtures::two_point_alpha(0.3);
    rec.flag("projection", "I(mu, delta_c) = delta_c", approx_equal(project_I(mu, dc).projected, dc, 1e-12));
    rec.flag("projection", "J(mu, delta_c) = mu", approx_equal(project_J(mu, dc).projected, mu, 1e-12));
    for (double p : {1.0, 2.0}) {
      const std::string pt = " p=" + std::to_string(static_cast<int>(p));
      rec.value("projection", "W(I(mu,d),I(mu,d')) = W(d,d')" + pt, wasserstein(dc, dc2, p),
                wasserstein(project_I(mu, dc).projected, project_I(mu, dc2).projected, p), kTight);
      rec.value("projection", "W(J(mu,d),J(mu',d)) = W(mu,mu')" + pt, wasserstein(mu, mu2, p),
                wasserstein(project_J(mu, dc).projected, project_J(mu2, dc).projected, p), kTight);
    }
  }

  // Two-point family nu^a against delta_0.
  {
    const auto d0 = DiscreteMeasure::dirac(0.0);
    const auto nu = fixtures::two_point_alpha(0.5);
    rec.value("distance", "W1(delta_0, nu^0.5)", 0.625, wasserstein(d0, nu, 1.0), kTight);
    rec.value("hull", "L1 norm of q_delta0 - q_nu^0.5 (refined)", 0.625,
              lp_norm(subtract(d0.quantile().steps(), nu.quantile().steps()), 1.0), kTight);
    const auto i = project_I(d0, nu, 1.0).projected;
    rec.flag("projection", "I(delta_0, nu^0.5) = delta_0.375",
             approx_equal(i, DiscreteMeasure::dirac(0.375), 1e-12));
    rec.flag("projection", "J(delta_0.375, nu^0.5) = nu^0.5",
             approx_equal(project_J(DiscreteMeasure::dirac(0.375), nu).projected, nu, 1e-12));
  }
  for (double a : {0.5, 0.1, 0.01, 0.001, 1e-4}) {
    const auto d0 = DiscreteMeasure::dirac(0.0);
    const auto nu = fixtures::two_point_alpha(a);
    const auto dc = DiscreteMeasure::dirac(fixtures::two_point_alpha_mean(a));
    const double gap_i = wasserstein(project_I(nu, nu, 1.0).projected, project_I(d0, nu, 1.0).projected, 1.0);
    const double gap_j = wasserstein(project_J(dc, nu, 1.0).projected, project_J(dc, d0, 1.0).projected, 1.0);
    const double dist = wasserstein(d0, nu, 1.0);
    report.alpha_sweep.push_back({a, gap_i, gap_j, dist, gap_i / dist, gap_j / dist});
    const std::string at = " a=" + std::to_string(a);
    rec.value("sharpness", "W1(I(nu,nu), I(delta_0,nu))" + at, fixtures::two_point_alpha_projection_gap(a),
              gap_i, kTight);
    rec.value("sharpness", "W1(J(dc,nu), J(dc,delta_0))" + at, fixtures::two_point_alpha_projection_gap(a),
              gap_j, kTight);
    rec.value("sharpness", "W1(delta_0, nu)" + at, fixtures::two_point_alpha_distance(a), dist, kTight);
  }
  {
    const double a = 0.001;
    const double expected = fixtures::two_point_alpha_projection_gap(a) / fixtures::two_point_alpha_distance(a);
    rec.value("sharpness", "I ratio at a=0.001", expected, report.alpha_sweep[3].ratio_I, 1e-9);
    rec.value("sharpness", "I ratio at a=0.001 vs 1.99601", 1.99601, report.alpha_sweep[3].ratio_I, 1e-3);
    rec.value("sharpness", "J ratio at a=0.001 vs 1.99601", 1.99601, report.alpha_sweep[3].ratio_J, 1e-3);
  }

  // Continuous quadruple where the squared I-bound is an equality.
  {
    const auto quad = fixtures::equality_quadruple();
    const auto mu = discretize(quad.mu, discretize_n);
    const auto mu2 = discretize(quad.mu2, discretize_n);
    const auto nu = discretize(quad.nu, discretize_n);
    const auto nu2 = discretize(quad.nu2, discretize_n);
    const auto i1 = project_I(mu, nu).projected;
    const auto i2 = project_I(mu2, nu2).projected;
    rec.value("equality", "max |q_I(mu,nu) - u/2|", 0.0, max_abs_quantile_gap(i1, quad.expected_I), 1e-3);
    rec.value("equality", "max |q_I(mu',nu') - expected|", 0.0, max_abs_quantile_gap(i2, quad.expected_I2),
              1e-3);
    const double lhs = std::pow(wasserstein(i1, i2, 2.0), 2.0);
    const double a = std::pow(wasserstein(mu, mu2, 2.0), 2.0);
    const double b = std::pow(wasserstein(nu, nu2, 2.0), 2.0);
    rec.value("equality", "W2^2(I,I') - W2^2(mu,mu') - W2^2(nu,nu')", 0.0, lhs - a - b, 1e-3);
    rec.value("equality", "W2^2(mu,mu') = 1/1944", 1.0 / 1944.0, a, 1e-3);
    rec.value("equality", "W2^2(nu,nu') = 1/864", 1.0 / 864.0, b, 1e-3);
  }

  // Lattice operations are not Lipschitz: ratio n^{1/p}/2.
  for (double p : {1.0, 2.0, 3.0}) {
    for (int n = 3; n <= 32; ++n) {
      const auto r = lattice_ratios(n, p);
      const double expected = std::pow(n, 1.0 / p) / 2.0;
      report.lattice.push_back({n, p, r.join, r.meet, expected});
      const std::string tag = " n=" + std::to_string(n) + " p=" + std::to_string(static_cast<int>(p));
      rec.value("lattice-ratio", "join" + tag, expected, r.join, kTight);
      rec.value("lattice-ratio", "meet" + tag, expected, r.meet, kTight);
    }
  }

  // Weak transport value and pushforward.
  {
    const auto d0 = DiscreteMeasure::dirac(0.0);
    const auto nu = fixtures::two_point_alpha(0.5);
    const auto sol = solve_weak_ot(d0, nu);
    rec.value("weak-ot", "V2^2(delta_0, nu^0.5)", 0.140625, sol.value, 1e-8);
    rec.flag("weak-ot", "pushforward = delta_0.375",
             approx_equal(plan_barycenter_pushforward(sol.plan, d0, nu), DiscreteMeasure::dirac(0.375), 1e-8));
  }
  return report;
}

}  // namespace wproj::replay
