#pragma once

// Wasserstein distance on the line, the convex-order test and the Wasserstein
// projections I(mu,nu) (closest measure below nu) and J(mu,nu) (closest
// measure above mu) in the convex order.
//
// Every quantity is computed from quantile functions on the common refinement
// of the two breakpoint sets. With G(v) = int_0^v (q_mu - q_nu), the
// projections have quantiles q_mu - D and q_nu + D, where D is the slope of
// the lower convex hull of G.

#include <cmath>
#include <cstddef>
#include <vector>

#include "wproj/error.hpp"
#include "wproj/hull.hpp"
#include "wproj/measures.hpp"

namespace wproj {

inline constexpr double kOrderTol = 1e-9;

/// Two quantile functions sampled on their common partition.
struct JointQuantiles {
  std::vector<double> breaks;
  std::vector<double> first;
  std::vector<double> second;

  JointQuantiles(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const auto qa = a.quantile();
    const auto qb = b.quantile();
    breaks = refine(qa.breaks(), qb.breaks());
    const auto mids = midpoints(breaks);
    first.reserve(mids.size());
    second.reserve(mids.size());
    for (double m : mids) {
      first.push_back(qa(m));
      second.push_back(qb(m));
    }
  }

  std::size_t size() const noexcept { return first.size(); }
  double width(std::size_t i) const { return breaks[i + 1] - breaks[i]; }

  StepFn difference() const {
    std::vector<double> d(size());
    for (std::size_t i = 0; i < size(); ++i) d[i] = first[i] - second[i];
    return StepFn(breaks, std::move(d));
  }
};

/// W_p via the comonotone coupling: the L^p distance of quantile functions.
inline double wasserstein(const DiscreteMeasure& a, const DiscreteMeasure& b, double p) {
  require_valid_p(p);
  const JointQuantiles jq(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < jq.size(); ++i) {
    const double d = std::abs(jq.first[i] - jq.second[i]);
    acc += (p == 1.0 ? d : std::pow(d, p)) * jq.width(i);
  }
  return p == 1.0 ? acc : std::pow(acc, 1.0 / p);
}

inline void require_same_barycenter(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
  if (std::abs(a.barycenter() - b.barycenter()) > tol)
    throw Error(ErrorCode::BarycenterMismatch, "measures must share the same barycenter");
}

/// a <=_c b, checked on the integrated quantile difference. G is piecewise
/// linear, so checking its vertices is exhaustive.
inline bool is_convex_order(const DiscreteMeasure& a, const DiscreteMeasure& b,
                            double tol = kOrderTol) {
  require_same_barycenter(a, b, tol);
  const JointQuantiles jq(a, b);
  double g = 0.0;
  for (std::size_t i = 0; i < jq.size(); ++i) {
    g += (jq.first[i] - jq.second[i]) * jq.width(i);
    if (g < -tol) return false;
  }
  return std::abs(g) <= tol;
}

struct ProjectionResult {
  DiscreteMeasure projected;
  /// W_p from the projection to the measure it replaces (mu for I, nu for J).
  double distance_to_input;
  /// Lower convex hull of G that produced the projection.
  PiecewiseLinearFn hull;
};

namespace detail {

enum class Side { I, J };

inline ProjectionResult project(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                                Side side) {
  require_valid_p(p);
  const JointQuantiles jq(mu, nu);
  const auto hull = lower_convex_hull(antiderivative(jq.difference(), 0.0));
  const auto slope = right_derivative(hull);
  const auto mids = midpoints(jq.breaks);

  std::vector<Atom> atoms(jq.size());
  for (std::size_t i = 0; i < jq.size(); ++i) {
    const double d = slope(mids[i]);
    const double x = side == Side::I ? jq.first[i] - d : jq.second[i] + d;
    atoms[i] = {x, jq.width(i)};
  }
  auto projected = DiscreteMeasure::from_atoms(std::move(atoms));
  const double dist = wasserstein(projected, side == Side::I ? mu : nu, p);
  return {std::move(projected), dist, hull};
}

}  // namespace detail

/// Closest measure to mu (in W_p, for every p) among those below nu in the
/// convex order. For p = 1 this is the canonical selection among optimizers.
inline ProjectionResult project_I(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  double p = 2.0) {
  return detail::project(mu, nu, p, detail::Side::I);
}

/// Closest measure to nu among those above mu in the convex order.
inline ProjectionResult project_J(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  double p = 2.0) {
  return detail::project(mu, nu, p, detail::Side::J);
}

struct EqualDistances {
  double i_to_mu;  ///< W_p(I, mu)
  double j_to_nu;  ///< W_p(J, nu)
  double i_to_nu;  ///< W_p(I, nu)
  double j_to_mu;  ///< W_p(J, mu)

  double first_residual() const { return std::abs(i_to_mu - j_to_nu); }
  double second_residual() const { return std::abs(i_to_nu - j_to_mu); }
};

inline EqualDistances equaldist_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      double p) {
  const auto i = project_I(mu, nu, p).projected;
  const auto j = project_J(mu, nu, p).projected;
  return {wasserstein(i, mu, p), wasserstein(j, nu, p), wasserstein(i, nu, p),
          wasserstein(j, mu, p)};
}

/// Both sides of the Lipschitz bounds
///   W(I(mu,nu), I(mu',nu')) <= 2 W(mu,mu') + W(nu,nu')
///   W(J(mu,nu), J(mu',nu')) <= W(mu,mu') + 2 W(nu,nu').
struct LipschitzReport {
  double lhs_I;
  double rhs_I;
  double lhs_J;
  double rhs_J;

  double slack_I() const { return rhs_I - lhs_I; }
  double slack_J() const { return rhs_J - lhs_J; }
  bool holds(double tol = 1e-9) const { return lhs_I <= rhs_I + tol && lhs_J <= rhs_J + tol; }
};

inline LipschitzReport lipschitz_audit(const DiscreteMeasure& mu, const DiscreteMeasure& mu2,
                                       const DiscreteMeasure& nu, const DiscreteMeasure& nu2,
                                       double p) {
  require_valid_p(p);
  const double dmu = wasserstein(mu, mu2, p);
  const double dnu = wasserstein(nu, nu2, p);
  const double lhs_i = wasserstein(project_I(mu, nu, p).projected, project_I(mu2, nu2, p).projected, p);
  const double lhs_j = wasserstein(project_J(mu, nu, p).projected, project_J(mu2, nu2, p).projected, p);
  return {lhs_i, 2.0 * dmu + dnu, lhs_j, dmu + 2.0 * dnu};
}

}  // namespace wproj
