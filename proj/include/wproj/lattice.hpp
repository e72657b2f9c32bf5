#pragma once

// Convex-order lattice on measures with a fixed barycenter, expressed through
// potential functions u(x) = int |x - y| m(dy).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wproj/error.hpp"
#include "wproj/fixtures.hpp"
#include "wproj/hull.hpp"
#include "wproj/measures.hpp"
#include "wproj/projection.hpp"

namespace wproj {

inline constexpr double kBarycenterTol = 1e-9;
/// Kinks closer than this are one kink; slope changes below it carry no mass.
inline constexpr double kKinkTol = 1e-12;

/// Convex piecewise-linear function with asymptotic slopes -1 and +1,
/// u(x) = sum_k (jump_k / 2) |x - x_k|.
class PotentialFn {
 public:
  struct Kink {
    double x;
    double jump;  ///< slope change at x
  };

  explicit PotentialFn(std::vector<Kink> kinks) : kinks_(std::move(kinks)) {
    if (kinks_.empty()) throw Error(ErrorCode::EmptyInput, "potential needs at least one kink");
    for (std::size_t i = 0; i < kinks_.size(); ++i) {
      if (!(kinks_[i].jump > 0.0))
        throw Error(ErrorCode::InvalidArgument, "slope changes must be positive");
      if (i > 0 && !(kinks_[i].x > kinks_[i - 1].x))
        throw Error(ErrorCode::InvalidArgument, "kinks must be strictly increasing");
    }
  }

  /// Potential from its values at sorted abscissae, extended with slopes -1
  /// and +1 outside. Slope changes below kKinkTol are folded into the next
  /// kept kink so the total stays 2.
  /// `slope` gives the slope on each segment; the default is the chord.
  template <class SlopeFn>
  static PotentialFn from_values(const std::vector<Vertex>& pts, SlopeFn slope) {
    std::vector<Kink> kinks;
    double left = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double right = i + 1 < pts.size() ? slope(pts[i], pts[i + 1]) : 1.0;
      const double jump = right - left;
      if (jump < -1e-9) throw Error(ErrorCode::InvalidArgument, "potential values are not convex");
      if (jump > kKinkTol) {
        kinks.push_back({pts[i].u, jump});
        left = right;
      }
    }
    if (!kinks.empty()) kinks.back().jump += 1.0 - left;
    return PotentialFn(std::move(kinks));
  }

  static PotentialFn from_values(const std::vector<Vertex>& pts) {
    return from_values(pts, [](const Vertex& l, const Vertex& r) { return (r.y - l.y) / (r.u - l.u); });
  }

  const std::vector<Kink>& kinks() const noexcept { return kinks_; }

  double total_jump() const {
    double s = 0.0;
    for (const auto& k : kinks_) s += k.jump;
    return s;
  }

  double operator()(double x) const {
    double v = 0.0;
    for (const auto& k : kinks_) v += 0.5 * k.jump * std::abs(x - k.x);
    return v;
  }

  /// Derivative at a point that is not a kink.
  double slope(double x) const {
    double s = 0.0;
    for (const auto& k : kinks_) s += x < k.x ? -0.5 * k.jump : 0.5 * k.jump;
    return s;
  }

 private:
  std::vector<Kink> kinks_;
};

inline PotentialFn potential(const DiscreteMeasure& m) {
  std::vector<PotentialFn::Kink> kinks(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) kinks[i] = {m.atoms()[i].x, 2.0 * m.atoms()[i].w};
  return PotentialFn(std::move(kinks));
}

/// Atoms at the kinks with weight jump/2.
inline DiscreteMeasure measure_from_potential(const PotentialFn& u) {
  if (std::abs(u.total_jump() - 2.0) > 1e-12)
    throw Error(ErrorCode::MassMismatch, "slope changes must sum to 2");
  std::vector<Atom> atoms(u.kinks().size());
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = {u.kinks()[i].x, 0.5 * u.kinks()[i].jump};
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

namespace detail {

enum class Envelope { Lower, Upper };

// Vertices of min(u1,u2) or max(u1,u2): all kinks plus every crossing of the
// two functions between consecutive kinks.
inline std::vector<Vertex> envelope(const PotentialFn& u1, const PotentialFn& u2, Envelope which) {
  std::vector<double> xs;
  for (const auto& k : u1.kinks()) xs.push_back(k.x);
  for (const auto& k : u2.kinks()) xs.push_back(k.x);
  std::sort(xs.begin(), xs.end());

  auto pick = [which](double a, double b) {
    return which == Envelope::Lower ? std::min(a, b) : std::max(a, b);
  };
  std::vector<Vertex> out;
  auto push = [&out](double x, double y) {
    if (!out.empty() && x - out.back().u <= kKinkTol) return;
    out.push_back({x, y});
  };

  double prev_x = xs.front();
  double prev_d = u1(prev_x) - u2(prev_x);
  push(prev_x, pick(u1(prev_x), u2(prev_x)));
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double x = xs[i];
    if (x - prev_x <= kKinkTol) continue;
    const double a = u1(x), b = u2(x);
    const double d = a - b;
    if ((prev_d < 0.0 && d > 0.0) || (prev_d > 0.0 && d < 0.0)) {
      const double xc = prev_x + (x - prev_x) * prev_d / (prev_d - d);
      if (xc - prev_x > kKinkTol && x - xc > kKinkTol) push(xc, u1(xc));
    }
    push(x, pick(a, b));
    prev_x = x;
    prev_d = d;
  }
  return out;
}

// Segment slope taken from whichever potential passes through both ends.
// Chord slopes over short segments lose digits and would leave spurious kinks.
inline auto segment_slope(const PotentialFn& u1, const PotentialFn& u2) {
  return [&u1, &u2](const Vertex& l, const Vertex& r) {
    const double mid = 0.5 * (l.u + r.u);
    for (const auto* u : {&u1, &u2}) {
      const double tol = 1e-13 * std::max({1.0, std::abs(l.y), std::abs(r.y)});
      if (std::abs((*u)(l.u) - l.y) <= tol && std::abs((*u)(r.u) - r.y) <= tol) return u->slope(mid);
    }
    return (r.y - l.y) / (r.u - l.u);
  };
}

}  // namespace detail

/// Largest measure below both m1 and m2 in the convex order:
/// its potential is the convex hull of min(u1, u2).
inline DiscreteMeasure min_convex(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                                  double tol = kBarycenterTol) {
  require_same_barycenter(m1, m2, tol);
  const auto u1 = potential(m1), u2 = potential(m2);
  const auto pts = detail::lower_hull(detail::envelope(u1, u2, detail::Envelope::Lower));
  return measure_from_potential(PotentialFn::from_values(pts, detail::segment_slope(u1, u2)));
}

/// Smallest measure above both m1 and m2: its potential is max(u1, u2).
inline DiscreteMeasure max_convex(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                                  double tol = kBarycenterTol) {
  require_same_barycenter(m1, m2, tol);
  const auto u1 = potential(m1), u2 = potential(m2);
  const auto pts = detail::envelope(u1, u2, detail::Envelope::Upper);
  return measure_from_potential(PotentialFn::from_values(pts, detail::segment_slope(u1, u2)));
}

struct LatticeRatios {
  double join;  ///< W_p(mu v nu, mu v eta) / W_p(eta, nu)
  double meet;  ///< W_p(mu ^ nu, mu ^ eta) / W_p(eta, nu)
};

/// Ratios for the three-measure family on the grid {i/n} where the lattice
/// operations move by n^{1/p}/2 times the input perturbation.
inline LatticeRatios lattice_ratios(int n, double p) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "lattice counterexample needs n >= 3");
  require_valid_p(p);
  const auto fam = fixtures::lattice_family(n);
  const double denom = wasserstein(fam.eta, fam.nu, p);
  const double join = wasserstein(max_convex(fam.mu, fam.nu), max_convex(fam.mu, fam.eta), p);
  const double meet = wasserstein(min_convex(fam.mu, fam.nu), min_convex(fam.mu, fam.eta), p);
  return {join / denom, meet / denom};
}

inline double lattice_ratio(int n, double p) { return lattice_ratios(n, p).join; }

/// I(m1,m2) <=_c m1 ^ m2 and m1 v m2 <=_c J(m1,m2).
inline bool sandwich_check(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                           double tol = kBarycenterTol) {
  require_same_barycenter(m1, m2, tol);
  const auto i = project_I(m1, m2).projected;
  const auto j = project_J(m1, m2).projected;
  return is_convex_order(i, min_convex(m1, m2, tol), tol) &&
         is_convex_order(max_convex(m1, m2, tol), j, tol);
}

}  // namespace wproj
