#pragma once

// Step functions and continuous piecewise-linear functions on [0,1], their
// exact antiderivatives, lower convex hulls and one-sided derivatives.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "wproj/error.hpp"

namespace wproj {

/// Breakpoints closer than this are treated as the same abscissa.
inline constexpr double kBreakTol = 1e-12;
/// Vertical collinearity tolerance, relative to segment width and y-scale.
inline constexpr double kCollinearTol = 1e-12;

/// Piecewise-constant function on (0,1]. The value values[i] holds on the
/// left-open, right-closed interval (breaks[i], breaks[i+1]].
class StepFn {
 public:
  StepFn() : breaks_{0.0, 1.0}, values_{0.0} {}

  StepFn(std::vector<double> breaks, std::vector<double> values)
      : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
      throw Error(ErrorCode::InvalidArgument, "StepFn needs k+1 breakpoints for k values");
    if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
      throw Error(ErrorCode::InvalidArgument, "StepFn breakpoints must run from 0 to 1");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      if (!(breaks_[i] > breaks_[i - 1]))
        throw Error(ErrorCode::InvalidArgument, "StepFn breakpoints must be strictly increasing");
    for (double v : values_)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "StepFn value is not finite");
  }

  static StepFn constant(double c) { return StepFn({0.0, 1.0}, {c}); }

  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double width(std::size_t i) const { return breaks_[i + 1] - breaks_[i]; }

  /// Index of the interval (breaks[i], breaks[i+1]] containing u; u <= 0 maps to 0.
  std::size_t index_of(double u) const {
    auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), u);
    if (it == breaks_.end()) return values_.size() - 1;
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
  }

  double operator()(double u) const { return values_[index_of(u)]; }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// Union of two breakpoint sets on [0,1]; points within kBreakTol of an
/// already kept point are dropped so that no interval is numerically empty.
inline std::vector<double> refine(std::span<const double> a, std::span<const double> b) {
  std::vector<double> all;
  all.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));
  std::vector<double> out{0.0};
  for (double u : all) {
    if (u <= kBreakTol || u >= 1.0 - kBreakTol) continue;
    if (u - out.back() > kBreakTol) out.push_back(u);
  }
  out.push_back(1.0);
  return out;
}

/// Midpoints of the intervals of a partition.
inline std::vector<double> midpoints(std::span<const double> breaks) {
  std::vector<double> mids(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) mids[i] = 0.5 * (breaks[i] + breaks[i + 1]);
  return mids;
}

/// f resampled on a finer partition (values taken at interval midpoints).
inline StepFn resample(const StepFn& f, std::vector<double> breaks) {
  std::vector<double> vals;
  vals.reserve(breaks.size() - 1);
  for (double m : midpoints(breaks)) vals.push_back(f(m));
  return StepFn(std::move(breaks), std::move(vals));
}

/// f - g on the common refinement of their breakpoints.
inline StepFn subtract(const StepFn& f, const StepFn& g) {
  auto breaks = refine(f.breaks(), g.breaks());
  std::vector<double> vals;
  vals.reserve(breaks.size() - 1);
  for (double m : midpoints(breaks)) vals.push_back(f(m) - g(m));
  return StepFn(std::move(breaks), std::move(vals));
}

struct Vertex {
  double u;
  double y;
};

namespace detail {

inline double y_scale(std::span<const Vertex> pts) {
  double s = 1.0;
  for (const auto& v : pts) s = std::max(s, std::abs(v.y));
  return s;
}

// How far `mid` lies below the chord from `lo` to `hi` (negative when above).
inline double depth_below_chord(const Vertex& lo, const Vertex& mid, const Vertex& hi) {
  const double t = (mid.u - lo.u) / (hi.u - lo.u);
  return lo.y + t * (hi.y - lo.y) - mid.y;
}

inline bool within_collinear_tol(const Vertex& lo, const Vertex& mid, const Vertex& hi,
                                 double scale) {
  return depth_below_chord(lo, mid, hi) <= kCollinearTol * (hi.u - lo.u) * scale;
}

/// Monotone-chain lower hull of points sorted by strictly increasing u.
/// Points lying on or within tolerance above a chord are discarded.
inline std::vector<Vertex> lower_hull(std::span<const Vertex> pts) {
  if (pts.size() <= 2) return {pts.begin(), pts.end()};
  const double scale = y_scale(pts);
  std::vector<Vertex> hull;
  hull.reserve(pts.size());
  for (const auto& p : pts) {
    while (hull.size() >= 2 && within_collinear_tol(hull[hull.size() - 2], hull.back(), p, scale))
      hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

inline std::vector<Vertex> drop_collinear(std::span<const Vertex> pts) {
  if (pts.size() <= 2) return {pts.begin(), pts.end()};
  const double scale = y_scale(pts);
  std::vector<Vertex> out{pts.front()};
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double d = depth_below_chord(out.back(), pts[i], pts[i + 1]);
    if (std::abs(d) > kCollinearTol * (pts[i + 1].u - out.back().u) * scale) out.push_back(pts[i]);
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace detail

/// Continuous piecewise-linear function on [0,1], stored by its vertices in
/// canonical form (no interior vertex collinear with its neighbours).
class PiecewiseLinearFn {
 public:
  explicit PiecewiseLinearFn(std::vector<Vertex> vertices) {
    if (vertices.size() < 2)
      throw Error(ErrorCode::InvalidArgument, "PiecewiseLinearFn needs at least two vertices");
    if (vertices.front().u != 0.0 || vertices.back().u != 1.0)
      throw Error(ErrorCode::InvalidArgument, "PiecewiseLinearFn must span [0,1]");
    for (std::size_t i = 1; i < vertices.size(); ++i)
      if (!(vertices[i].u > vertices[i - 1].u))
        throw Error(ErrorCode::InvalidArgument, "vertex abscissae must be strictly increasing");
    for (const auto& v : vertices)
      if (!std::isfinite(v.y)) throw Error(ErrorCode::InvalidArgument, "vertex value is not finite");
    vertices_ = detail::drop_collinear(vertices);
  }

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }

  double operator()(double u) const {
    auto it = std::lower_bound(vertices_.begin() + 1, vertices_.end(), u,
                               [](const Vertex& v, double x) { return v.u < x; });
    if (it == vertices_.end()) return vertices_.back().y;
    const Vertex& hi = *it;
    const Vertex& lo = *(it - 1);
    return lo.y + (u - lo.u) / (hi.u - lo.u) * (hi.y - lo.y);
  }

 private:
  std::vector<Vertex> vertices_;
};

/// F(u) = y0 + integral of f over (0,u], computed exactly.
inline PiecewiseLinearFn antiderivative(const StepFn& f, double y0) {
  std::vector<Vertex> v;
  v.reserve(f.breaks().size());
  v.push_back({0.0, y0});
  double acc = y0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    acc += f.values()[i] * f.width(i);
    v.push_back({f.breaks()[i + 1], acc});
  }
  return PiecewiseLinearFn(std::move(v));
}

/// Greatest convex function below F. For piecewise-linear input the hull is
/// the lower hull of the vertex set.
inline PiecewiseLinearFn lower_convex_hull(const PiecewiseLinearFn& f) {
  return PiecewiseLinearFn(detail::lower_hull(f.vertices()));
}

/// Segment slopes of C as a step function. Breakpoint values follow the
/// (.,.] convention, which agrees with both one-sided derivatives a.e.
inline StepFn right_derivative(const PiecewiseLinearFn& c) {
  const auto& v = c.vertices();
  std::vector<double> breaks;
  std::vector<double> slopes;
  breaks.reserve(v.size());
  slopes.reserve(v.size() - 1);
  breaks.push_back(0.0);
  for (std::size_t i = 1; i < v.size(); ++i) {
    slopes.push_back((v[i].y - v[i - 1].y) / (v[i].u - v[i - 1].u));
    breaks.push_back(v[i].u);
  }
  return StepFn(std::move(breaks), std::move(slopes));
}

/// L^p norm on (0,1) with respect to Lebesgue measure.
inline double lp_norm(const StepFn& f, double p) {
  require_valid_p(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f.values()[i]);
    acc += (p == 1.0 ? a : std::pow(a, p)) * f.width(i);
  }
  return p == 1.0 ? acc : std::pow(acc, 1.0 / p);
}

}  // namespace wproj
