#pragma once

// Finitely supported probability measures on the line and their quantile
// functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "wproj/error.hpp"
#include "wproj/hull.hpp"

namespace wproj {

/// Positions closer than this are merged into a single atom.
inline constexpr double kMergeTol = 1e-12;

struct Atom {
  double x;
  double w;
};

class StepQuantile;

/// Probability measure with finitely many atoms. Atoms are sorted strictly
/// increasing in position, weights are positive and sum to one.
class DiscreteMeasure {
 public:
  /// Sorts, merges positions within kMergeTol and renormalizes weights.
  static DiscreteMeasure from_atoms(std::vector<Atom> raw) {
    if (raw.empty()) throw Error(ErrorCode::EmptyInput, "measure needs at least one atom");
    for (const auto& a : raw) {
      if (!std::isfinite(a.x)) throw Error(ErrorCode::InvalidArgument, "atom position is not finite");
      if (!(a.w > 0.0) || !std::isfinite(a.w))
        throw Error(ErrorCode::NonPositiveWeight, "atom weights must be positive and finite");
    }
    std::stable_sort(raw.begin(), raw.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });

    std::vector<Atom> merged;
    merged.reserve(raw.size());
    double anchor = raw.front().x;
    double wsum = 0.0, wxsum = 0.0;
    auto flush = [&] { merged.push_back({wxsum / wsum, wsum}); };
    for (const auto& a : raw) {
      if (a.x - anchor > kMergeTol) {
        flush();
        anchor = a.x;
        wsum = wxsum = 0.0;
      }
      wsum += a.w;
      wxsum += a.w * a.x;
    }
    flush();

    double total = 0.0;
    for (const auto& a : merged) total += a.w;
    for (auto& a : merged) a.w /= total;
    return DiscreteMeasure(std::move(merged));
  }

  static DiscreteMeasure from_atoms(std::span<const double> xs, std::span<const double> ws) {
    if (xs.size() != ws.size())
      throw Error(ErrorCode::InvalidArgument, "positions and weights differ in length");
    std::vector<Atom> raw(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) raw[i] = {xs[i], ws[i]};
    return from_atoms(std::move(raw));
  }

  static DiscreteMeasure dirac(double x) { return DiscreteMeasure({{x, 1.0}}); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  double barycenter() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.w * a.x;
    return m;
  }

  /// Cumulative weights 0 = c_0 < c_1 < ... < c_k = 1.
  std::vector<double> cumulative() const {
    std::vector<double> c(atoms_.size() + 1);
    c[0] = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) c[i + 1] = c[i] + atoms_[i].w;
    c.back() = 1.0;
    return c;
  }

  StepQuantile quantile() const;

 private:
  explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

  std::vector<Atom> atoms_;
};

inline DiscreteMeasure from_atoms(std::vector<Atom> raw) {
  return DiscreteMeasure::from_atoms(std::move(raw));
}

inline double barycenter(const DiscreteMeasure& m) { return m.barycenter(); }

/// Same number of atoms, positions and weights pairwise within tol.
inline bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.atoms()[i].x - b.atoms()[i].x) > tol) return false;
    if (std::abs(a.atoms()[i].w - b.atoms()[i].w) > tol) return false;
  }
  return true;
}

/// Left-continuous quantile function of a discrete measure: a non-decreasing
/// step function on (0,1].
class StepQuantile {
 public:
  explicit StepQuantile(StepFn steps) : steps_(std::move(steps)) {
    const auto& v = steps_.values();
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] < v[i - 1])
        throw Error(ErrorCode::InvalidArgument, "quantile values must be non-decreasing");
  }

  const StepFn& steps() const noexcept { return steps_; }
  const std::vector<double>& breaks() const noexcept { return steps_.breaks(); }
  const std::vector<double>& values() const noexcept { return steps_.values(); }
  double operator()(double u) const { return steps_(u); }

  /// Inverse of DiscreteMeasure::quantile.
  DiscreteMeasure to_measure() const {
    std::vector<Atom> atoms(steps_.size());
    for (std::size_t i = 0; i < steps_.size(); ++i) atoms[i] = {steps_.values()[i], steps_.width(i)};
    return DiscreteMeasure::from_atoms(std::move(atoms));
  }

 private:
  StepFn steps_;
};

inline StepQuantile DiscreteMeasure::quantile() const {
  std::vector<double> vals(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) vals[i] = atoms_[i].x;
  return StepQuantile(StepFn(cumulative(), std::move(vals)));
}

inline StepQuantile quantile(const DiscreteMeasure& m) { return m.quantile(); }

/// Non-decreasing, piecewise-affine quantile function, possibly with jumps.
/// On (u_lo, u_hi] the value is value_hi - slope * (u_hi - u).
class GeneralQuantile {
 public:
  struct Piece {
    double u_hi;
    double slope;
    double value_hi;
  };

  explicit GeneralQuantile(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw Error(ErrorCode::EmptyInput, "quantile needs at least one piece");
    double lo = 0.0;
    double prev_hi_value = -INFINITY;
    for (const auto& p : pieces_) {
      if (!std::isfinite(p.u_hi) || !std::isfinite(p.slope) || !std::isfinite(p.value_hi))
        throw Error(ErrorCode::InvalidArgument, "quantile piece has non-finite fields");
      if (!(p.u_hi > lo)) throw Error(ErrorCode::InvalidArgument, "piece endpoints must increase");
      if (p.slope < 0.0) throw Error(ErrorCode::InvalidArgument, "piece slope must be non-negative");
      const double left_limit = p.value_hi - p.slope * (p.u_hi - lo);
      if (left_limit < prev_hi_value - 1e-12)
        throw Error(ErrorCode::InvalidArgument, "quantile must be non-decreasing across pieces");
      prev_hi_value = p.value_hi;
      lo = p.u_hi;
    }
    if (std::abs(pieces_.back().u_hi - 1.0) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, "last piece must end at u = 1");
    pieces_.back().u_hi = 1.0;
  }

  /// Step-quantile embedding (all slopes zero).
  static GeneralQuantile from_step(const StepQuantile& q) {
    std::vector<Piece> pieces(q.values().size());
    for (std::size_t i = 0; i < pieces.size(); ++i) pieces[i] = {q.breaks()[i + 1], 0.0, q.values()[i]};
    return GeneralQuantile(std::move(pieces));
  }

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  double operator()(double u) const {
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), u,
                               [](const Piece& p, double x) { return p.u_hi < x; });
    if (it == pieces_.end()) it = pieces_.end() - 1;
    return it->value_hi - it->slope * (it->u_hi - u);
  }

  /// Exact barycenter of the represented measure.
  double mean() const {
    double lo = 0.0, m = 0.0;
    for (const auto& p : pieces_) {
      const double w = p.u_hi - lo;
      m += w * (p.value_hi - 0.5 * p.slope * w);
      lo = p.u_hi;
    }
    return m;
  }

  double max_slope() const {
    double s = 0.0;
    for (const auto& p : pieces_) s = std::max(s, p.slope);
    return s;
  }

 private:
  std::vector<Piece> pieces_;
};

/// n equally weighted atoms at the midpoint quantiles q((i - 1/2)/n).
inline DiscreteMeasure discretize(const GeneralQuantile& q, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "discretization size must be positive");
  std::vector<Atom> atoms(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) atoms[i] = {q((static_cast<double>(i) + 0.5) / dn), 1.0 / dn};
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

}  // namespace wproj
