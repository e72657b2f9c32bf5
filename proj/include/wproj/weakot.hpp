#pragma once

// Barycentric weak optimal transport for p = 2, solved directly over the
// transportation polytope. This is an independent route to the value
// W_2^2(mu, I(mu,nu)); nothing here uses quantile functions or hulls.
//
//   V(mu,nu) = min_{pi in Pi(mu,nu)} sum_i mu_i (x_i - sum_j pi_ij y_j / mu_i)^2
//
// The objective is convex in pi. It is minimized by projected gradient
// descent with backtracking; the Euclidean projection onto the polytope is
// computed by Dykstra's alternating projections between the affine marginal
// constraints and the non-negative orthant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wproj/error.hpp"
#include "wproj/measures.hpp"

namespace wproj {

/// Coupling between two discrete measures, stored row-major (rows = mu).
class TransportPlan {
 public:
  TransportPlan(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), mass_(rows * cols, 0.0) {}

  static TransportPlan product(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    TransportPlan plan(mu.size(), nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t j = 0; j < nu.size(); ++j) plan(i, j) = mu.atoms()[i].w * nu.atoms()[j].w;
    return plan;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return mass_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return mass_[i * cols_ + j]; }
  std::vector<double>& data() noexcept { return mass_; }
  const std::vector<double>& data() const noexcept { return mass_; }

  std::vector<double> row_sums() const {
    std::vector<double> r(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j);
    return r;
  }

  std::vector<double> col_sums() const {
    std::vector<double> c(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) c[j] += (*this)(i, j);
    return c;
  }

  /// Largest violation of the marginal constraints or of non-negativity.
  double marginal_error(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const {
    double err = 0.0;
    const auto r = row_sums();
    const auto c = col_sums();
    for (std::size_t i = 0; i < rows_; ++i) err = std::max(err, std::abs(r[i] - mu.atoms()[i].w));
    for (std::size_t j = 0; j < cols_; ++j) err = std::max(err, std::abs(c[j] - nu.atoms()[j].w));
    for (double m : mass_) err = std::max(err, -m);
    return err;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> mass_;
};

/// Image of mu under x_i -> barycenter of the row kernel pi_i / mu_i.
inline DiscreteMeasure plan_barycenter_pushforward(const TransportPlan& plan,
                                                   const DiscreteMeasure& mu,
                                                   const DiscreteMeasure& nu) {
  std::vector<Atom> atoms(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double b = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) b += plan(i, j) * nu.atoms()[j].x;
    atoms[i] = {b / mu.atoms()[i].w, mu.atoms()[i].w};
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

struct WeakOtOptions {
  int max_iter = 100000;
  double tol = 1e-10;  ///< stop when one step lowers the objective by less
  double marginal_tol = 1e-12;
  int max_projection_iter = 200000;
};

struct WeakOtSolution {
  double value;  ///< V_2^2(mu, nu)
  TransportPlan plan;
  int iterations;
};

namespace detail {

class WeakOtProblem {
 public:
  WeakOtProblem(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const WeakOtOptions& opt)
      : mu_(mu), nu_(nu), opt_(opt), n_(mu.size()), m_(nu.size()) {}

  double objective(const TransportPlan& pi) const {
    double f = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = residual(pi, i);
      f += r * r / mu_.atoms()[i].w;
    }
    return f;
  }

  std::vector<double> gradient(const TransportPlan& pi) const {
    std::vector<double> g(n_ * m_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double coef = -2.0 * residual(pi, i) / mu_.atoms()[i].w;
      for (std::size_t j = 0; j < m_; ++j) g[i * m_ + j] = coef * nu_.atoms()[j].x;
    }
    return g;
  }

  /// Upper bound on the gradient's Lipschitz constant.
  double lipschitz() const {
    double ysq = 0.0, amin = 1.0;
    for (const auto& a : nu_.atoms()) ysq += a.x * a.x;
    for (const auto& a : mu_.atoms()) amin = std::min(amin, a.w);
    return std::max(2.0 * ysq / amin, 1e-12);
  }

  /// Euclidean projection onto Pi(mu, nu).
  TransportPlan project(TransportPlan x) const {
    std::vector<double> q(n_ * m_, 0.0);
    for (int it = 0; it < opt_.max_projection_iter; ++it) {
      project_affine(x);
      auto& d = x.data();
      for (std::size_t k = 0; k < d.size(); ++k) {
        const double y = d[k] + q[k];
        d[k] = std::max(y, 0.0);
        q[k] = y - d[k];
      }
      if (x.marginal_error(mu_, nu_) <= opt_.marginal_tol) return x;
    }
    throw Error(ErrorCode::NoConvergence, "polytope projection did not reach the marginal tolerance");
  }

 private:
  // a_i x_i - sum_j pi_ij y_j
  double residual(const TransportPlan& pi, std::size_t i) const {
    double b = 0.0;
    for (std::size_t j = 0; j < m_; ++j) b += pi(i, j) * nu_.atoms()[j].x;
    return mu_.atoms()[i].w * mu_.atoms()[i].x - b;
  }

  // Closed-form projection onto {row sums = mu, column sums = nu}:
  // pi_ij += alpha_i + beta_j.
  void project_affine(TransportPlan& x) const {
    const auto r = x.row_sums();
    const auto c = x.col_sums();
    double total = 0.0;
    for (double v : r) total += v;
    const double dn = static_cast<double>(n_), dm = static_cast<double>(m_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double alpha = (mu_.atoms()[i].w - r[i] - (1.0 - total) / dn) / dm;
      for (std::size_t j = 0; j < m_; ++j) {
        const double beta = (nu_.atoms()[j].w - c[j]) / dn;
        x(i, j) += alpha + beta;
      }
    }
  }

  const DiscreteMeasure& mu_;
  const DiscreteMeasure& nu_;
  const WeakOtOptions& opt_;
  std::size_t n_;
  std::size_t m_;
};

}  // namespace detail

inline WeakOtSolution solve_weak_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const WeakOtOptions& opt = {}) {
  const detail::WeakOtProblem problem(mu, nu, opt);
  TransportPlan pi = TransportPlan::product(mu, nu);
  double f = problem.objective(pi);
  double step = 1.0 / problem.lipschitz();

  for (int it = 1; it <= opt.max_iter; ++it) {
    const auto g = problem.gradient(pi);
    step *= 2.0;
    for (;;) {
      TransportPlan trial = pi;
      for (std::size_t k = 0; k < g.size(); ++k) trial.data()[k] -= step * g[k];
      trial = problem.project(std::move(trial));

      double lin = 0.0, sq = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double d = trial.data()[k] - pi.data()[k];
        lin += g[k] * d;
        sq += d * d;
      }
      const double f_trial = problem.objective(trial);
      if (f_trial <= f + lin + sq / (2.0 * step) + 1e-16 || step < 1e-18) {
        const double decrease = f - f_trial;
        pi = std::move(trial);
        f = std::min(f, f_trial);
        if (decrease < opt.tol) return {std::max(f, 0.0), std::move(pi), it};
        break;
      }
      step *= 0.5;
    }
  }
  throw Error(ErrorCode::NoConvergence, "weak transport solver hit the iteration limit");
}

/// V_p^p(mu, nu) for p = 2.
inline double weak_ot_value(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p = 2.0,
                            int max_iter = 100000, double tol = 1e-10) {
  if (p != 2.0) throw Error(ErrorCode::InvalidArgument, "the weak transport solver supports p = 2 only");
  WeakOtOptions opt;
  opt.max_iter = max_iter;
  opt.tol = tol;
  return solve_weak_ot(mu, nu, opt).value;
}

}  // namespace wproj
