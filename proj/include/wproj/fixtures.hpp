#pragma once

// Named measure families with known projections, lattice operations and
// distances. Used by the replay command, the acceptance suite and tests.

#include <cmath>
#include <vector>

#include "wproj/error.hpp"
#include "wproj/measures.hpp"

namespace wproj::fixtures {

/// (1 - a) delta_{-a^2} + a delta_1, a in (0,1). Barycenter a(1 - a(1 - a)).
inline DiscreteMeasure two_point_alpha(double a) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
  return DiscreteMeasure::from_atoms({{-a * a, 1.0 - a}, {1.0, a}});
}

/// a(1 - a(1 - a)): where I(delta_0, two_point_alpha(a)) sits.
inline double two_point_alpha_mean(double a) { return a * (1.0 - a * (1.0 - a)); }

/// W_1(I(nu_a, nu_a), I(delta_0, nu_a)) in closed form.
inline double two_point_alpha_projection_gap(double a) {
  return 2.0 * (a + a * a * (a * (1.0 - a) - 1.0));
}

/// W_1(delta_0, nu_a) in closed form.
inline double two_point_alpha_distance(double a) { return a + a * a * (1.0 - a); }

/// Three measures on the grid {i/n} with eta <=_c mu <=_c nu.
struct LatticeFamily {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  DiscreteMeasure eta;
};

inline LatticeFamily lattice_family(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "lattice family needs n >= 3");
  const double dn = n;
  std::vector<Atom> nu{{0.0, 0.5 / dn}};
  for (int i = 1; i < n; ++i) nu.push_back({i / dn, 1.0 / dn});
  nu.push_back({1.0, 0.5 / dn});

  std::vector<Atom> mu;
  for (int i = 1; i <= n; ++i) mu.push_back({(2.0 * i - 1.0) / (2.0 * dn), 1.0 / dn});

  std::vector<Atom> eta{{1.0 / dn, 1.5 / dn}};
  for (int i = 2; i <= n - 2; ++i) eta.push_back({i / dn, 1.0 / dn});
  eta.push_back({(dn - 1.0) / dn, 1.5 / dn});

  return {DiscreteMeasure::from_atoms(std::move(mu)), DiscreteMeasure::from_atoms(std::move(nu)),
          DiscreteMeasure::from_atoms(std::move(eta))};
}

/// Four continuous measures for which the I-bound holds with equality in
/// its p-th power form, plus the two expected projections.
struct EqualityQuadruple {
  GeneralQuantile mu;
  GeneralQuantile mu2;
  GeneralQuantile nu;
  GeneralQuantile nu2;
  GeneralQuantile expected_I;   ///< I(mu, nu)
  GeneralQuantile expected_I2;  ///< I(mu2, nu2)
};

inline EqualityQuadruple equality_quadruple() {
  using P = GeneralQuantile::Piece;
  // u on (0,1/2], (1+u)/2 on (1/2,1)
  GeneralQuantile mu({P{0.5, 1.0, 0.5}, P{1.0, 0.5, 1.0}});
  // u on (0,1/2], (12+5u)/18 on (1/2,1)
  GeneralQuantile mu2({P{0.5, 1.0, 0.5}, P{1.0, 5.0 / 18.0, 17.0 / 18.0}});
  // u/2
  GeneralQuantile nu({P{1.0, 0.5, 0.5}});
  // u/3 on (0,1/2], u/2 on (1/2,1)
  GeneralQuantile nu2({P{0.5, 1.0 / 3.0, 1.0 / 6.0}, P{1.0, 0.5, 0.5}});
  GeneralQuantile i1({P{1.0, 0.5, 0.5}});
  // u/3 on (0,1/2], (3+5u)/18 on (1/2,1)
  GeneralQuantile i2({P{0.5, 1.0 / 3.0, 1.0 / 6.0}, P{1.0, 5.0 / 18.0, 8.0 / 18.0}});
  return {mu, mu2, nu, nu2, i1, i2};
}

}  // namespace wproj::fixtures
