#pragma once

#include <string_view>
#include <utility>

#include "entvir/quadratic.hpp"

namespace entvir {

enum class UniversalityClass { None, Ising, Boson };

// A point (lambda, gamma) of the XY family
//
//   H = -1/2 sum_j [ (1+gamma)/2 sx_j sx_{j+1}
//                  + (1-gamma)/2 sy_j sy_{j+1} + lambda sz_j ].
//
// The critical line lambda = 1, gamma != 0 is Ising-class (c = 1/2); the
// segment 0 <= lambda < 1, gamma = 0 is boson-class (c = 1). On the Ising
// line the densities are rescaled by 1/gamma so the excitation velocity is 1.
struct ModelParams {
  double lambda = 1.0;
  double gamma = 1.0;
  UniversalityClass universality = UniversalityClass::None;
  double central_charge = 0.0;
  double velocity_rescale = 1.0;

  static ModelParams make(double lambda, double gamma);
  // "ising" = (1,1), "xy09" = (1,0.9), "xx" = (0,0).
  static ModelParams preset(std::string_view name);
};

// omega_k = velocity_rescale * sqrt((cos k - lambda)^2 + gamma^2 sin^2 k).
double dispersion(const ModelParams& params, double k);

// Ground-state two-point functions at separation d = n - m:
//   aadag = <a_n a+_m>,  aa = <a_n a_m>.
// Closed forms at the Ising and XX points, adaptive Gauss-Kronrod otherwise.
struct CorrelatorPair {
  Complex aadag;
  Complex aa;
};
CorrelatorPair correlator(const ModelParams& params, long d);
// Quadrature route regardless of closed forms; used as the cross-check.
CorrelatorPair correlator_quadrature(const ModelParams& params, long d);

// <h_{j,j+1}> in the infinite-chain ground state, including the velocity
// rescale. Subtracted from the density so that weighted sums of h have no
// extensive identity component.
double ground_energy_density(const ModelParams& params);

// Two-site density h_{j,j+1} on an interval of L sites (bond j couples sites
// j, j+1; sites are 0-based, 0 <= j <= L-2):
//   h = 1/2 (a+_{j+1} a_j + gamma a_{j+1} a_j + h.c.)
//       - lambda/2 (n_j + n_{j+1}) - e0,
// all times velocity_rescale (e0 already includes it).
QuadraticOperator hamiltonian_density(const ModelParams& params, long j,
                                      long sites);

// Three-site momentum density centered on site j (1 <= j <= L-2), defined as
// -i [h_{j-1,j}, h_{j,j+1}] of the rescaled densities.
QuadraticOperator momentum_density(const ModelParams& params, long j,
                                   long sites);

}  // namespace entvir
