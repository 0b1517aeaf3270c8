#include "entvir/model.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "entvir/errors.hpp"

namespace entvir {

namespace {

constexpr double kPi = std::numbers::pi;

double bare_dispersion(const ModelParams& p, double k) {
  const double a = std::cos(k) - p.lambda;
  const double b = p.gamma * std::sin(k);
  return std::hypot(a, b);
}

bool is_ising_point(const ModelParams& p) {
  return p.lambda == 1.0 && p.gamma == 1.0;
}

bool is_xx_point(const ModelParams& p) {
  return p.lambda == 0.0 && p.gamma == 0.0;
}

// Integrates f over [0, pi] with Gauss-Kronrod panels matched to the
// cos(dk)/sin(dk) oscillation, a breakpoint at the Fermi momentum on the
// gamma = 0 line (where the integrand jumps), and density doubling until two
// consecutive composite rules agree to the absolute tolerance.
double oscillatory_integral(const ModelParams& p, long d,
                            const std::function<double(double)>& f) {
  std::vector<double> cuts{0.0, kPi};
  if (p.gamma == 0.0 && std::abs(p.lambda) < 1.0)
    cuts.push_back(std::acos(p.lambda));
  std::sort(cuts.begin(), cuts.end());

  using boost::math::quadrature::gauss_kronrod;
  const long base = std::max<long>(32, std::min<long>(std::labs(d), 1 << 16));
  auto composite = [&](long density) {
    const double width = kPi / static_cast<double>(density);
    double total = 0.0;
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double a = cuts[s], b = cuts[s + 1];
      if (b <= a) continue;
      const long pieces =
          std::max<long>(1, static_cast<long>(std::ceil((b - a) / width)));
      const double h = (b - a) / static_cast<double>(pieces);
      for (long i = 0; i < pieces; ++i)
        total += gauss_kronrod<double, 15>::integrate(f, a + i * h,
                                                      a + (i + 1) * h, 0);
    }
    return total;
  };

  constexpr double kTol = 1e-13;
  double prev = composite(base);
  double err = std::numeric_limits<double>::infinity();
  for (long mult = 2; mult <= 64; mult *= 2) {
    const double next = composite(base * mult);
    err = std::abs(next - prev);
    prev = next;
    if (err <= kTol && std::isfinite(next)) return next;
  }
  throw numeric_error("correlator quadrature did not converge, error estimate " +
                      std::to_string(err));
}

}  // namespace

ModelParams ModelParams::make(double lambda, double gamma) {
  ModelParams p;
  p.lambda = lambda;
  p.gamma = gamma;
  if (lambda == 1.0 && gamma != 0.0) {
    p.universality = UniversalityClass::Ising;
    p.central_charge = 0.5;
    p.velocity_rescale = 1.0 / std::abs(gamma);
  } else if (gamma == 0.0 && lambda >= 0.0 && lambda < 1.0) {
    p.universality = UniversalityClass::Boson;
    p.central_charge = 1.0;
    p.velocity_rescale = 1.0;
  } else {
    p.universality = UniversalityClass::None;
    p.central_charge = 0.0;
    p.velocity_rescale = 1.0;
  }
  return p;
}

ModelParams ModelParams::preset(std::string_view name) {
  if (name == "ising") return make(1.0, 1.0);
  if (name == "xy09") return make(1.0, 0.9);
  if (name == "xx") return make(0.0, 0.0);
  throw std::invalid_argument("unknown model preset: " + std::string(name));
}

double dispersion(const ModelParams& params, double k) {
  return params.velocity_rescale * bare_dispersion(params, k);
}

CorrelatorPair correlator_quadrature(const ModelParams& params, long d) {
  const double dd = static_cast<double>(d);
  const double aadag_int = oscillatory_integral(params, d, [&](double k) {
    return std::cos(dd * k) * (std::cos(k) - params.lambda) /
           bare_dispersion(params, k);
  });
  CorrelatorPair out;
  out.aadag = Complex{(d == 0 ? 0.5 : 0.0) + aadag_int / (2.0 * kPi), 0.0};
  if (params.gamma == 0.0) {
    out.aa = Complex{0.0, 0.0};
  } else {
    const double aa_int = oscillatory_integral(params, d, [&](double k) {
      return std::sin(dd * k) * params.gamma * std::sin(k) /
             bare_dispersion(params, k);
    });
    out.aa = Complex{-aa_int / (2.0 * kPi), 0.0};
  }
  return out;
}

CorrelatorPair correlator(const ModelParams& params, long d) {
  if (is_ising_point(params)) {
    const double dd = static_cast<double>(d);
    const double den = kPi * (4.0 * dd * dd - 1.0);
    CorrelatorPair out;
    out.aadag = Complex{(d == 0 ? 0.5 : 0.0) + 1.0 / den, 0.0};
    out.aa = Complex{-2.0 * dd / den, 0.0};
    return out;
  }
  if (is_xx_point(params)) {
    CorrelatorPair out;
    const double x = 0.5 * kPi * static_cast<double>(d);
    out.aadag = Complex{d == 0 ? 0.5 : 0.5 * std::sin(x) / x, 0.0};
    out.aa = Complex{0.0, 0.0};
    return out;
  }
  return correlator_quadrature(params, d);
}

double ground_energy_density(const ModelParams& params) {
  const double f0 = correlator(params, 0).aadag.real();
  const CorrelatorPair c1 = correlator(params, 1);
  const double f1 = c1.aadag.real();
  const double g1 = c1.aa.real();
  return params.velocity_rescale *
         (-f1 + params.gamma * g1 - params.lambda * (1.0 - f0));
}

QuadraticOperator hamiltonian_density(const ModelParams& params, long j,
                                      long sites) {
  if (j < 0 || j + 1 >= sites)
    throw std::invalid_argument("bond index out of range");
  QuadraticOperator h(OperatorBasis::Site, sites);
  const double s = params.velocity_rescale;
  h.add_hopping(j + 1, j, 0.5 * s);
  h.add_hopping(j, j + 1, 0.5 * s);
  h.add_hopping(j, j, -0.5 * params.lambda * s);
  h.add_hopping(j + 1, j + 1, -0.5 * params.lambda * s);
  if (params.gamma != 0.0) {
    h.add_pair_create(j, j + 1, 0.5 * params.gamma * s);
    h.add_pair_annihilate(j + 1, j, 0.5 * params.gamma * s);
  }
  h.constant = Complex{-ground_energy_density(params), 0.0};
  return h;
}

QuadraticOperator momentum_density(const ModelParams& params, long j,
                                   long sites) {
  if (j < 1 || j + 1 >= sites)
    throw std::invalid_argument("momentum center out of range");
  QuadraticOperator p(OperatorBasis::Site, sites);
  // Commutator of two rescaled densities, hence rescale^2.
  const double s = params.velocity_rescale * params.velocity_rescale;
  const Complex i4{0.0, 0.25 * s};
  const double lam = params.lambda, gam = params.gamma;

  auto add_hop_hc = [&](long a, long b, Complex c) {
    p.add_hopping(a, b, c);
    p.add_hopping(b, a, std::conj(c));
  };
  add_hop_hc(j + 1, j - 1, (1.0 - gam * gam) * i4);
  add_hop_hc(j, j - 1, -lam * i4);
  add_hop_hc(j + 1, j, -lam * i4);
  if (gam != 0.0 && lam != 0.0) {
    const Complex c = gam * lam * i4;
    p.add_pair_annihilate(j, j - 1, c);
    p.add_pair_create(j - 1, j, std::conj(c));
    p.add_pair_annihilate(j + 1, j, -c);
    p.add_pair_create(j, j + 1, -std::conj(c));
  }
  return p;
}

}  // namespace entvir
