#include "entvir/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>

#include "eigs.hpp"
#include "entvir/errors.hpp"

namespace entvir {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNuFloor = 1e-300;
constexpr double kHalfTol = 1e-12;

double clip_nu(double nu) {
  if (!(nu > kNuFloor)) return kNuFloor;
  return std::min(nu, 0.5);
}

double mode_energy(double nu) { return std::log1p(-nu) - std::log(nu); }

struct ModeRow {
  Eigen::VectorXcd a, b;
  double nu;
  int charge;  // 0 when undefined
};

void gauge_fix(ModeRow& m) {
  Eigen::Index best = 0;
  double best_mag = 0.0;
  bool in_b = false;
  for (Eigen::Index j = 0; j < m.a.size(); ++j) {
    if (std::abs(m.a[j]) > best_mag) { best_mag = std::abs(m.a[j]); best = j; in_b = false; }
    if (std::abs(m.b[j]) > best_mag) { best_mag = std::abs(m.b[j]); best = j; in_b = true; }
  }
  if (best_mag == 0.0) return;
  const Complex z = in_b ? m.b[best] : m.a[best];
  const Complex phase = std::conj(z) / std::abs(z);
  m.a *= phase;
  m.b *= phase;
}

DiagonalizeResult assemble(std::vector<ModeRow> modes) {
  // Canonical mode order: single-particle energy ascending (nu descending).
  std::stable_sort(modes.begin(), modes.end(),
                   [](const ModeRow& x, const ModeRow& y) { return x.nu > y.nu; });
  const Eigen::Index L = static_cast<Eigen::Index>(modes.size());
  DiagonalizeResult out;
  out.transform.A.resize(L, L);
  out.transform.B.resize(L, L);
  out.spectrum.nus.resize(L);
  out.spectrum.energies.resize(L);
  bool charged = true;
  double log_norm = 0.0;
  for (Eigen::Index i = 0; i < L; ++i) {
    gauge_fix(modes[i]);
    out.transform.A.row(i) = modes[i].a.transpose();
    out.transform.B.row(i) = modes[i].b.transpose();
    const double nu = clip_nu(modes[i].nu);
    out.spectrum.nus[i] = nu;
    out.spectrum.energies[i] = mode_energy(nu);
    log_norm += std::log1p(-nu);
    charged = charged && modes[i].charge != 0;
  }
  out.spectrum.log_norm = log_norm;
  if (charged) {
    out.transform.mode_charge.resize(L);
    for (Eigen::Index i = 0; i < L; ++i)
      out.transform.mode_charge[i] = modes[i].charge;
  }
  return out;
}

void check_pairing(const Eigen::VectorXd& all_eigs,
                   const std::vector<double>& lower) {
  std::vector<double> mirrored;
  mirrored.reserve(2 * lower.size());
  for (double nu : lower) {
    mirrored.push_back(nu);
    mirrored.push_back(1.0 - nu);
  }
  std::sort(mirrored.begin(), mirrored.end());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < all_eigs.size(); ++i)
    worst = std::max(worst, std::abs(all_eigs[i] - mirrored[i]));
  if (worst > 1e-8)
    throw numeric_error("(nu, 1-nu) pairing-match failure, worst deviation " +
                        std::to_string(worst));
}

// Pairs the exactly-half eigenspace. The swap S(v, w) = (w, v) satisfies
// S Gamma S = 1 - Gamma on real matrices, so it preserves the nu = 1/2
// eigenspace; modes are built as (p + q)/sqrt(2) with p, q from the S = +1
// and S = -1 subspaces, which guarantees each mode is orthogonal to its
// particle-hole image.
std::vector<ModeRow> pair_half_space_real(const Eigen::MatrixXd& half) {
  const Eigen::Index twoL = half.rows();
  const Eigen::Index L = twoL / 2;
  Eigen::MatrixXd swapped(twoL, half.cols());
  swapped.topRows(L) = half.bottomRows(L);
  swapped.bottomRows(L) = half.topRows(L);
  Eigen::MatrixXd plus = 0.5 * (half + swapped);
  Eigen::MatrixXd minus = 0.5 * (half - swapped);
  auto orthonormalize = [](Eigen::MatrixXd m) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-9);
    const Eigen::Index r = qr.rank();
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), r);
    return q;
  };
  const Eigen::MatrixXd qp = orthonormalize(plus);
  const Eigen::MatrixXd qm = orthonormalize(minus);
  if (qp.cols() != qm.cols() || qp.cols() + qm.cols() != half.cols())
    throw numeric_error("(nu, 1-nu) pairing-match failure in the nu = 1/2 eigenspace");
  std::vector<ModeRow> out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index k = 0; k < qp.cols(); ++k) {
    Eigen::VectorXd u = inv_sqrt2 * (qp.col(k) + qm.col(k));
    ModeRow m;
    m.a = u.head(L).cast<Complex>();
    m.b = u.tail(L).cast<Complex>();
    m.nu = 0.5;
    m.charge = 0;
    out.push_back(std::move(m));
  }
  return out;
}

// Complex analogue: the particle-hole map C(u) = S conj(u) is an antiunitary
// involution on the half space; an orthonormal C-fixed real basis r_k yields
// pairs (r_{2k-1} + i r_{2k})/sqrt(2).
std::vector<ModeRow> pair_half_space_complex(const Eigen::MatrixXcd& half) {
  const Eigen::Index twoL = half.rows();
  const Eigen::Index L = twoL / 2;
  auto ph = [&](const Eigen::VectorXcd& u) {
    Eigen::VectorXcd v(twoL);
    v.head(L) = u.tail(L).conjugate();
    v.tail(L) = u.head(L).conjugate();
    return v;
  };
  std::vector<Eigen::VectorXcd> fixed;
  auto try_add = [&](Eigen::VectorXcd w) {
    for (const auto& r : fixed) w -= (r.dot(w)).real() * r;
    const double n = w.norm();
    if (n > 1e-7) fixed.push_back(w / n);
  };
  for (Eigen::Index j = 0; j < half.cols(); ++j) {
    const Eigen::VectorXcd u = half.col(j);
    try_add(u + ph(u));
    try_add(Complex{0.0, 1.0} * (u - ph(u)));
  }
  if (static_cast<Eigen::Index>(fixed.size()) != half.cols() ||
      fixed.size() % 2 != 0)
    throw numeric_error("(nu, 1-nu) pairing-match failure in the nu = 1/2 eigenspace");
  std::vector<ModeRow> out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (size_t k = 0; k + 1 < fixed.size(); k += 2) {
    const Eigen::VectorXcd u =
        inv_sqrt2 * (fixed[k] + Complex{0.0, 1.0} * fixed[k + 1]);
    ModeRow m;
    m.a = u.head(L);
    m.b = u.tail(L);
    m.nu = 0.5;
    m.charge = 0;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

bool CorrelationMatrix::number_conserving() const {
  const Eigen::Index L = sites();
  return gamma.topRightCorner(L, L).cwiseAbs().maxCoeff() == 0.0 &&
         gamma.bottomLeftCorner(L, L).cwiseAbs().maxCoeff() == 0.0;
}

bool CorrelationMatrix::is_real() const {
  return gamma.imag().cwiseAbs().maxCoeff() == 0.0;
}

CorrelationMatrix build_correlation_matrix(const ModelParams& params,
                                           long sites) {
  if (sites < 2 || sites % 2 != 0)
    throw std::invalid_argument("interval length must be even and >= 2");
  const long L = sites;
  std::vector<Complex> f(L), g(L);
  // One correlator evaluation per distinct separation; quadrature models
  // spread the separations over threads.
  detail::parallel_for(L, [&](long lo, long hi) {
    for (long d = lo; d < hi; ++d) {
      const CorrelatorPair c = correlator(params, d);
      f[d] = c.aadag;
      g[d] = c.aa;
    }
  });

  CorrelationMatrix out;
  out.gamma.resize(2 * L, 2 * L);
  for (long i = 0; i < L; ++i) {
    for (long j = 0; j < L; ++j) {
      const long d = i - j;
      const Complex fd = f[std::labs(d)];
      const Complex gd = d >= 0 ? g[d] : Complex{-g[-d].real(), -g[-d].imag()};
      out.gamma(i, j) = (i == j ? 1.0 : 0.0) - fd;  // <a+_i a_j>, f even
      out.gamma(i, L + j) = -gd;                    // <a+_i a+_j> = g(j - i)
      out.gamma(L + i, j) = gd;                     // <a_i a_j>  = g(i - j)
      out.gamma(L + i, L + j) = fd;                 // <a_i a+_j>
    }
  }
  return out;
}

Eigen::MatrixXcd BogoliubovTransform::unitary() const {
  const Eigen::Index L = modes();
  Eigen::MatrixXcd u(2 * L, 2 * L);
  u.topLeftCorner(L, L) = A;
  u.topRightCorner(L, L) = B;
  u.bottomLeftCorner(L, L) = B.conjugate();
  u.bottomRightCorner(L, L) = A.conjugate();
  return u;
}

DiagonalizeResult diagonalize(const CorrelationMatrix& gamma) {
  const Eigen::Index L = gamma.sites();
  std::vector<ModeRow> modes;
  modes.reserve(L);

  if (gamma.number_conserving()) {
    // <a+ a> block alone; hole modes (occupation > 1/2) are particle-hole
    // flipped so every retained nu is <= 1/2.
    Eigen::VectorXd vals;
    Eigen::MatrixXcd vecs;
    if (gamma.is_real()) {
      auto eig = detail::eigh_real(gamma.gamma.topLeftCorner(L, L).real(), true);
      vals = std::move(eig.values);
      vecs = eig.vectors.cast<Complex>();
    } else {
      auto eig = detail::eigh_complex(gamma.gamma.topLeftCorner(L, L), true);
      vals = std::move(eig.values);
      vecs = std::move(eig.vectors);
    }
    for (Eigen::Index k = 0; k < L; ++k) {
      ModeRow m;
      if (vals[k] > 0.5) {
        m.a = Eigen::VectorXcd::Zero(L);
        m.b = vecs.col(k).conjugate();
        m.nu = 1.0 - vals[k];
        m.charge = -1;
      } else {
        m.a = vecs.col(k);
        m.b = Eigen::VectorXcd::Zero(L);
        m.nu = vals[k];
        m.charge = +1;
      }
      modes.push_back(std::move(m));
    }
    return assemble(std::move(modes));
  }

  Eigen::VectorXd vals;
  Eigen::MatrixXcd vecs;
  const bool real_path = gamma.is_real();
  if (real_path) {
    auto eig = detail::eigh_real(gamma.gamma.real(), true);
    vals = std::move(eig.values);
    vecs = eig.vectors.cast<Complex>();
  } else {
    auto eig = detail::eigh_complex(gamma.gamma, true);
    vals = std::move(eig.values);
    vecs = std::move(eig.vectors);
  }

  std::vector<Eigen::Index> half_idx;
  for (Eigen::Index k = 0; k < 2 * L; ++k) {
    if (vals[k] < 0.5 - kHalfTol) {
      ModeRow m;
      m.a = vecs.col(k).head(L);
      m.b = vecs.col(k).tail(L);
      m.nu = vals[k];
      m.charge = 0;
      modes.push_back(std::move(m));
    } else if (vals[k] <= 0.5 + kHalfTol) {
      half_idx.push_back(k);
    }
  }
  if (!half_idx.empty()) {
    std::vector<ModeRow> extra;
    if (real_path) {
      Eigen::MatrixXd half(2 * L, static_cast<Eigen::Index>(half_idx.size()));
      for (size_t c = 0; c < half_idx.size(); ++c)
        half.col(static_cast<Eigen::Index>(c)) = vecs.col(half_idx[c]).real();
      extra = pair_half_space_real(half);
    } else {
      Eigen::MatrixXcd half(2 * L, static_cast<Eigen::Index>(half_idx.size()));
      for (size_t c = 0; c < half_idx.size(); ++c)
        half.col(static_cast<Eigen::Index>(c)) = vecs.col(half_idx[c]);
      extra = pair_half_space_complex(half);
    }
    for (auto& m : extra) modes.push_back(std::move(m));
  }
  if (static_cast<Eigen::Index>(modes.size()) != L)
    throw numeric_error("(nu, 1-nu) pairing-match failure: selected " +
                        std::to_string(modes.size()) + " of " +
                        std::to_string(L) + " modes");
  std::vector<double> lower;
  lower.reserve(L);
  for (const auto& m : modes) lower.push_back(m.nu);
  check_pairing(vals, lower);
  return assemble(std::move(modes));
}

SingleParticleSpectrum single_particle_spectrum(const CorrelationMatrix& gamma) {
  const Eigen::Index L = gamma.sites();
  std::vector<double> lower;
  lower.reserve(L);
  if (gamma.number_conserving()) {
    Eigen::VectorXd vals =
        gamma.is_real()
            ? detail::eigh_real(gamma.gamma.topLeftCorner(L, L).real(), false).values
            : detail::eigh_complex(gamma.gamma.topLeftCorner(L, L), false).values;
    for (Eigen::Index k = 0; k < L; ++k)
      lower.push_back(vals[k] > 0.5 ? 1.0 - vals[k] : vals[k]);
  } else {
    Eigen::VectorXd vals = gamma.is_real()
                               ? detail::eigh_real(gamma.gamma.real(), false).values
                               : detail::eigh_complex(gamma.gamma, false).values;
    for (Eigen::Index k = 0; k < L; ++k) lower.push_back(vals[k]);
    check_pairing(vals, lower);
  }
  std::sort(lower.begin(), lower.end(), std::greater<>());
  SingleParticleSpectrum sp;
  sp.nus.resize(L);
  sp.energies.resize(L);
  double log_norm = 0.0;
  for (Eigen::Index i = 0; i < L; ++i) {
    const double nu = clip_nu(lower[static_cast<size_t>(i)]);
    sp.nus[i] = nu;
    sp.energies[i] = mode_energy(nu);
    log_norm += std::log1p(-nu);
  }
  sp.log_norm = log_norm;
  return sp;
}

std::vector<SchmidtState> enumerate_schmidt(const SingleParticleSpectrum& sp,
                                            std::int64_t count) {
  if (count < 1) throw std::invalid_argument("state count must be >= 1");
  const int L = static_cast<int>(sp.modes());
  if (L < 63 && count > (std::int64_t{1} << L))
    throw std::invalid_argument("state count exceeds 2^L");

  struct Node {
    double sum;
    std::vector<int> subset;
  };
  auto later = [](const Node& x, const Node& y) {
    if (x.sum != y.sum) return x.sum > y.sum;
    return std::lexicographical_compare(y.subset.begin(), y.subset.end(),
                                        x.subset.begin(), x.subset.end());
  };
  // Sums are recomputed ascending-index so exactly degenerate subsets land on
  // bit-identical values and the lexicographic tie-break is reliable.
  auto subset_sum = [&sp](const std::vector<int>& subset) {
    double s = 0.0;
    for (int i : subset) s += sp.energies[i];
    return s;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(later)> frontier(later);
  frontier.push({0.0, {}});

  std::vector<SchmidtState> out;
  out.reserve(static_cast<size_t>(count));
  while (!frontier.empty() &&
         out.size() < static_cast<size_t>(count)) {
    Node node = frontier.top();
    frontier.pop();
    SchmidtState st;
    st.occupation = node.subset;
    st.energy = (node.sum - sp.log_norm) / kTwoPi;
    st.weight = std::exp(-(node.sum - sp.log_norm));
    st.index = static_cast<int>(out.size());
    out.push_back(std::move(st));

    const int last = node.subset.empty() ? -1 : node.subset.back();
    if (last + 1 < L) {
      Node ext;
      ext.subset = node.subset;
      ext.subset.push_back(last + 1);
      ext.sum = subset_sum(ext.subset);
      frontier.push(std::move(ext));
      if (last >= 0) {
        Node shift;
        shift.subset = node.subset;
        shift.subset.back() = last + 1;
        shift.sum = subset_sum(shift.subset);
        frontier.push(std::move(shift));
      }
    }
  }
  return out;
}

double entanglement_entropy(const SingleParticleSpectrum& sp) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < sp.modes(); ++i) {
    const double nu = clip_nu(sp.nus[i]);
    s += -nu * std::log(nu) - (1.0 - nu) * std::log1p(-nu);
  }
  return s;
}

}  // namespace entvir
