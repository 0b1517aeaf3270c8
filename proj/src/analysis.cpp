#include "entvir/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "entvir/errors.hpp"

namespace entvir {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kMatchTolerance = 0.25;
}  // namespace

EpsilonFit fit_epsilon(const std::vector<long>& sizes,
                       const std::vector<double>& gaps) {
  if (sizes.size() != gaps.size())
    throw std::invalid_argument("sizes/gaps length mismatch");
  if (sizes.size() < 3)
    throw std::invalid_argument("epsilon fit needs at least 3 sizes");
  const size_t n = sizes.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(static_cast<double>(sizes[i]));
    const double y = 1.0 / gaps[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const bool degenerate =
      std::all_of(sizes.begin(), sizes.end(),
                  [&](long s) { return s == sizes.front(); });
  if (denom == 0.0 || degenerate)
    throw std::invalid_argument("epsilon fit is singular: all sizes equal");
  EpsilonFit fit;
  fit.sizes = sizes;
  fit.gaps = gaps;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.epsilon = std::exp(-fit.intercept / fit.slope);
  fit.residuals.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(static_cast<double>(sizes[i]));
    fit.residuals[i] = 1.0 / gaps[i] - (fit.intercept + fit.slope * x);
  }
  return fit;
}

std::vector<double> rescale_spectrum(const std::vector<SchmidtState>& states,
                                     double l) {
  if (states.empty()) return {};
  std::vector<double> h(states.size());
  const double e1 = states.front().energy;
  for (size_t i = 0; i < states.size(); ++i)
    h[i] = 2.0 * l / kPi * (states[i].energy - e1);
  return h;
}

SymmetryCharges symmetry_charges(const SchmidtState& state,
                                 const BogoliubovTransform& bt) {
  SymmetryCharges out;
  out.z2_parity = state.occupation.size() % 2 == 0 ? +1 : -1;
  if (!bt.mode_charge.empty()) {
    int q = 0;
    for (int j : state.occupation) q += bt.mode_charge[static_cast<size_t>(j)];
    out.u1_charge = q;
  }
  return out;
}

namespace {

struct GroupKey {
  double dim;
  int charge;
  bool use_charge;
  int parity;
};

double permutation_score(const std::vector<int>& assignment,
                         const Eigen::MatrixXcd& lattice_h1,
                         const Eigen::MatrixXd& tower_h1) {
  double score = 0.0;
  const int k = static_cast<int>(assignment.size());
  for (int a = 0; a < k; ++a) {
    if (assignment[a] < 0) continue;
    for (int b = 0; b < k; ++b) {
      if (assignment[b] < 0) continue;
      score += std::abs(std::abs(lattice_h1(a, b)) -
                        std::abs(tower_h1(assignment[a], assignment[b])));
    }
  }
  return score;
}

}  // namespace

StateMatching match_states(const std::vector<double>& lattice_dims,
                           const std::vector<SymmetryCharges>& charges,
                           const cft::TowerSpectrum& tower, int count,
                           const Eigen::MatrixXcd* lattice_h1,
                           const Eigen::MatrixXd* tower_h1) {
  if (count > static_cast<int>(lattice_dims.size()) ||
      charges.size() != lattice_dims.size())
    throw std::invalid_argument("matching inputs inconsistent");
  const bool use_charge =
      count > 0 && charges.front().u1_charge.has_value();

  // Tower slots per symmetry class, kept in dimension order; the K lowest
  // lattice states of a class always form a prefix of its slots.
  struct ClassSlots {
    std::vector<int> slots;
    std::vector<int> members;
  };
  std::map<std::pair<int, int>, ClassSlots> classes;
  for (size_t t = 0; t < tower.states.size(); ++t) {
    const auto& st = tower.states[t];
    classes[{st.parity, use_charge ? st.charge : 0}].slots.push_back(
        static_cast<int>(t));
  }

  StateMatching match;
  match.tower_index.assign(count, -1);
  match.deviations.assign(count, 0.0);
  for (int a = 0; a < count; ++a) {
    const std::pair<int, int> key{charges[a].z2_parity,
                                  use_charge ? *charges[a].u1_charge : 0};
    auto it = classes.find(key);
    if (it == classes.end() ||
        it->second.members.size() >= it->second.slots.size())
      throw numeric_error(
          "state " + std::to_string(a + 1) + " with dimension " +
          std::to_string(lattice_dims[a]) +
          " has no remaining tower slot in its symmetry class");
    ClassSlots& cls = it->second;
    const int slot = cls.slots[cls.members.size()];
    cls.members.push_back(a);
    match.tower_index[a] = slot;
    match.deviations[a] = std::abs(
        lattice_dims[a] - static_cast<double>(tower.states[slot].dimension));
    if (match.deviations[a] > kMatchTolerance) match.out_of_tolerance.push_back(a);
  }

  // Exact residual degeneracies: within each class, runs of equal-dimension
  // slots may be permuted; pick the order whose H_1 magnitudes agree best
  // with the lattice table.
  if (lattice_h1 != nullptr && tower_h1 != nullptr) {
    for (auto& [key, cls] : classes) {
      size_t i = 0;
      while (i < cls.members.size()) {
        // Run of equal-dimension slots starting at i; the matched lattice
        // states may occupy any ordered selection from the run.
        size_t j = i + 1;
        while (j < cls.slots.size() &&
               tower.states[cls.slots[j]].dimension ==
                   tower.states[cls.slots[i]].dimension)
          ++j;
        const size_t members_end = std::min(j, cls.members.size());
        if (j - i > 1) {
          std::vector<int> slots(cls.slots.begin() + i, cls.slots.begin() + j);
          std::sort(slots.begin(), slots.end());
          std::vector<int> best;
          double best_score = 0.0;
          do {
            std::vector<int> trial = match.tower_index;
            for (size_t k = i; k < members_end; ++k)
              trial[cls.members[k]] = slots[k - i];
            const double score = permutation_score(trial, *lattice_h1, *tower_h1);
            if (best.empty() || score < best_score) {
              best = trial;
              best_score = score;
            }
          } while (std::next_permutation(slots.begin(), slots.end()));
          match.tower_index = best;
        }
        i = std::max(members_end, i + 1);
      }
    }
  }
  return match;
}

namespace {

Eigen::MatrixXcd apply_gauge(const Eigen::MatrixXcd& t,
                             const Eigen::VectorXcd& d) {
  return d.conjugate().asDiagonal() * t * d.asDiagonal();
}

double alignment_cost(const Eigen::MatrixXcd& t, const Eigen::VectorXcd& d,
                      const Eigen::MatrixXd& c) {
  return (apply_gauge(t, d) - c.cast<Complex>()).norm();
}

Eigen::VectorXcd align_signs(const Eigen::MatrixXcd& t,
                             const Eigen::MatrixXd& c) {
  const int k = static_cast<int>(t.rows());
  Eigen::VectorXcd best = Eigen::VectorXcd::Ones(k);
  double best_cost = alignment_cost(t, best, c);
  Eigen::VectorXcd d(k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (k - 1)); ++mask) {
    d[0] = 1.0;
    for (int i = 1; i < k; ++i)
      d[i] = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
    const double cost = alignment_cost(t, d, c);
    if (cost < best_cost) {
      best_cost = cost;
      best = d;
    }
  }
  return best;
}

Eigen::VectorXcd align_phases(const Eigen::MatrixXcd& t,
                              const Eigen::MatrixXd& c) {
  // Maximize Re(d+ W d) with W = conj(C) .* T over unit phases d by cyclic
  // ascent; d_1 is pinned afterwards by a global phase.
  const int k = static_cast<int>(t.rows());
  Eigen::MatrixXcd w = c.cast<Complex>().conjugate().cwiseProduct(t);
  Eigen::MatrixXcd wh = 0.5 * (w + w.adjoint());
  Eigen::VectorXcd d = Eigen::VectorXcd::Ones(k);
  for (int sweep = 0; sweep < 500; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < k; ++i) {
      Complex grad = 0.0;
      for (int j = 0; j < k; ++j)
        if (j != i) grad += wh(i, j) * d[j];
      if (std::abs(grad) < 1e-300) continue;
      const Complex next = grad / std::abs(grad);
      moved = std::max(moved, std::abs(next - d[i]));
      d[i] = next;
    }
    if (moved < 1e-14) break;
  }
  const Complex g = d[0] / std::abs(d[0]);
  d *= std::conj(g);
  return d;
}

}  // namespace

ComparisonTable finite_size_table(int n, const Eigen::MatrixXcd& lattice,
                                  const Eigen::MatrixXd& cft) {
  if (lattice.rows() != lattice.cols() || lattice.rows() != cft.rows() ||
      cft.rows() != cft.cols())
    throw std::invalid_argument("comparison tables must be square and equal");
  ComparisonTable out;
  out.n = n;
  out.lattice = lattice;
  out.cft = cft;
  const double imag_scale = lattice.imag().cwiseAbs().maxCoeff();
  const double scale = 1.0 + lattice.cwiseAbs().maxCoeff();
  if (lattice.rows() <= 20 && imag_scale <= 1e-12 * scale)
    out.gauge = align_signs(lattice, cft);
  else
    out.gauge = align_phases(lattice, cft);
  out.aligned = apply_gauge(lattice, out.gauge);
  out.corrections = out.aligned - cft.cast<Complex>();
  return out;
}

}  // namespace entvir
