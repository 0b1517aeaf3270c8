#include "entvir/pipeline.hpp"

#include <cmath>
#include <numbers>

namespace entvir {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

IntervalRun run_interval(const ModelParams& params, long sites, int count,
                         bool with_vectors) {
  IntervalRun run;
  run.params = params;
  run.sites = sites;
  const CorrelationMatrix gamma = build_correlation_matrix(params, sites);
  if (with_vectors) {
    auto diag = diagonalize(gamma);
    run.spectrum = std::move(diag.spectrum);
    run.transform = std::move(diag.transform);
  } else {
    run.spectrum = single_particle_spectrum(gamma);
  }
  run.states = enumerate_schmidt(run.spectrum, count);
  run.entropy = entanglement_entropy(run.spectrum);
  run.gap = run.spectrum.energies[0] / kTwoPi;
  return run;
}

std::vector<long> standard_ladder(const ModelParams& params) {
  if (params.universality == UniversalityClass::Boson)
    return {512, 1024, 2048, 4096};
  return {64, 128, 256, 512, 1024};
}

EpsilonFit fit_epsilon_ladder(const ModelParams& params,
                              const std::vector<long>& sizes) {
  std::vector<double> gaps(sizes.size());
  for (size_t i = 0; i < sizes.size(); ++i)
    gaps[i] = run_interval(params, sizes[i], 1, false).gap;
  return fit_epsilon(sizes, gaps);
}

double fit_central_charge(const ModelParams& params,
                          const std::vector<long>& sizes) {
  if (sizes.size() < 3)
    throw std::invalid_argument("central-charge fit needs at least 3 sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (long size : sizes) {
    const double x = std::log(static_cast<double>(size));
    const double y = run_interval(params, size, 1, false).entropy;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(sizes.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return 3.0 * slope;
}

SizeTables virasoro_tables_for_run(const IntervalRun& run, double epsilon,
                                   const std::vector<int>& n_list) {
  if (!run.transform)
    throw std::invalid_argument("tables need a run computed with vectors");
  const ModelParams& params = run.params;
  const int count = static_cast<int>(run.states.size());

  SizeTables out;
  out.sites = run.sites;
  out.epsilon = epsilon;
  out.n_list = n_list;

  const LatticeProfile profile(run.sites / 2, epsilon);
  out.l = profile.l();
  out.dims = rescale_spectrum(run.states, out.l);
  out.charges.reserve(run.states.size());
  for (const auto& st : run.states)
    out.charges.push_back(symmetry_charges(st, *run.transform));

  const cft::Rational window_dim =
      params.universality == UniversalityClass::Boson ? cft::Rational(3)
                                                      : cft::Rational(4);
  out.tower = cft::tower_for(params.universality, window_dim);
  const int k_window = static_cast<int>(out.tower.states.size());

  std::vector<Eigen::MatrixXcd> lattice_tables;
  lattice_tables.reserve(n_list.size());
  for (int n : n_list) {
    const QuadraticOperator hn = build_Hn(params, profile, n);
    const QuadraticOperator rotated = to_entanglement_basis(hn, *run.transform);
    lattice_tables.push_back(matrix_element_table(rotated, run.states));
  }

  Eigen::MatrixXd tower_h1 = cft::hn_table(out.tower, 1, k_window).to_double();
  const Eigen::MatrixXcd* lattice_h1 = nullptr;
  for (size_t i = 0; i < n_list.size(); ++i)
    if (n_list[i] == 1) lattice_h1 = &lattice_tables[i];

  out.matching = match_states(out.dims, out.charges, out.tower, count,
                              lattice_h1, lattice_h1 ? &tower_h1 : nullptr);

  for (size_t i = 0; i < n_list.size(); ++i) {
    const Eigen::MatrixXd window =
        cft::hn_table(out.tower, n_list[i], k_window).to_double();
    Eigen::MatrixXd cft_matched(count, count);
    for (int a = 0; a < count; ++a)
      for (int b = 0; b < count; ++b)
        cft_matched(a, b) =
            window(out.matching.tower_index[a], out.matching.tower_index[b]);
    out.tables.push_back(
        finite_size_table(n_list[i], lattice_tables[i], cft_matched));
  }
  return out;
}

SizeTables virasoro_tables(const ModelParams& params, long sites,
                           double epsilon, const std::vector<int>& n_list,
                           int count) {
  const IntervalRun run = run_interval(params, sites, count, true);
  return virasoro_tables_for_run(run, epsilon, n_list);
}

}  // namespace entvir
